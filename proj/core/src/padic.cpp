#include "fcrystal/padic.hpp"

#include <algorithm>
#include <stdexcept>

namespace fcrystal {

namespace {

using u64 = unsigned long long;
using u128 = unsigned __int128;

u64 pow_checked(long long p, int k) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    u128 v = 1;
    for (int i = 0; i < k; ++i) {
        v *= u128(p);
        if (v > (u128(1) << 62))
            throw std::invalid_argument("p^N exceeds the 2^62 working range");
    }
    return u64(v);
}

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 modinv(u64 a, u64 m) {
    // extended Euclid; a must be a unit mod m
    long long t = 0, newt = 1;
    long long r = (long long)m, newr = (long long)(a % m);
    while (newr != 0) {
        long long q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::domain_error("modinv: not a unit");
    return u64(((t % (long long)m) + (long long)m) % (long long)m);
}

} // namespace

PadicApprox PadicApprox::zero(long long p, int bound) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    return PadicApprox(p, bound, 0, 0);
}

PadicApprox PadicApprox::from_integer(long long p, long long v, int N) {
    if (N < 1) throw std::invalid_argument("precision must be >= 1");
    u64 mod = pow_checked(p, N);
    u64 x = u64(((v % (long long)mod) + (long long)mod) % (long long)mod);
    if (x == 0) return zero(p, N);
    int val = 0;
    while (x % u64(p) == 0 && val < N) { x /= u64(p); ++val; }
    return PadicApprox(p, val, x, N - val);
}

PadicApprox PadicApprox::from_unit(long long p, int val, u64 unit, int relprec) {
    if (relprec < 1) throw std::invalid_argument("relative precision must be >= 1");
    u64 mod = pow_checked(p, relprec);
    unit %= mod;
    if (unit == 0 || unit % u64(p) == 0)
        throw std::invalid_argument("unit part must be prime to p");
    return PadicApprox(p, val, unit, relprec);
}

PadicApprox PadicApprox::operator+(const PadicApprox& o) const {
    if (p_ != o.p_) throw std::invalid_argument("prime mismatch");
    int known = std::min(known_to(), o.known_to());
    int base = std::min(val_, o.val_);
    if (known <= base) return zero(p_, known);
    // both values modulo p^{known - base}, shifted down by p^base
    int width = known - base;
    u64 mod = pow_checked(p_, width);
    auto shifted = [&](const PadicApprox& x) -> u64 {
        if (x.relprec_ == 0) return 0;
        u64 v = x.unit_ % mod;
        for (int i = 0; i < x.val_ - base; ++i) v = mulmod(v, u64(p_), mod);
        return v;
    };
    u64 sum = (shifted(*this) + shifted(o)) % mod;
    if (sum == 0) return zero(p_, known);
    int extra = 0;
    while (sum % u64(p_) == 0) { sum /= u64(p_); ++extra; }
    return PadicApprox(p_, base + extra, sum, width - extra);
}

PadicApprox PadicApprox::operator-() const {
    if (relprec_ == 0) return *this;
    u64 mod = pow_checked(p_, relprec_);
    return PadicApprox(p_, val_, mod - (unit_ % mod), relprec_);
}

PadicApprox PadicApprox::operator-(const PadicApprox& o) const { return *this + (-o); }

PadicApprox PadicApprox::operator*(const PadicApprox& o) const {
    if (p_ != o.p_) throw std::invalid_argument("prime mismatch");
    if (relprec_ == 0 || o.relprec_ == 0)
        return zero(p_, val_ + o.val_);
    int rp = std::min(relprec_, o.relprec_);
    u64 mod = pow_checked(p_, rp);
    return PadicApprox(p_, val_ + o.val_, mulmod(unit_ % mod, o.unit_ % mod, mod), rp);
}

PadicApprox PadicApprox::invert() const {
    if (relprec_ == 0)
        throw std::domain_error("cannot invert a value with uncertain valuation");
    u64 mod = pow_checked(p_, relprec_);
    return PadicApprox(p_, -val_, modinv(unit_ % mod, mod), relprec_);
}

PadicApprox PadicApprox::shifted(int k) const {
    return PadicApprox(p_, val_ + k, unit_, relprec_);
}

PadicApprox PadicApprox::reduce_precision(int N) const {
    if (known_to() <= N) return *this;
    if (val_ >= N) return zero(p_, N);
    u64 mod = pow_checked(p_, N - val_);
    u64 u = unit_ % mod;
    if (u == 0) return zero(p_, N);
    int extra = 0;
    while (u % u64(p_) == 0) { u /= u64(p_); ++extra; }
    return PadicApprox(p_, val_ + extra, u, N - val_ - extra);
}

bool PadicApprox::congruent(const PadicApprox& o) const {
    if (p_ != o.p_) return false;
    int known = std::min(known_to(), o.known_to());
    return (*this - o).valuation() >= known;
}

std::string PadicApprox::str() const {
    if (relprec_ == 0) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    std::string s = std::to_string(p_) + "^" + std::to_string(val_) + "*" +
                    std::to_string(unit_);
    return s;
}

PadicMatrix PadicMatrix::identity(long long p, int precision, int n) {
    PadicMatrix m;
    m.p = p;
    m.precision = precision;
    m.n = n;
    m.a.assign(size_t(n) * n, PadicApprox::zero(p, precision));
    for (int i = 0; i < n; ++i) m.at(i, i) = PadicApprox::from_integer(p, 1, precision);
    return m;
}

PadicMatrix PadicMatrix::zero_matrix(long long p, int precision, int n) {
    PadicMatrix m;
    m.p = p;
    m.precision = precision;
    m.n = n;
    m.a.assign(size_t(n) * n, PadicApprox::zero(p, precision));
    return m;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
    if (n != o.n || p != o.p) throw std::invalid_argument("matrix shape/prime mismatch");
    PadicMatrix out = zero_matrix(p, precision, n);
    // seed the accumulators with an unconstrained zero: the sum's precision
    // must come from the summands alone, not from the target's default bound
    constexpr int kUnboundedZero = 1 << 24;
    for (auto& x : out.a) x = PadicApprox::zero(p, kUnboundedZero);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const PadicApprox& x = at(i, k);
            for (int j = 0; j < n; ++j)
                out.at(i, j) = out.at(i, j) + x * o.at(k, j);
        }
    return out;
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
    if (n != o.n || p != o.p) throw std::invalid_argument("matrix shape/prime mismatch");
    PadicMatrix out = *this;
    for (size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] + o.a[i];
    return out;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
    if (n != o.n || p != o.p) throw std::invalid_argument("matrix shape/prime mismatch");
    PadicMatrix out = *this;
    for (size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] - o.a[i];
    return out;
}

PadicMatrix PadicMatrix::inverse() const {
    PadicMatrix m = *this;
    PadicMatrix inv = identity(p, precision, n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1, best = 0;
        for (int row = col; row < n; ++row) {
            const PadicApprox& x = m.at(row, col);
            if (x.is_tracked_zero()) continue;
            if (pivot < 0 || x.valuation() < best) { pivot = row; best = x.valuation(); }
        }
        if (pivot < 0)
            throw precision_error("matrix inverse: no pivot with certified valuation");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(col, j), m.at(pivot, j));
                std::swap(inv.at(col, j), inv.at(pivot, j));
            }
        PadicApprox scale = m.at(col, col).invert();
        for (int j = 0; j < n; ++j) {
            m.at(col, j) = m.at(col, j) * scale;
            inv.at(col, j) = inv.at(col, j) * scale;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            PadicApprox f = m.at(row, col);
            for (int j = 0; j < n; ++j) {
                m.at(row, j) = m.at(row, j) - f * m.at(col, j);
                inv.at(row, j) = inv.at(row, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

int PadicMatrix::min_valuation() const {
    int v = a.empty() ? 0 : a[0].valuation();
    for (const auto& x : a) v = std::min(v, x.valuation());
    return v;
}

PadicMatrix PadicMatrix::reduce_precision(int N) const {
    PadicMatrix out = *this;
    out.precision = std::min(precision, N);
    for (auto& x : out.a) x = x.reduce_precision(N);
    return out;
}

PadicMatrix ad_phi(const PadicMatrix& phi, const PadicMatrix& X) {
    return phi * X * phi.inverse();
}

int SplitProblem::dimension() const {
    int d = 0;
    for (int s : block_sizes) d += s;
    return d;
}

int SplitProblem::block_of(int index) const {
    int acc = 0;
    for (size_t b = 0; b < block_sizes.size(); ++b) {
        acc += block_sizes[b];
        if (index < acc) return int(b);
    }
    throw std::out_of_range("index beyond block structure");
}

long long SplitProblem::relative_slope(int i, int j) const {
    return block_slopes[block_of(i)] - block_slopes[block_of(j)];
}

void SplitProblem::validate() const {
    if (block_sizes.size() != block_slopes.size() || block_sizes.empty())
        throw std::invalid_argument("block sizes and slopes must match and be nonempty");
    for (int s : block_sizes)
        if (s < 1) throw std::invalid_argument("block sizes must be >= 1");
    int d = dimension();
    if (phi.n != d || u.n != d || phi.p != p || u.p != p)
        throw std::invalid_argument("matrix dimensions or primes do not match the blocks");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const PadicApprox& f = phi.at(i, j);
            const PadicApprox& g = u.at(i, j);
            if (block_of(i) != block_of(j)) {
                if (!f.is_tracked_zero())
                    throw std::invalid_argument("phi must be block-diagonal");
                if (!g.is_tracked_zero() && relative_slope(i, j) <= 0)
                    throw std::invalid_argument(
                        "u is supported at a non-positive relative slope");
            } else if (i == j) {
                if (f.is_tracked_zero() || f.valuation() != block_slopes[block_of(i)])
                    throw std::invalid_argument(
                        "phi diagonal must carry exactly the block slope");
                if (g.is_tracked_zero() ||
                    !(g - PadicApprox::from_integer(p, 1, precision)).is_tracked_zero())
                    throw std::invalid_argument("u must be the identity on diagonal blocks");
            } else {
                // same block, off-diagonal: phi stays p^slope-integral, u vanishes
                if (!f.is_tracked_zero() && f.valuation() < block_slopes[block_of(i)])
                    throw std::invalid_argument(
                        "phi block entry below the block slope valuation");
                if (!g.is_tracked_zero())
                    throw std::invalid_argument("u must be the identity on diagonal blocks");
            }
        }
}

namespace {

// restriction of (v - identity) to entries of relative slope exactly eta
PadicMatrix stratum_part(const SplitProblem& pb, const PadicMatrix& v, long long eta) {
    PadicMatrix out = PadicMatrix::zero_matrix(pb.p, v.precision, v.n);
    for (int i = 0; i < v.n; ++i)
        for (int j = 0; j < v.n; ++j)
            if (i != j && pb.relative_slope(i, j) == eta) out.at(i, j) = v.at(i, j);
    return out;
}

// Unipotent elements of the positive-slope radical are exactly the identity
// outside the positive-slope positions; computed entries there only carry
// rounding bounds and can be restored to exact zeros (huge O-bounds), which
// keeps them from eroding later products through phi^{-1}.
PadicMatrix reclean_unipotent(const SplitProblem& pb, const PadicMatrix& m, int N) {
    constexpr int kUnboundedZero = 1 << 24;
    PadicMatrix out = PadicMatrix::identity(pb.p, N, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            if (pb.relative_slope(i, j) > 0)
                out.at(i, j) = m.at(i, j).reduce_precision(N);
            else if (i != j)
                out.at(i, j) = PadicApprox::zero(pb.p, kUnboundedZero);
        }
    return out;
}

bool effectively_zero(const PadicMatrix& m, int N) { return m.min_valuation() >= N; }

// phi is block-diagonal, so its inverse is too: invert each p^slope * unit
// block separately and keep the off-block zeros exact. The generic
// Gauss-Jordan would smear O(p^k) bounds over the structural zeros.
PadicMatrix block_inverse(const SplitProblem& pb, const PadicMatrix& phi) {
    constexpr int kUnboundedZero = 1 << 24;
    PadicMatrix out = PadicMatrix::zero_matrix(pb.p, phi.precision, phi.n);
    for (auto& x : out.a) x = PadicApprox::zero(pb.p, kUnboundedZero);
    int offset = 0;
    for (size_t b = 0; b < pb.block_sizes.size(); ++b) {
        int size = pb.block_sizes[b];
        int slope = int(pb.block_slopes[b]);
        PadicMatrix unit = PadicMatrix::zero_matrix(pb.p, phi.precision, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                unit.at(i, j) = phi.at(offset + i, offset + j).shifted(-slope);
        PadicMatrix inv = unit.inverse();
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                out.at(offset + i, offset + j) = inv.at(i, j).shifted(-slope);
        offset += size;
    }
    return out;
}

} // namespace

PadicMatrix split_slopes(const SplitProblem& problem, int N) {
    if (N < 1) throw std::invalid_argument("target precision must be >= 1");
    problem.validate();

    std::vector<long long> etas;
    for (size_t i = 0; i < problem.block_slopes.size(); ++i)
        for (size_t j = 0; j < problem.block_slopes.size(); ++j) {
            long long eta = problem.block_slopes[i] - problem.block_slopes[j];
            if (eta > 0) etas.push_back(eta);
        }
    std::sort(etas.begin(), etas.end());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());

    PadicMatrix phi = problem.phi.reduce_precision(N);
    PadicMatrix v = problem.u.reduce_precision(N);
    PadicMatrix h_total = PadicMatrix::identity(problem.p, N, v.n);
    PadicMatrix phi_inv = block_inverse(problem, phi);

    for (long long eta : etas) {
        PadicMatrix part = stratum_part(problem, v, eta);
        if (effectively_zero(part, N)) continue;

        // X = -sum_{j>=0} Ad(phi)^j(part); each application gains eta in
        // valuation on this stratum
        PadicMatrix term = part;
        PadicMatrix X = PadicMatrix::zero_matrix(problem.p, N, v.n) - part;
        int stall_budget = 1; // ceil(1/eta), slopes being integral
        int stalls = 0;
        int last_val = term.min_valuation();
        while (true) {
            // Ad(phi) preserves the stratum support; restricting restores
            // the exact zeros outside it
            term = stratum_part(problem, (phi * term * phi_inv).reduce_precision(N), eta);
            if (effectively_zero(term, N)) break;
            int val = term.min_valuation();
            if (val <= last_val) {
                if (++stalls > stall_budget)
                    throw divergence_error(
                        "series term is not gaining valuation; slope data is malformed");
            } else {
                stalls = 0;
                last_val = val;
            }
            X = X - term;
        }

        PadicMatrix h = reclean_unipotent(
            problem, PadicMatrix::identity(problem.p, N, v.n) + X, N);
        v = reclean_unipotent(problem, h * v * phi * h.inverse() * phi_inv, N);
        h_total = reclean_unipotent(problem, h * h_total, N);
    }
    return h_total;
}

int verify_conjugation(const PadicMatrix& h, const PadicMatrix& u,
                       const PadicMatrix& phi, int N) {
    PadicMatrix lhs = h * u * phi * h.inverse();
    PadicMatrix residual = (lhs - phi).reduce_precision(N);
    return std::min(residual.min_valuation(), N);
}

} // namespace fcrystal
