#include "fcrystal/rootdata.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "fcrystal/errors.hpp"

namespace fcrystal {

int GroupDatum::std_dim() const {
    switch (family) {
        case Family::A: return rank + 1;
        case Family::GL: return rank;
        case Family::B: return 2 * rank + 1;
        case Family::C:
        case Family::GSp: return 2 * rank;
        case Family::D: return 2 * rank;
    }
    throw std::logic_error("unreachable family");
}

int GroupDatum::torus_dim() const {
    return family == Family::A ? rank + 1 : rank;
}

std::string GroupDatum::str() const {
    std::string s = family_name(family);
    s += std::to_string(rank);
    if (factors != 1) s += " n=" + std::to_string(factors);
    if (twist != 1) s += " o=" + std::to_string(twist);
    return s;
}

GroupDatum make_group_datum(Family family, int rank, int factors, int twist) {
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    if (factors < 1) throw std::invalid_argument("factor count must be >= 1");
    if (twist != 1 && twist != 2) throw std::invalid_argument("twist must be 1 or 2");
    if (family == Family::D && rank < 2)
        throw std::invalid_argument("type D requires rank >= 2");
    if (twist == 2) {
        if (family == Family::A) {
            if (rank < 2)
                throw std::invalid_argument("A_1 has no nontrivial diagram automorphism");
        } else if (family != Family::D) {
            throw std::invalid_argument("twist 2 is only available for types A and D");
        }
    }
    return GroupDatum{family, rank, factors, twist};
}

SignedPerm SignedPerm::identity(int m) {
    SignedPerm p;
    p.image.resize(m);
    std::iota(p.image.begin(), p.image.end(), 0);
    p.sign.assign(m, 1);
    return p;
}

bool SignedPerm::is_identity() const {
    for (size_t q = 0; q < image.size(); ++q)
        if (image[q] != int(q) || sign[q] != 1) return false;
    return true;
}

SignedPerm compose(const SignedPerm& g, const SignedPerm& w) {
    SignedPerm out;
    size_t m = w.image.size();
    out.image.resize(m);
    out.sign.resize(m);
    for (size_t q = 0; q < m; ++q) {
        out.image[q] = g.image[w.image[q]];
        out.sign[q] = int8_t(w.sign[q] * g.sign[w.image[q]]);
    }
    return out;
}

std::string WeylElement::str() const {
    std::string out;
    for (size_t s = 0; s < parts.size(); ++s) {
        if (s) out += ';';
        const auto& p = parts[s];
        for (size_t q = 0; q < p.image.size(); ++q) {
            if (q) out += ':';
            if (p.sign[q] < 0) out += '-';
            out += std::to_string(p.image[q] + 1);
        }
    }
    return out;
}

void validate_weyl_element(const GroupDatum& datum, const WeylElement& w) {
    if (int(w.parts.size()) != datum.factors)
        throw std::invalid_argument("Weyl element must have one part per factor");
    int m = datum.torus_dim();
    for (const auto& p : w.parts) {
        if (int(p.image.size()) != m || int(p.sign.size()) != m)
            throw std::invalid_argument("signed permutation length mismatch");
        std::vector<char> seen(m, 0);
        int minus = 0;
        for (int q = 0; q < m; ++q) {
            if (p.image[q] < 0 || p.image[q] >= m || seen[p.image[q]]++)
                throw std::invalid_argument("image is not a permutation");
            if (p.sign[q] != 1 && p.sign[q] != -1)
                throw std::invalid_argument("signs must be +-1");
            if (p.sign[q] < 0) ++minus;
        }
        if ((datum.family == Family::A || datum.family == Family::GL) && minus > 0)
            throw std::invalid_argument("type A/GL admits no sign flips");
        if (datum.family == Family::D && minus % 2 != 0)
            throw std::invalid_argument("type D requires an even number of sign flips");
    }
}

WeylElement identity_weyl(const GroupDatum& datum) {
    WeylElement w;
    w.parts.assign(datum.factors, SignedPerm::identity(datum.torus_dim()));
    return w;
}

namespace {

unsigned long long factorial(int m) {
    unsigned long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

// Lexicographic rank -> permutation via the factorial number system.
std::vector<int> nth_permutation(int m, unsigned long long k) {
    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(m);
    unsigned long long f = factorial(m);
    for (int i = m; i >= 1; --i) {
        f /= i;
        size_t j = size_t(k / f);
        k %= f;
        out.push_back(pool[j]);
        pool.erase(pool.begin() + j);
    }
    return out;
}

bool family_has_signs(Family f) {
    return f == Family::B || f == Family::C || f == Family::GSp || f == Family::D;
}

} // namespace

WeylEnumeration::WeylEnumeration(const GroupDatum& datum, bool composite)
    : datum_(datum), composite_(composite) {
    int m = datum.torus_dim();
    perm_count_ = factorial(m);
    if (!family_has_signs(datum.family))
        sign_count_ = 1;
    else if (datum.family == Family::D)
        sign_count_ = 1ULL << (datum.rank - 1);
    else
        sign_count_ = 1ULL << datum.rank;
    factor_order_ = perm_count_ * sign_count_;
    if (composite_ || datum.factors == 1) {
        total_ = factor_order_;
    } else {
        unsigned __int128 t = 1;
        for (int s = 0; s < datum.factors; ++s) {
            t *= factor_order_;
            if (t > (unsigned __int128)1 << 62)
                throw resource_limit_error("full Weyl enumeration exceeds 2^62 elements");
        }
        total_ = (unsigned long long)t;
    }
}

SignedPerm WeylEnumeration::decode_factor(unsigned long long k) const {
    int m = datum_.torus_dim();
    SignedPerm p;
    p.image = nth_permutation(m, k / sign_count_);
    p.sign.assign(m, 1);
    unsigned long long bits = k % sign_count_;
    if (family_has_signs(datum_.family)) {
        int free_bits = (datum_.family == Family::D) ? datum_.rank - 1 : datum_.rank;
        int minus = 0;
        for (int q = 0; q < free_bits; ++q)
            if ((bits >> q) & 1) { p.sign[q] = -1; ++minus; }
        if (datum_.family == Family::D && minus % 2 == 1)
            p.sign[datum_.rank - 1] = -1; // parity completion
    }
    return p;
}

WeylElement WeylEnumeration::element(unsigned long long index) const {
    if (index >= total_) throw std::out_of_range("Weyl index out of range");
    WeylElement w;
    w.parts.reserve(datum_.factors);
    if (composite_ || datum_.factors == 1) {
        w.parts.push_back(decode_factor(index));
        for (int s = 1; s < datum_.factors; ++s)
            w.parts.push_back(SignedPerm::identity(datum_.torus_dim()));
    } else {
        for (int s = 0; s < datum_.factors; ++s) {
            w.parts.push_back(decode_factor(index % factor_order_));
            index /= factor_order_;
        }
    }
    return w;
}

namespace {

// Per-factor signed permutation on coordinates. A similitude flip acts by
// a_i -> b - a_i.
std::vector<Rat> apply_signed(const SignedPerm& p, const std::vector<Rat>& v,
                              const std::optional<Rat>& sim) {
    std::vector<Rat> out(v.size());
    for (size_t q = 0; q < v.size(); ++q) {
        if (p.sign[q] > 0)
            out[p.image[q]] = v[q];
        else
            out[p.image[q]] = sim ? (*sim - v[q]) : -v[q];
    }
    return out;
}

void apply_twist_in_place(Family fam, std::vector<Rat>& v) {
    if (fam == Family::A) {
        std::reverse(v.begin(), v.end());
        for (auto& x : v) x = -x;
    } else if (fam == Family::D) {
        v.back() = -v.back();
    } else {
        throw std::logic_error("twist only defined for A and D");
    }
}

} // namespace

RationalCoweight act_on_coweight(const GroupDatum& datum, const WeylElement& w,
                                 const RationalCoweight& nu) {
    if (int(nu.factors.size()) != datum.factors)
        throw std::invalid_argument("coweight factor count mismatch");
    if (int(w.parts.size()) != datum.factors)
        throw std::invalid_argument("Weyl element factor count mismatch");
    size_t m = size_t(datum.torus_dim());
    for (const auto& v : nu.factors)
        if (v.size() != m) throw std::invalid_argument("coweight coordinate length mismatch");
    if (nu.similitude.has_value() != datum.has_similitude())
        throw std::invalid_argument("similitude presence mismatch");

    int n = datum.factors;
    RationalCoweight out;
    out.factors.resize(n);
    out.similitude = nu.similitude;
    for (int s = 0; s < n; ++s)
        out.factors[(s + 1) % n] = apply_signed(w.parts[s], nu.factors[s], nu.similitude);
    if (datum.twist == 2) apply_twist_in_place(datum.family, out.factors[0]);
    return out;
}

RationalCoweight galois_step(const GroupDatum& datum, const RationalCoweight& nu) {
    return act_on_coweight(datum, identity_weyl(datum), nu);
}

std::vector<SignedPerm> mu_coset_reps(const GroupDatum& datum,
                                      const std::vector<long long>& weight,
                                      std::optional<long long> similitude) {
    int m = datum.torus_dim();
    if (int(weight.size()) != m)
        throw std::invalid_argument("mu_coset_reps: weight length mismatch");
    long long b = similitude.value_or(0);
    bool affine = datum.has_similitude();

    // one-factor Weyl generators
    std::vector<SignedPerm> gens;
    for (int i = 0; i + 1 < m; ++i) {
        SignedPerm s = SignedPerm::identity(m);
        std::swap(s.image[i], s.image[i + 1]);
        gens.push_back(std::move(s));
    }
    switch (datum.family) {
        case Family::A:
        case Family::GL:
            break;
        case Family::B:
        case Family::C:
        case Family::GSp: {
            SignedPerm s = SignedPerm::identity(m);
            s.sign[m - 1] = -1;
            gens.push_back(std::move(s));
            break;
        }
        case Family::D: {
            SignedPerm s = SignedPerm::identity(m);
            std::swap(s.image[m - 2], s.image[m - 1]);
            s.sign[m - 2] = -1;
            s.sign[m - 1] = -1;
            gens.push_back(std::move(s));
            break;
        }
    }

    auto apply = [&](const SignedPerm& p, const std::vector<long long>& v) {
        std::vector<long long> out(m);
        for (int q = 0; q < m; ++q)
            out[p.image[q]] = p.sign[q] > 0 ? v[q] : (affine ? b - v[q] : -v[q]);
        return out;
    };

    std::map<std::vector<long long>, size_t> seen;
    std::vector<SignedPerm> reps;
    std::vector<std::vector<long long>> frontier;
    seen.emplace(weight, 0);
    reps.push_back(SignedPerm::identity(m));
    frontier.push_back(weight);
    for (size_t head = 0; head < frontier.size(); ++head) {
        auto v = frontier[head];
        const SignedPerm witness = reps[seen.at(v)];
        for (const auto& g : gens) {
            auto img = apply(g, v);
            if (seen.count(img)) continue;
            if (reps.size() > 4'000'000)
                throw resource_limit_error("mu orbit is too large for the reduced sweep");
            seen.emplace(img, reps.size());
            reps.push_back(compose(g, witness));
            frontier.push_back(std::move(img));
        }
    }
    return reps;
}

MinusculeSpec MinusculeSpec::from_l(const GroupDatum& datum, int l) {
    if (l < 1 || l > datum.factors)
        throw std::invalid_argument(
            "l-shorthand requires 1 <= l <= factor count (got l=" + std::to_string(l) +
            " with " + std::to_string(datum.factors) + " factors)");
    MinusculeSpec mu;
    mu.l = l;
    mu.weights.assign(datum.factors, std::vector<long long>(datum.torus_dim(), 0));
    for (int s = 0; s < l; ++s) mu.weights[s][0] = 1;
    if (datum.has_similitude()) mu.similitude = 0;
    return mu;
}

MinusculeSpec MinusculeSpec::siegel(const GroupDatum& datum) {
    if (!datum.has_similitude())
        throw std::invalid_argument("the Siegel pattern requires a similitude datum");
    MinusculeSpec mu;
    mu.weights.assign(datum.factors, std::vector<long long>(datum.torus_dim(), 0));
    mu.similitude = -1;
    return mu;
}

MinusculeSpec MinusculeSpec::explicit_weights(const GroupDatum& datum,
                                              std::vector<std::vector<long long>> weights,
                                              std::optional<long long> similitude) {
    MinusculeSpec mu;
    mu.weights = std::move(weights);
    if (datum.has_similitude())
        mu.similitude = similitude.value_or(0);
    else if (similitude)
        throw std::invalid_argument("similitude weight given for a non-similitude datum");
    validate_minuscule(datum, mu);
    return mu;
}

RationalCoweight MinusculeSpec::as_coweight() const {
    RationalCoweight nu;
    nu.factors.reserve(weights.size());
    for (const auto& v : weights) {
        std::vector<Rat> row;
        row.reserve(v.size());
        for (long long x : v) row.emplace_back(x);
        nu.factors.push_back(std::move(row));
    }
    if (similitude) nu.similitude = Rat(*similitude);
    return nu;
}

std::string MinusculeSpec::str() const {
    if (l) return "l=" + std::to_string(*l);
    std::string s = "weights ";
    for (size_t f = 0; f < weights.size(); ++f) {
        if (f) s += ';';
        for (size_t i = 0; i < weights[f].size(); ++i) {
            if (i) s += ':';
            s += std::to_string(weights[f][i]);
        }
    }
    if (similitude) s += " sim " + std::to_string(*similitude);
    return s;
}

void validate_minuscule(const GroupDatum& datum, const MinusculeSpec& mu) {
    if (int(mu.weights.size()) != datum.factors)
        throw std::invalid_argument("mu must have one weight vector per factor");
    for (const auto& v : mu.weights)
        if (int(v.size()) != datum.torus_dim())
            throw std::invalid_argument("mu weight vector length mismatch");
    if (mu.similitude.has_value() != datum.has_similitude())
        throw std::invalid_argument("mu similitude presence mismatch");
}

std::vector<RootFunctional> positive_roots(const GroupDatum& datum) {
    int r = datum.rank;
    int t = datum.torus_dim();
    std::vector<RootFunctional> roots;
    auto vec = [&](int i, long long ci, int j, long long cj) {
        RootFunctional f;
        f.coords.assign(t, 0);
        f.coords[i] += ci;
        if (j >= 0) f.coords[j] += cj;
        return f;
    };
    switch (datum.family) {
        case Family::A:
        case Family::GL:
            for (int i = 0; i < t; ++i)
                for (int j = i + 1; j < t; ++j) roots.push_back(vec(i, 1, j, -1));
            break;
        case Family::B:
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    roots.push_back(vec(i, 1, j, -1));
                    roots.push_back(vec(i, 1, j, 1));
                }
            for (int i = 0; i < r; ++i) roots.push_back(vec(i, 1, -1, 0));
            break;
        case Family::C:
        case Family::GSp:
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    roots.push_back(vec(i, 1, j, -1));
                    auto f = vec(i, 1, j, 1);
                    if (datum.has_similitude()) f.similitude = -1;
                    roots.push_back(f);
                }
            for (int i = 0; i < r; ++i) {
                auto f = vec(i, 2, -1, 0);
                if (datum.has_similitude()) f.similitude = -1;
                roots.push_back(f);
            }
            break;
        case Family::D:
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    roots.push_back(vec(i, 1, j, -1));
                    roots.push_back(vec(i, 1, j, 1));
                }
            break;
    }
    return roots;
}

std::vector<RootFunctional> simple_roots(const GroupDatum& datum) {
    int r = datum.rank;
    int t = datum.torus_dim();
    std::vector<RootFunctional> roots;
    auto adj = [&](int i) {
        RootFunctional f;
        f.coords.assign(t, 0);
        f.coords[i] = 1;
        f.coords[i + 1] = -1;
        return f;
    };
    for (int i = 0; i + 1 < t; ++i) roots.push_back(adj(i));
    RootFunctional last;
    last.coords.assign(t, 0);
    switch (datum.family) {
        case Family::A:
        case Family::GL:
            return roots; // adjacent differences only
        case Family::B:
            last.coords[r - 1] = 1;
            break;
        case Family::C:
        case Family::GSp:
            last.coords[r - 1] = 2;
            if (datum.has_similitude()) last.similitude = -1;
            break;
        case Family::D:
            if (r >= 2) {
                last.coords[r - 2] = 1;
                last.coords[r - 1] = 1;
            }
            break;
    }
    if (r >= 2 || datum.family == Family::B || datum.family == Family::C ||
        datum.family == Family::GSp)
        roots.push_back(last);
    return roots;
}

Rat pair_factor(const RationalCoweight& nu, size_t factor, const RootFunctional& root) {
    const auto& v = nu.factors.at(factor);
    if (v.size() != root.coords.size())
        throw std::invalid_argument("pair_factor: coordinate length mismatch");
    Rat acc;
    for (size_t i = 0; i < v.size(); ++i)
        if (root.coords[i] != 0) acc += v[i] * Rat(root.coords[i]);
    if (nu.similitude && root.similitude != 0)
        acc += *nu.similitude * Rat(root.similitude);
    return acc;
}

long long adjoint_depth(const GroupDatum& datum, const MinusculeSpec& mu) {
    validate_minuscule(datum, mu);
    auto roots = positive_roots(datum);
    long long depth = 0;
    for (int s = 0; s < datum.factors; ++s) {
        for (const auto& a : roots) {
            long long v = 0;
            for (size_t i = 0; i < a.coords.size(); ++i)
                v += mu.weights[s][i] * a.coords[i];
            if (mu.similitude) v += *mu.similitude * a.similitude;
            depth = std::max(depth, v < 0 ? -v : v);
        }
    }
    return depth;
}

namespace {

std::vector<BasisVec> build_basis_table(const GroupDatum& datum) {
    int r = datum.rank;
    int dim = datum.std_dim();
    int t = datum.torus_dim();
    std::vector<BasisVec> table;
    table.reserve(size_t(datum.factors) * dim);
    for (int s = 0; s < datum.factors; ++s) {
        int base = s * dim;
        for (int pos = 0; pos < dim; ++pos) {
            BasisVec b;
            b.factor = s;
            b.pos = pos;
            b.weight.assign(t, 0);
            switch (datum.family) {
                case Family::A:
                case Family::GL:
                    b.weight[pos] = 1;
                    b.partner = -1;
                    break;
                case Family::B:
                case Family::D:
                    if (pos == 2 * r) { // odd vector, type B only
                        b.partner = base + pos;
                    } else {
                        int q = pos / 2;
                        b.weight[q] = (pos % 2 == 0) ? 1 : -1;
                        b.partner = base + (pos ^ 1);
                    }
                    break;
                case Family::C:
                case Family::GSp:
                    if (pos < r) {
                        b.weight[pos] = 1;
                        b.partner = base + pos + r;
                    } else {
                        b.weight[pos - r] = -1;
                        if (datum.has_similitude()) b.sim_weight = 1;
                        b.partner = base + pos - r;
                    }
                    break;
            }
            table.push_back(std::move(b));
        }
    }
    return table;
}

// Within-factor basis action of a signed permutation.
int apply_signed_basis(const GroupDatum& datum, const SignedPerm& p, int pos) {
    int r = datum.rank;
    switch (datum.family) {
        case Family::A:
        case Family::GL:
            return p.image[pos];
        case Family::B:
        case Family::D: {
            if (pos == 2 * r) return pos; // B odd vector
            int q = pos / 2;
            int side = pos % 2;
            if (p.sign[q] < 0) side ^= 1;
            return 2 * p.image[q] + side;
        }
        case Family::C:
        case Family::GSp: {
            int q = pos % r;
            int side = pos / r;
            if (p.sign[q] < 0) side ^= 1;
            return p.image[q] + side * r;
        }
    }
    throw std::logic_error("unreachable family");
}

} // namespace

const std::vector<BasisVec>& basis_table(const GroupDatum& datum) {
    using Key = std::tuple<Family, int, int, int>;
    static std::map<Key, std::vector<BasisVec>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    Key key{datum.family, datum.rank, datum.factors, datum.twist};
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, build_basis_table(datum)).first;
    return it->second;
}

std::vector<WeightFunctional> standard_weights(const GroupDatum& datum) {
    const auto& table = basis_table(datum);
    std::vector<WeightFunctional> out;
    out.reserve(table.size());
    for (const auto& b : table) {
        WeightFunctional f;
        f.factors.assign(datum.factors, std::vector<long long>(datum.torus_dim(), 0));
        f.factors[b.factor] = b.weight;
        f.similitude = b.sim_weight;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<int> basis_permutation(const GroupDatum& datum, const WeylElement& w) {
    validate_weyl_element(datum, w);
    if (datum.twist == 2 && datum.family == Family::A)
        throw std::invalid_argument(
            "twisted type A admits no monomial realization on the standard module");
    int n = datum.factors;
    int dim = datum.std_dim();
    std::vector<int> perm(size_t(n) * dim);
    for (int s = 0; s < n; ++s) {
        for (int pos = 0; pos < dim; ++pos) {
            int moved = apply_signed_basis(datum, w.parts[s], pos);
            int target_factor = (s + 1) % n;
            if (target_factor == 0 && datum.twist == 2) {
                // type D twist: exchange the last pair
                if (moved == 2 * datum.rank - 2)
                    moved = 2 * datum.rank - 1;
                else if (moved == 2 * datum.rank - 1)
                    moved = 2 * datum.rank - 2;
            }
            perm[size_t(s) * dim + pos] = target_factor * dim + moved;
        }
    }
    return perm;
}

MonomialOperator weyl_to_monomial(const GroupDatum& datum, const WeylElement& w,
                                  const MinusculeSpec& mu) {
    validate_minuscule(datum, mu);
    const auto& table = basis_table(datum);
    MonomialOperator op;
    op.size = int(table.size());
    op.perm = basis_permutation(datum, w);
    op.exp.resize(table.size());
    for (size_t e = 0; e < table.size(); ++e) {
        const auto& b = table[e];
        long long d = 0;
        for (size_t i = 0; i < b.weight.size(); ++i)
            d += mu.weights[b.factor][i] * b.weight[i];
        if (mu.similitude) d += *mu.similitude * b.sim_weight;
        op.exp[e] = -d;
    }
    return op;
}

PairingSpec standard_pairing(const GroupDatum& datum, const MinusculeSpec& mu) {
    if (datum.family == Family::A || datum.family == Family::GL)
        throw std::invalid_argument("type A/GL standard module carries no pairing");
    validate_minuscule(datum, mu);
    const auto& table = basis_table(datum);
    PairingSpec p;
    p.partner.reserve(table.size());
    for (const auto& b : table) p.partner.push_back(b.partner);
    p.similitude_slope = mu.similitude ? Rat(-*mu.similitude) : Rat(0);
    return p;
}

bool d_orbit_predicate(const GroupDatum& datum, const WeylElement& w) {
    if (datum.family != Family::D)
        throw std::invalid_argument("orbit predicate is defined for type D");
    if (datum.factors != 1)
        throw std::invalid_argument("orbit predicate requires a single factor");
    auto perm = basis_permutation(datum, w);
    int target = 2 * datum.rank - 2;  // position 2r-1, 1-based
    int avoided = 2 * datum.rank - 1; // position 2r, 1-based
    bool has_target = false;
    int i = 0;
    do {
        if (i == avoided) return false;
        if (i == target) has_target = true;
        i = perm[i];
    } while (i != 0);
    return has_target;
}

} // namespace fcrystal
