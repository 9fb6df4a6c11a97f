#include "fcrystal/newton.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fcrystal/errors.hpp"
#include "fcrystal/smith.hpp"

namespace fcrystal {

RationalCoweight newton_point(const GroupDatum& datum, const MinusculeSpec& mu,
                              const WeylElement& w) {
    validate_minuscule(datum, mu);
    validate_weyl_element(datum, w);
    auto step = [&](const RationalCoweight& v) { return act_on_coweight(datum, w, v); };
    auto [avg, d] = orbit_average(mu.as_coweight(), step);
    (void)d;
    return dominantize(avg, datum.ctx());
}

NewtonPolygon polygon_of_point(const GroupDatum& datum, const RationalCoweight& nu) {
    const auto& table = basis_table(datum);
    std::vector<Rat> raw;
    raw.reserve(table.size());
    for (const auto& b : table) {
        Rat s;
        const auto& v = nu.factors[b.factor];
        for (size_t i = 0; i < b.weight.size(); ++i)
            if (b.weight[i] != 0) s += v[i] * Rat(b.weight[i]);
        if (nu.similitude && b.sim_weight != 0) s += *nu.similitude * Rat(b.sim_weight);
        raw.push_back(s);
    }
    return polygon_from_slopes(std::move(raw));
}

NewtonPolygon newton_polygon_of(const GroupDatum& datum, const MinusculeSpec& mu,
                                const WeylElement& w) {
    return polygon_of_point(datum, newton_point(datum, mu, w));
}

namespace {

bool pairs_zero_with_all_roots(const GroupDatum& datum, const RationalCoweight& nu) {
    auto roots = positive_roots(datum);
    for (int s = 0; s < datum.factors; ++s)
        for (const auto& a : roots)
            if (!pair_factor(nu, size_t(s), a).is_zero()) return false;
    return true;
}

} // namespace

bool is_basic(const GroupDatum& datum, const MinusculeSpec& mu, const WeylElement& w) {
    return pairs_zero_with_all_roots(datum, newton_point(datum, mu, w));
}

bool is_elliptic(const GroupDatum& datum, const WeylElement& w) {
    validate_weyl_element(datum, w);
    auto step = [&](const RationalCoweight& v) { return act_on_coweight(datum, w, v); };
    int t = datum.torus_dim();
    auto probe = [&](const RationalCoweight& v) {
        auto [avg, d] = orbit_average(v, step);
        (void)d;
        return pairs_zero_with_all_roots(datum, avg);
    };
    RationalCoweight v;
    v.factors.assign(datum.factors, std::vector<Rat>(t, Rat(0)));
    if (datum.has_similitude()) v.similitude = Rat(0);
    for (int s = 0; s < datum.factors; ++s)
        for (int i = 0; i < t; ++i) {
            v.factors[s][i] = Rat(1);
            bool ok = probe(v);
            v.factors[s][i] = Rat(0);
            if (!ok) return false;
        }
    if (datum.has_similitude()) {
        v.similitude = Rat(1);
        if (!probe(v)) return false;
    }
    return true;
}

WeylElement construct_basic_element(const GroupDatum& datum) {
    int t = datum.torus_dim();
    auto with_first_factor = [&](SignedPerm p) {
        WeylElement w = identity_weyl(datum);
        w.parts[0] = std::move(p);
        return w;
    };
    WeylElement w;
    switch (datum.family) {
        case Family::B:
        case Family::C:
        case Family::GSp: {
            SignedPerm p = SignedPerm::identity(t);
            p.sign.assign(t, -1);
            w = with_first_factor(std::move(p));
            break;
        }
        case Family::A:
        case Family::GL: {
            SignedPerm p = SignedPerm::identity(t);
            if (datum.twist == 2) {
                for (int q = 0; q < t; ++q) p.image[q] = t - 1 - q; // longest element
            } else {
                for (int q = 0; q < t; ++q) p.image[q] = (q + 1) % t; // full cycle
            }
            w = with_first_factor(std::move(p));
            break;
        }
        case Family::D: {
            if (datum.twist == 1 && datum.rank % 2 == 0) {
                SignedPerm p = SignedPerm::identity(t);
                p.sign.assign(t, -1);
                w = with_first_factor(std::move(p));
            } else {
                WeylEnumeration en(datum, true);
                bool found = false;
                for (unsigned long long i = 0; i < en.size() && !found; ++i) {
                    WeylElement cand = en.element(i);
                    if (is_elliptic(datum, cand)) {
                        w = std::move(cand);
                        found = true;
                    }
                }
                if (!found)
                    throw std::logic_error(
                        "no basic Weyl element found for " + datum.str() +
                        "; this contradicts the classification and indicates a defect");
            }
            break;
        }
    }
    if (!is_elliptic(datum, w))
        throw std::logic_error("constructed element for " + datum.str() + " is not basic");
    return w;
}

// ---------------------------------------------------------------------------
// Strata enumeration. The orbit of an integral mu under a twisted signed
// permutation stays integral, so the hot loop runs on flat 64-bit vectors
// with one rational reduction per element at the end.
//
// By default the sweep is reduced: factor 1 runs over the full one-factor
// Weyl group and factor s >= 2 over coset representatives of the stabilizer
// of mu_s. Twisted conjugation by per-factor stabilizer elements fixes both
// mu and every Newton point while normalizing factors 2..n to their coset
// representatives, so the reduced sweep realizes exactly the Newton points
// of the full |W1|^n sweep. When mu vanishes outside factor 1 this is the
// composite sweep (identity in factors 2..n).

namespace {

struct FactorState {
    std::vector<int> image;
    std::vector<int8_t> sign;
    unsigned long long bits = 0;
};

struct SweepPlan {
    GroupDatum datum;
    bool reduced = true;
    // reduced mode: factor 1 in place, factors 2..n from these lists
    std::vector<std::vector<SignedPerm>> reps;
    unsigned long long factor_order = 0;
    unsigned long long total = 0;

    SweepPlan(const GroupDatum& d, const MinusculeSpec& mu, bool composite)
        : datum(d) {
        WeylEnumeration en(d, true);
        factor_order = en.size();
        reduced = composite;
        if (reduced) {
            unsigned __int128 t = factor_order;
            for (int s = 1; s < d.factors; ++s) {
                reps.push_back(mu_coset_reps(d, mu.weights[s], mu.similitude));
                t *= reps.back().size();
                if (t > (unsigned __int128)1 << 62)
                    throw resource_limit_error("reduced sweep exceeds 2^62 elements");
            }
            total = (unsigned long long)t;
        } else {
            total = WeylEnumeration(d, false).size();
        }
    }

    WeylElement element(unsigned long long index) const {
        WeylEnumeration en(datum, !reduced ? false : true);
        if (!reduced) return en.element(index);
        WeylElement w = en.element(index % factor_order);
        index /= factor_order;
        for (int s = 1; s < datum.factors; ++s) {
            w.parts[s] = reps[s - 1][index % reps[s - 1].size()];
            index /= reps[s - 1].size();
        }
        return w;
    }
};

class IntCursor {
public:
    IntCursor(const SweepPlan& plan)
        : plan_(plan), en_(plan.datum, plan.reduced) {
        fs_.resize(plan.reduced ? 1 : plan.datum.factors);
        rep_idx_.assign(plan.reps.size(), 0);
    }

    void seed(unsigned long long index) {
        if (plan_.reduced) {
            load(fs_[0], en_.element(index % plan_.factor_order).parts[0]);
            index /= plan_.factor_order;
            for (size_t s = 0; s < plan_.reps.size(); ++s) {
                rep_idx_[s] = size_t(index % plan_.reps[s].size());
                index /= plan_.reps[s].size();
            }
        } else {
            WeylElement w = en_.element(index);
            for (size_t s = 0; s < fs_.size(); ++s) load(fs_[s], w.parts[s]);
        }
    }

    void advance() {
        for (size_t s = 0; s < fs_.size(); ++s)
            if (advance_factor(fs_[s])) return; // no carry
        for (size_t s = 0; s < rep_idx_.size(); ++s) {
            if (++rep_idx_[s] < plan_.reps[s].size()) return;
            rep_idx_[s] = 0;
        }
    }

    const SignedPerm* rep_part(int factor) const {
        // non-null for reduced factors 2..n
        if (!plan_.reduced || factor == 0) return nullptr;
        return &plan_.reps[factor - 1][rep_idx_[factor - 1]];
    }

    const FactorState& state_part(int factor) const {
        return plan_.reduced ? fs_[0] : fs_[factor];
    }

private:
    void load(FactorState& f, const SignedPerm& p) const {
        f.image = p.image;
        f.sign = p.sign;
        f.bits = 0;
        for (unsigned long long q = 0; q < sign_bit_count(); ++q)
            if (p.sign[q] < 0) f.bits |= 1ULL << q;
    }

    unsigned long long sign_bit_count() const {
        Family fam = plan_.datum.family;
        if (fam == Family::A || fam == Family::GL) return 0;
        return fam == Family::D ? plan_.datum.rank - 1 : plan_.datum.rank;
    }

    void signs_from_bits(FactorState& f) const {
        std::fill(f.sign.begin(), f.sign.end(), int8_t(1));
        int minus = 0;
        for (unsigned long long q = 0; q < sign_bit_count(); ++q)
            if ((f.bits >> q) & 1) { f.sign[q] = -1; ++minus; }
        if (plan_.datum.family == Family::D && minus % 2 == 1)
            f.sign[plan_.datum.rank - 1] = -1;
    }

    bool advance_factor(FactorState& f) const {
        unsigned long long sign_count = 1ULL << sign_bit_count();
        if (++f.bits < sign_count) {
            signs_from_bits(f);
            return true;
        }
        f.bits = 0;
        signs_from_bits(f);
        return std::next_permutation(f.image.begin(), f.image.end());
    }

    const SweepPlan& plan_;
    WeylEnumeration en_;
    std::vector<FactorState> fs_;
    std::vector<size_t> rep_idx_;
};

struct StratumAgg {
    unsigned long long count = 0;
    unsigned long long first_index = 0;
};

using StratumMap = std::map<RationalCoweight, StratumAgg>;

// One scan chunk: flat integer orbits, exact reduction per element.
void scan_range(const GroupDatum& datum, const MinusculeSpec& mu, const SweepPlan& plan,
                unsigned long long begin, unsigned long long end, StratumMap& out) {
    int n = datum.factors;
    int t = datum.torus_dim();
    size_t dim = size_t(n) * t;
    long long b = mu.similitude.value_or(0);
    bool has_sim = datum.has_similitude();
    bool twist_a = datum.twist == 2 && datum.family == Family::A;
    bool twist_d = datum.twist == 2 && datum.family == Family::D;

    std::vector<long long> mu_flat(dim);
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < t; ++i) mu_flat[size_t(s) * t + i] = mu.weights[s][i];

    IntCursor cursor(plan);
    if (begin >= end) return;
    cursor.seed(begin);

    std::vector<long long> cur(dim), nxt(dim), sum(dim), nums(t);
    for (unsigned long long idx = begin; idx < end; ++idx) {
        cur = mu_flat;
        std::fill(sum.begin(), sum.end(), 0);
        long long d = 0;
        do {
            for (size_t i = 0; i < dim; ++i) sum[i] += cur[i];
            ++d;
            for (int s = 0; s < n; ++s) {
                const SignedPerm* rep = cursor.rep_part(s);
                const int* image;
                const int8_t* sign;
                if (rep) {
                    image = rep->image.data();
                    sign = rep->sign.data();
                } else {
                    const FactorState& p = cursor.state_part(s);
                    image = p.image.data();
                    sign = p.sign.data();
                }
                long long* dst = nxt.data() + size_t((s + 1) % n) * t;
                const long long* src = cur.data() + size_t(s) * t;
                for (int q = 0; q < t; ++q) {
                    long long x = src[q];
                    dst[image[q]] = sign[q] > 0 ? x : (has_sim ? b - x : -x);
                }
            }
            if (twist_a) {
                std::reverse(nxt.begin(), nxt.begin() + t);
                for (int i = 0; i < t; ++i) nxt[i] = -nxt[i];
            } else if (twist_d) {
                nxt[t - 1] = -nxt[t - 1];
            }
            std::swap(cur, nxt);
        } while (cur != mu_flat);

        // nu = (-1/d) * sum, dominantized per factor
        RationalCoweight nu;
        nu.factors.reserve(n);
        for (int s = 0; s < n; ++s) {
            const long long* block = sum.data() + size_t(s) * t;
            std::vector<Rat> row(t);
            switch (datum.family) {
                case Family::A:
                case Family::GL:
                    for (int i = 0; i < t; ++i) nums[i] = -block[i];
                    std::sort(nums.begin(), nums.end(), std::greater<long long>());
                    for (int i = 0; i < t; ++i) row[i] = Rat(nums[i], d);
                    break;
                case Family::B:
                case Family::C:
                    for (int i = 0; i < t; ++i) nums[i] = std::abs(block[i]);
                    std::sort(nums.begin(), nums.end(), std::greater<long long>());
                    for (int i = 0; i < t; ++i) row[i] = Rat(nums[i], d);
                    break;
                case Family::GSp:
                    // centered numerators over 2d, then shift back by b/2
                    for (int i = 0; i < t; ++i) nums[i] = std::abs(-2 * block[i] + d * b);
                    std::sort(nums.begin(), nums.end(), std::greater<long long>());
                    for (int i = 0; i < t; ++i) row[i] = Rat(nums[i] - d * b, 2 * d);
                    break;
                case Family::D: {
                    int negatives = 0;
                    for (int i = 0; i < t; ++i) {
                        nums[i] = -block[i];
                        if (nums[i] < 0) { ++negatives; nums[i] = -nums[i]; }
                    }
                    std::sort(nums.begin(), nums.end(), std::greater<long long>());
                    if (negatives % 2 == 1) nums[t - 1] = -nums[t - 1];
                    for (int i = 0; i < t; ++i) row[i] = Rat(nums[i], d);
                    break;
                }
            }
            nu.factors.push_back(std::move(row));
        }
        if (has_sim) nu.similitude = Rat(-b);

        auto [it, inserted] = out.try_emplace(std::move(nu), StratumAgg{0, idx});
        ++it->second.count;
        if (idx < it->second.first_index) it->second.first_index = idx;

        if (idx + 1 < end) cursor.advance();
    }
}

} // namespace

StrataResult strata(const GroupDatum& datum, const MinusculeSpec& mu,
                    const StrataOptions& options) {
    validate_minuscule(datum, mu);
    SweepPlan plan(datum, mu, options.composite);
    unsigned long long total = plan.total;
    if (options.max_elements && total > options.max_elements)
        throw resource_limit_error("enumeration of " + std::to_string(total) +
                                   " elements exceeds the configured cap of " +
                                   std::to_string(options.max_elements));

    int threads = std::max(1, options.threads);
    std::vector<StratumMap> maps(threads);
    if (threads == 1) {
        scan_range(datum, mu, plan, 0, total, maps[0]);
    } else {
        std::vector<std::thread> pool;
        unsigned long long chunk = (total + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            unsigned long long lo = std::min<unsigned long long>(k * chunk, total);
            unsigned long long hi = std::min<unsigned long long>(lo + chunk, total);
            pool.emplace_back([&, k, lo, hi] {
                scan_range(datum, mu, plan, lo, hi, maps[k]);
            });
        }
        for (auto& th : pool) th.join();
    }

    StratumMap merged = std::move(maps[0]);
    for (int k = 1; k < threads; ++k)
        for (auto& [nu, agg] : maps[k]) {
            auto [it, inserted] = merged.try_emplace(nu, agg);
            if (!inserted) {
                it->second.count += agg.count;
                it->second.first_index = std::min(it->second.first_index, agg.first_index);
            }
        }

    StrataResult result;
    result.elements = total;
    result.strata.reserve(merged.size());
    for (auto& [nu, agg] : merged) {
        NewtonStratum st;
        st.nu = nu;
        st.polygon = polygon_of_point(datum, nu);
        st.representative = plan.element(agg.first_index);
        st.count = agg.count;
        result.strata.push_back(std::move(st));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Abelianized invariant

namespace {

// sigma (shift-with-twist) as an integer matrix on the flat coweight
// lattice, similitude coordinate last and fixed.
std::vector<std::vector<long long>> sigma_matrix(const GroupDatum& datum) {
    int n = datum.factors;
    int t = datum.torus_dim();
    int dim = n * t + (datum.has_similitude() ? 1 : 0);
    std::vector<std::vector<long long>> S(dim, std::vector<long long>(dim, 0));
    for (int s = 0; s < n; ++s) {
        int target = (s + 1) % n;
        for (int i = 0; i < t; ++i) {
            int src = s * t + i;
            if (target == 0 && datum.twist == 2) {
                if (datum.family == Family::A)
                    S[t - 1 - i][src] = -1;
                else // type D: negate the last coordinate
                    S[target * t + i][src] = (i == t - 1) ? -1 : 1;
            } else {
                S[target * t + i][src] = 1;
            }
        }
    }
    if (datum.has_similitude()) S[dim - 1][dim - 1] = 1;
    return S;
}

std::vector<std::vector<long long>> coroot_columns(const GroupDatum& datum) {
    int t = datum.torus_dim();
    std::vector<std::vector<long long>> cols; // local, one factor
    auto push = [&](std::initializer_list<std::pair<int, long long>> entries) {
        std::vector<long long> c(t, 0);
        for (auto [i, v] : entries) c[i] = v;
        cols.push_back(std::move(c));
    };
    int r = datum.rank;
    for (int i = 0; i + 1 < t; ++i) push({{i, 1}, {i + 1, -1}});
    switch (datum.family) {
        case Family::A:
        case Family::GL:
            break; // adjacent differences generate the coroot lattice
        case Family::B:
            push({{r - 1, 2}}); // short-root coroot
            break;
        case Family::C:
        case Family::GSp:
            push({{r - 1, 1}});
            break;
        case Family::D:
            if (r >= 2) push({{r - 2, 1}, {r - 1, 1}});
            break;
    }
    return cols;
}

const SmithResult& kottwitz_basis(const GroupDatum& datum) {
    using Key = std::tuple<Family, int, int, int>;
    static std::map<Key, SmithResult> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    Key key{datum.family, datum.rank, datum.factors, datum.twist};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int n = datum.factors;
    int t = datum.torus_dim();
    int dim = n * t + (datum.has_similitude() ? 1 : 0);
    auto local = coroot_columns(datum);
    auto S = sigma_matrix(datum);

    std::vector<std::vector<long long>> R(dim);
    size_t ncols = size_t(n) * local.size() + size_t(dim);
    for (auto& row : R) row.assign(ncols, 0);
    size_t col = 0;
    for (int s = 0; s < n; ++s)
        for (const auto& c : local) {
            for (int i = 0; i < t; ++i) R[s * t + i][col] = c[i];
            ++col;
        }
    for (int j = 0; j < dim; ++j, ++col)
        for (int i = 0; i < dim; ++i)
            R[i][col] = (i == j ? 1 : 0) - S[i][j];

    it = cache.emplace(key, smith_normal_form(std::move(R))).first;
    return it->second;
}

std::vector<long long> flatten_minus_mu(const GroupDatum& datum, const MinusculeSpec& mu) {
    int n = datum.factors;
    int t = datum.torus_dim();
    std::vector<long long> x(size_t(n) * t + (datum.has_similitude() ? 1 : 0), 0);
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < t; ++i) x[size_t(s) * t + i] = -mu.weights[s][i];
    if (datum.has_similitude()) x.back() = -mu.similitude.value_or(0);
    return x;
}

} // namespace

KottwitzClass kottwitz_class(const GroupDatum& datum, const MinusculeSpec& mu) {
    validate_minuscule(datum, mu);
    const auto& snf = kottwitz_basis(datum);
    auto x = flatten_minus_mu(datum, mu);
    size_t dim = x.size();
    KottwitzClass cls;
    for (size_t i = 0; i < dim; ++i) {
        long long y = 0;
        for (size_t j = 0; j < dim; ++j) y += snf.U[i][j] * x[j];
        if (i < snf.diag.size() && snf.diag[i] > 1) {
            long long m = snf.diag[i];
            cls.moduli.push_back(m);
            cls.residues.push_back(((y % m) + m) % m);
        } else if (i >= size_t(snf.rank)) {
            cls.free_coords.push_back(y);
        }
    }
    return cls;
}

std::string KottwitzClass::str() const {
    std::string s = "[";
    for (size_t i = 0; i < residues.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(residues[i]) + "mod" + std::to_string(moduli[i]);
    }
    for (size_t i = 0; i < free_coords.size(); ++i) {
        if (i || !residues.empty()) s += ";";
        s += std::to_string(free_coords[i]);
    }
    return s + "]";
}

std::vector<Rat> newton_free_part(const GroupDatum& datum, const RationalCoweight& nu) {
    const auto& snf = kottwitz_basis(datum);
    int n = datum.factors;
    int t = datum.torus_dim();
    size_t dim = size_t(n) * t + (datum.has_similitude() ? 1 : 0);
    std::vector<Rat> flat(dim);
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < t; ++i) flat[size_t(s) * t + i] = nu.factors[s][i];
    if (datum.has_similitude()) flat.back() = *nu.similitude;
    std::vector<Rat> out;
    for (size_t i = size_t(snf.rank); i < dim; ++i) {
        Rat y;
        for (size_t j = 0; j < dim; ++j)
            if (snf.U[i][j] != 0) y += flat[j] * Rat(snf.U[i][j]);
        out.push_back(y);
    }
    return out;
}

RationalCoweight minus_mu_bar(const GroupDatum& datum, const MinusculeSpec& mu) {
    validate_minuscule(datum, mu);
    auto step = [&](const RationalCoweight& v) { return galois_step(datum, v); };
    auto [avg, d] = orbit_average(mu.as_coweight(), step);
    (void)d;
    return dominantize(avg, datum.ctx());
}

bool admissible_check(const GroupDatum& datum, const MinusculeSpec& mu,
                      const WeylElement& w) {
    return dominance_leq(newton_point(datum, mu, w), minus_mu_bar(datum, mu), datum.ctx());
}

ParabolicProfile parabolic_profile(const GroupDatum& datum, const MinusculeSpec& mu,
                                   const WeylElement& w) {
    ParabolicProfile prof;
    prof.nu = newton_point(datum, mu, w);
    auto classify = [&](int s, const RootFunctional& root) {
        Rat p = pair_factor(prof.nu, size_t(s), root);
        if (p.is_zero())
            prof.zero.push_back({s, root});
        else if (p > Rat(0))
            prof.positive.push_back({s, root});
        else
            prof.negative.push_back({s, root});
    };
    for (int s = 0; s < datum.factors; ++s) {
        for (const auto& a : positive_roots(datum)) {
            classify(s, a);
            RootFunctional neg = a;
            for (auto& c : neg.coords) c = -c;
            neg.similitude = -neg.similitude;
            classify(s, neg);
        }
        for (const auto& a : simple_roots(datum))
            if (pair_factor(prof.nu, size_t(s), a).is_zero())
                prof.levi_simple.push_back({s, a});
    }
    return prof;
}

} // namespace fcrystal
