#include "fcrystal/coweights.hpp"

#include <algorithm>
#include <stdexcept>

namespace fcrystal {

const char* family_name(Family f) {
    switch (f) {
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::C: return "C";
        case Family::D: return "D";
        case Family::GL: return "GL";
        case Family::GSp: return "GSp";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "A") return Family::A;
    if (name == "B") return Family::B;
    if (name == "C") return Family::C;
    if (name == "D") return Family::D;
    if (name == "GL") return Family::GL;
    if (name == "GSp") return Family::GSp;
    throw std::invalid_argument("unknown family '" + name + "'");
}

bool RationalCoweight::operator<(const RationalCoweight& o) const {
    if (factors != o.factors) return factors < o.factors;
    if (similitude.has_value() != o.similitude.has_value())
        return !similitude.has_value();
    if (similitude && o.similitude && *similitude != *o.similitude)
        return *similitude < *o.similitude;
    return false;
}

Rat pair_with(const RationalCoweight& nu, const WeightFunctional& functional) {
    if (nu.factors.size() != functional.factors.size())
        throw std::invalid_argument("pair_with: factor count mismatch");
    Rat acc;
    for (size_t s = 0; s < nu.factors.size(); ++s) {
        const auto& v = nu.factors[s];
        const auto& f = functional.factors[s];
        if (v.size() != f.size())
            throw std::invalid_argument("pair_with: coordinate length mismatch");
        for (size_t i = 0; i < v.size(); ++i)
            if (f[i] != 0) acc += v[i] * Rat(f[i]);
    }
    if (nu.similitude && functional.similitude != 0)
        acc += *nu.similitude * Rat(functional.similitude);
    return acc;
}

namespace {

void check_shape(const RationalCoweight& nu, const DominanceContext& ctx) {
    size_t dim = (ctx.family == Family::A) ? size_t(ctx.rank) + 1 : size_t(ctx.rank);
    for (const auto& v : nu.factors)
        if (v.size() != dim)
            throw std::invalid_argument("coweight factor length does not match context rank");
    if (ctx.rank < 1) throw std::invalid_argument("context rank must be >= 1");
}

// Similitude-centered copy: a_i - b/2 per coordinate; identity when no
// similitude is present.
std::vector<Rat> centered(const std::vector<Rat>& v, const std::optional<Rat>& sim) {
    std::vector<Rat> w = v;
    if (sim) {
        Rat half = *sim / Rat(2);
        for (auto& x : w) x -= half;
    }
    return w;
}

std::vector<Rat> uncentered(std::vector<Rat> w, const std::optional<Rat>& sim) {
    if (sim) {
        Rat half = *sim / Rat(2);
        for (auto& x : w) x += half;
    }
    return w;
}

std::vector<Rat> dominantize_factor(const std::vector<Rat>& v, Family fam,
                                    const std::optional<Rat>& sim) {
    std::vector<Rat> w;
    switch (fam) {
        case Family::A:
        case Family::GL:
            w = v;
            std::sort(w.begin(), w.end(), [](const Rat& a, const Rat& b) { return b < a; });
            return w;
        case Family::B:
        case Family::C:
        case Family::GSp: {
            w = centered(v, sim);
            for (auto& x : w) x = x.abs();
            std::sort(w.begin(), w.end(), [](const Rat& a, const Rat& b) { return b < a; });
            return uncentered(std::move(w), sim);
        }
        case Family::D: {
            // Even sign flips only: take absolute values, sort, and give the
            // last coordinate a minus sign when the flip count was odd. With
            // a zero present the two parities coincide, so the result is the
            // lexicographically maximal representative either way.
            w = v;
            int negatives = 0;
            for (auto& x : w)
                if (x < Rat(0)) { ++negatives; x = -x; }
            std::sort(w.begin(), w.end(), [](const Rat& a, const Rat& b) { return b < a; });
            if (negatives % 2 == 1) w.back() = -w.back();
            return w;
        }
    }
    throw std::logic_error("unreachable family");
}

} // namespace

RationalCoweight dominantize(const RationalCoweight& nu, const DominanceContext& ctx) {
    check_shape(nu, ctx);
    RationalCoweight out = nu;
    for (auto& v : out.factors) v = dominantize_factor(v, ctx.family, nu.similitude);
    return out;
}

bool is_dominant(const RationalCoweight& nu, const DominanceContext& ctx) {
    check_shape(nu, ctx);
    for (const auto& raw : nu.factors) {
        switch (ctx.family) {
            case Family::A:
            case Family::GL: {
                for (size_t i = 0; i + 1 < raw.size(); ++i)
                    if (raw[i] < raw[i + 1]) return false;
                break;
            }
            case Family::B:
            case Family::C:
            case Family::GSp: {
                auto v = centered(raw, nu.similitude);
                for (size_t i = 0; i + 1 < v.size(); ++i)
                    if (v[i] < v[i + 1]) return false;
                if (v.back() < Rat(0)) return false;
                break;
            }
            case Family::D: {
                const auto& v = raw;
                for (size_t i = 0; i + 1 < v.size(); ++i)
                    if (v[i] < v[i + 1]) return false;
                if (v.size() >= 2 && v[v.size() - 2] < v.back().abs()) return false;
                break;
            }
        }
    }
    return true;
}

bool dominance_leq(const RationalCoweight& lam, const RationalCoweight& mu,
                   const DominanceContext& ctx) {
    if (!is_dominant(lam, ctx) || !is_dominant(mu, ctx))
        throw std::invalid_argument("dominance_leq: arguments must be dominant");
    if (lam.factors.size() != mu.factors.size())
        throw std::invalid_argument("dominance_leq: factor count mismatch");
    if (lam.similitude.has_value() != mu.similitude.has_value())
        throw std::invalid_argument("dominance_leq: similitude presence mismatch");
    if (lam.similitude && *lam.similitude != *mu.similitude) return false;

    for (size_t s = 0; s < lam.factors.size(); ++s) {
        auto a = centered(lam.factors[s], lam.similitude);
        auto b = centered(mu.factors[s], mu.similitude);
        size_t dim = a.size();
        switch (ctx.family) {
            case Family::A:
            case Family::GL: {
                Rat pa, pb;
                for (size_t k = 0; k < dim; ++k) {
                    pa += a[k];
                    pb += b[k];
                    if (k + 1 < dim) {
                        if (pb < pa) return false;
                    } else if (pa != pb) {
                        return false;
                    }
                }
                break;
            }
            case Family::B:
            case Family::C:
            case Family::GSp: {
                Rat pa, pb;
                for (size_t k = 0; k < dim; ++k) {
                    pa += a[k];
                    pb += b[k];
                    if (pb < pa) return false;
                }
                break;
            }
            case Family::D: {
                Rat pa, pb;
                for (size_t k = 0; k + 2 < dim; ++k) {
                    pa += a[k];
                    pb += b[k];
                    if (pb < pa) return false;
                }
                Rat head_a = pa, head_b = pb;
                if (dim >= 2) {
                    head_a += a[dim - 2];
                    head_b += b[dim - 2];
                }
                if (head_b + b[dim - 1] < head_a + a[dim - 1]) return false;
                if (head_b - b[dim - 1] < head_a - a[dim - 1]) return false;
                break;
            }
        }
    }
    return true;
}

std::pair<RationalCoweight, int> orbit_average(const RationalCoweight& mu,
                                               const CoweightAction& step,
                                               int order_bound) {
    RationalCoweight sum = mu;
    RationalCoweight cur = step(mu);
    int d = 1;
    while (!(cur == mu)) {
        if (++d > order_bound)
            throw std::runtime_error("orbit_average: action did not return within order bound");
        if (cur.factors.size() != sum.factors.size() ||
            cur.similitude.has_value() != sum.similitude.has_value())
            throw std::invalid_argument("orbit_average: action changed coweight shape");
        for (size_t s = 0; s < sum.factors.size(); ++s)
            for (size_t i = 0; i < sum.factors[s].size(); ++i)
                sum.factors[s][i] += cur.factors[s][i];
        if (sum.similitude) *sum.similitude += *cur.similitude;
        cur = step(cur);
    }
    Rat scale = Rat(-1, d);
    for (auto& v : sum.factors)
        for (auto& x : v) x *= scale;
    if (sum.similitude) *sum.similitude *= scale;
    return {std::move(sum), d};
}

} // namespace fcrystal
