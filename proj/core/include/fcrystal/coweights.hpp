#pragma once

/**
 * Lattice arithmetic for rational coweights of split classical tori.
 *
 * A coweight lives in X_*(T) tensor Q for a torus that is a product of n
 * identical factors in standard coordinates (one vector per factor), with an
 * optional similitude coordinate shared by all factors. Pairings against
 * integer weight functionals, dominance-chamber representatives, the
 * dominance partial order on dominant points, and twisted-orbit averaging
 * are all exact.
 *
 * Similitude groups are handled in native coordinates (a_1..a_r; b), where a
 * Weyl sign flip acts by a_i -> b - a_i. Dominantization and dominance tests
 * center the coordinates at b/2 first, which turns the flips into honest sign
 * changes and reduces the similitude case to type C.
 */

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fcrystal/rational.hpp"

namespace fcrystal {

enum class Family { A, B, C, D, GL, GSp };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// Which prefix-sum criteria apply; rank is the Weyl rank r.
struct DominanceContext {
    Family family;
    int rank;
};

/// A point of X_*(T) tensor Q across n factors, plus an optional similitude
/// coordinate (present exactly for similitude groups).
struct RationalCoweight {
    std::vector<std::vector<Rat>> factors;
    std::optional<Rat> similitude;

    bool operator==(const RationalCoweight& o) const {
        return factors == o.factors && similitude == o.similitude;
    }
    bool operator!=(const RationalCoweight& o) const { return !(*this == o); }

    /// Lexicographic order, used as a deterministic dedup key.
    bool operator<(const RationalCoweight& o) const;
};

/// Integer weight functional: one vector per factor plus a similitude
/// coefficient (ignored when the coweight carries no similitude).
struct WeightFunctional {
    std::vector<std::vector<long long>> factors;
    long long similitude = 0;
};

/// Exact pairing <nu, functional>. Throws std::invalid_argument on shape
/// mismatch.
Rat pair_with(const RationalCoweight& nu, const WeightFunctional& functional);

/// The unique dominant-chamber representative of nu under the Weyl group of
/// ctx, applied identically to each factor. Pairs >= 0 with every simple
/// root.
RationalCoweight dominantize(const RationalCoweight& nu, const DominanceContext& ctx);

bool is_dominant(const RationalCoweight& nu, const DominanceContext& ctx);

/// Dominance order: lam <= mu iff mu - lam is a non-negative rational
/// combination of positive coroots (similitude coordinates must agree).
/// Both arguments must already be dominant.
bool dominance_leq(const RationalCoweight& lam, const RationalCoweight& mu,
                   const DominanceContext& ctx);

using CoweightAction = std::function<RationalCoweight(const RationalCoweight&)>;

/// Averages mu over its orbit under a finite-order action and negates:
/// returns (-1/d) * sum_{j<d} step^j(mu) together with the orbit length d.
/// Throws std::runtime_error if the orbit does not close within order_bound.
std::pair<RationalCoweight, int> orbit_average(const RationalCoweight& mu,
                                               const CoweightAction& step,
                                               int order_bound = 1 << 16);

} // namespace fcrystal
