#pragma once

/**
 * Newton points nu(w), strata enumeration and counting, basic elements,
 * the abelianized (Kottwitz) invariant, and the dominance admissibility
 * test.
 *
 * nu(w) is the dominantized negative orbit average of the cocharacter mu
 * under the twisted Weyl step of w. Strata are deduplicated by the exact
 * dominant nu in lexicographic order; the polygon attached to a stratum is
 * the pairing of nu against the standard-module weights and must agree with
 * the cycle-slope polygon of the corresponding monomial operator.
 */

#include <optional>
#include <string>
#include <vector>

#include "fcrystal/coweights.hpp"
#include "fcrystal/isocrystal.hpp"
#include "fcrystal/rootdata.hpp"

namespace fcrystal {

/// The dominant Newton point of (datum, mu, w).
RationalCoweight newton_point(const GroupDatum& datum, const MinusculeSpec& mu,
                              const WeylElement& w);

/// Pairing of nu(w) against every standard-module weight (similitude
/// included). Equals the cycle-slope polygon of weyl_to_monomial whenever
/// the latter exists.
NewtonPolygon newton_polygon_of(const GroupDatum& datum, const MinusculeSpec& mu,
                                const WeylElement& w);

NewtonPolygon polygon_of_point(const GroupDatum& datum, const RationalCoweight& nu);

/// True iff nu(w) pairs to zero with every root.
bool is_basic(const GroupDatum& datum, const MinusculeSpec& mu, const WeylElement& w);

/// True iff w is basic for every choice of mu, i.e. the fixed space of its
/// twisted step pairs to zero with every root.
bool is_elliptic(const GroupDatum& datum, const WeylElement& w);

/// A Weyl element that is basic for every mu: the all-flip element for
/// B/C and the similitude family, the full cycle for untwisted A/GL, the
/// longest element for twisted A, the all-flip element for even untwisted
/// D, and a deterministic exhaustive search for the remaining D cases.
WeylElement construct_basic_element(const GroupDatum& datum);

struct NewtonStratum {
    RationalCoweight nu;
    NewtonPolygon polygon;
    WeylElement representative; // first enumerated element mapping to nu
    unsigned long long count = 0;
};

struct StrataOptions {
    bool composite = true;
    int threads = 1;
    unsigned long long max_elements = 0; // 0: unlimited
};

struct StrataResult {
    std::vector<NewtonStratum> strata; // lexicographic on nu
    unsigned long long elements = 0;   // Weyl elements scanned
};

/// Enumerates Weyl elements, maps each to its Newton point, and
/// deduplicates. Throws resource_limit_error when the enumeration exceeds
/// options.max_elements.
StrataResult strata(const GroupDatum& datum, const MinusculeSpec& mu,
                    const StrataOptions& options = {});

/// Class in the sigma-coinvariants of X_*(T) modulo the coroot lattice,
/// canonicalized by a Smith-normal-form basis fixed per datum. The class
/// stored is that of -mu (the crystal twists by mu(1/p)), so the free part
/// of any Newton point's image agrees with it.
struct KottwitzClass {
    std::vector<long long> moduli;    // invariant factors > 1
    std::vector<long long> residues;  // canonical residues mod moduli
    std::vector<long long> free_coords;

    bool operator==(const KottwitzClass& o) const {
        return moduli == o.moduli && residues == o.residues && free_coords == o.free_coords;
    }
    std::string str() const;
};

KottwitzClass kottwitz_class(const GroupDatum& datum, const MinusculeSpec& mu);

/// Image of a rational coweight in the free part of the coinvariants, in
/// the same basis as kottwitz_class.
std::vector<Rat> newton_free_part(const GroupDatum& datum, const RationalCoweight& nu);

/// The dominantized Galois average of -mu (the right-hand side of the
/// dominance admissibility bound).
RationalCoweight minus_mu_bar(const GroupDatum& datum, const MinusculeSpec& mu);

/// Mazur-type admissibility: nu(w) <= minus_mu_bar in the dominance order.
bool admissible_check(const GroupDatum& datum, const MinusculeSpec& mu,
                      const WeylElement& w);

struct FactorRoot {
    int factor;
    RootFunctional root;
};

/// Signs of <nu(w), alpha> over the full root set, and the simple roots of
/// the centralizing Levi (pairing zero).
struct ParabolicProfile {
    RationalCoweight nu;
    std::vector<FactorRoot> positive;
    std::vector<FactorRoot> zero;
    std::vector<FactorRoot> negative;
    std::vector<FactorRoot> levi_simple;
};

ParabolicProfile parabolic_profile(const GroupDatum& datum, const MinusculeSpec& mu,
                                   const WeylElement& w);

} // namespace fcrystal
