#pragma once

/**
 * Split classical group data with Weil-restriction factors and diagram
 * twists: Weyl-element enumeration, twisted actions on coweights, and the
 * translation of (w, mu) pairs into monomial operators on the standard
 * module.
 *
 * The torus of one factor uses standard coordinates: r of them for B/C/D/GL
 * and the similitude family, r+1 for type A (modelled in GL_{r+1}
 * coordinates). The n factors are cycled by the Frobenius shift s -> s+1;
 * a twist of order 2 (negate-and-reverse for A, last-coordinate sign flip
 * for D) is applied to the content that wraps from the last factor to the
 * first, so the shift-with-twist has order n*o on the coweight lattice.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "fcrystal/coweights.hpp"
#include "fcrystal/isocrystal.hpp"

namespace fcrystal {

struct GroupDatum {
    Family family;
    int rank;    // r >= 1
    int factors; // n >= 1
    int twist;   // o in {1,2}; 2 only for A (r >= 2) and D

    int std_dim() const;   // rank of the standard module of one factor
    int torus_dim() const; // coordinate count of one factor's coweights
    bool has_similitude() const { return family == Family::GSp; }
    DominanceContext ctx() const { return {family, rank}; }
    std::string str() const;
};

/// Validated datum. Throws std::invalid_argument on bad parameters.
GroupDatum make_group_datum(Family family, int rank, int factors, int twist);

/// One factor's signed permutation: coordinate q maps to position image[q]
/// with sign sign[q]. Type A/GL forces all signs +1; type D forces an even
/// number of -1 entries.
struct SignedPerm {
    std::vector<int> image;
    std::vector<int8_t> sign;

    static SignedPerm identity(int m);
    bool is_identity() const;
};

/// Composition g after w as coordinate maps.
SignedPerm compose(const SignedPerm& g, const SignedPerm& w);

struct WeylElement {
    std::vector<SignedPerm> parts; // one per factor

    /// One-line notation "2:-1:3;..." — per source position the signed
    /// 1-based image, factors joined by ';'.
    std::string str() const;
};

void validate_weyl_element(const GroupDatum& datum, const WeylElement& w);

WeylElement identity_weyl(const GroupDatum& datum);

/// Deterministic indexed enumeration of Weyl elements. In composite mode
/// only factor 1 varies (the Newton point depends only on the composite of
/// the factor parts); in full mode all |W_1|^n tuples are produced.
class WeylEnumeration {
public:
    WeylEnumeration(const GroupDatum& datum, bool composite);

    unsigned long long size() const { return total_; }
    unsigned long long factor_order() const { return factor_order_; }
    WeylElement element(unsigned long long index) const;

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (unsigned long long i = 0; i < total_; ++i) fn(element(i));
    }

private:
    SignedPerm decode_factor(unsigned long long k) const;

    GroupDatum datum_;
    bool composite_;
    unsigned long long perm_count_;
    unsigned long long sign_count_;
    unsigned long long factor_order_;
    unsigned long long total_;
};

/// The twisted Weyl step on coweights: per-factor signed permutation, then
/// the cyclic factor shift, then the diagram twist on the wrapped factor.
RationalCoweight act_on_coweight(const GroupDatum& datum, const WeylElement& w,
                                 const RationalCoweight& nu);

/// One representative per left coset of the stabilizer of the given weight
/// vector in the one-factor Weyl group (equivalently, one witness per point
/// of the vector's orbit; the identity comes first). Newton points over the
/// full |W1|^n sweep coincide with those over the reduced sweep that uses
/// these representatives in factors 2..n.
std::vector<SignedPerm> mu_coset_reps(const GroupDatum& datum,
                                      const std::vector<long long>& weight,
                                      std::optional<long long> similitude);

/// The shift-with-twist alone (the Galois action in this combinatorial
/// model); equals act_on_coweight with the identity element.
RationalCoweight galois_step(const GroupDatum& datum, const RationalCoweight& nu);

/// Cocharacter data attached to the datum: either the l-shorthand (weight +1
/// on position 1 of factors 1..l), the Siegel pattern (zero torus weights,
/// similitude -1), or explicit integer weights.
struct MinusculeSpec {
    std::vector<std::vector<long long>> weights; // per factor, torus coordinates
    std::optional<long long> similitude;         // present iff datum has similitude
    std::optional<int> l;                        // set when built from the shorthand

    static MinusculeSpec from_l(const GroupDatum& datum, int l);
    static MinusculeSpec siegel(const GroupDatum& datum);
    static MinusculeSpec explicit_weights(const GroupDatum& datum,
                                          std::vector<std::vector<long long>> weights,
                                          std::optional<long long> similitude);

    RationalCoweight as_coweight() const;
    std::string str() const;
};

void validate_minuscule(const GroupDatum& datum, const MinusculeSpec& mu);

/// Root functional of a single factor (integer coordinates plus a
/// similitude coefficient, nonzero only for the similitude family).
struct RootFunctional {
    std::vector<long long> coords;
    long long similitude = 0;
};

std::vector<RootFunctional> positive_roots(const GroupDatum& datum);
std::vector<RootFunctional> simple_roots(const GroupDatum& datum);

/// Exact pairing of one factor of nu against a local root functional.
Rat pair_factor(const RationalCoweight& nu, size_t factor, const RootFunctional& root);

/// max_alpha |<mu, alpha>| over all roots of all factors; 0 iff mu is
/// central, <= 1 iff mu is minuscule.
long long adjoint_depth(const GroupDatum& datum, const MinusculeSpec& mu);

/// Per-basis-vector data of the standard module across all factors.
struct BasisVec {
    int factor;
    int pos;     // position within the factor
    int partner; // global index of the pairing partner (self when fixed, -1 when none)
    std::vector<long long> weight; // torus functional, local coordinates
    long long sim_weight = 0;
};

const std::vector<BasisVec>& basis_table(const GroupDatum& datum);

/// Standard-module torus functionals, embedded per factor (for pairing
/// against full coweights).
std::vector<WeightFunctional> standard_weights(const GroupDatum& datum);

/// The permutation of the n*std_dim basis induced by w followed by the
/// factor shift and twist. Throws for twisted type A, whose standard module
/// admits no monomial realization.
std::vector<int> basis_permutation(const GroupDatum& datum, const WeylElement& w);

/// The monomial operator with exponent d(e) = -<mu, weight(e)> and the
/// basis permutation above. Matrix-entry signs are dropped: valuations are
/// sign-blind.
MonomialOperator weyl_to_monomial(const GroupDatum& datum, const WeylElement& w,
                                  const MinusculeSpec& mu);

/// Pairing data of the standard module (B/C/D and the similitude family):
/// partner involution from the basis table and similitude slope
/// c = -mu_similitude (0 when the datum has no similitude).
PairingSpec standard_pairing(const GroupDatum& datum, const MinusculeSpec& mu);

/// Reports whether the orbit of the first basis vector under the operator
/// permutation contains the basis vector at position 2r-1 while avoiding
/// position 2r (type D, one factor).
bool d_orbit_predicate(const GroupDatum& datum, const WeylElement& w);

} // namespace fcrystal
