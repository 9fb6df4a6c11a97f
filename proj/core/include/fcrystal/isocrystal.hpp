#pragma once

/**
 * Monomial sigma-linear operators and their slope combinatorics.
 *
 * An operator acts on a free module of rank m by phi(e_i) = unit * p^{d_i} *
 * e_{perm(i)}; units are irrelevant to valuations and are not stored. Slopes
 * are cycle averages of the exponents, exact rationals. On top of the cycle
 * decomposition sit the Newton polygon, the slope decomposition with its
 * ascending/descending filtrations, the height-2r/degree-r slope symmetry
 * check, and the exhaustive enumeration of symmetric admissible polygons
 * used as an independent oracle.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcrystal/rational.hpp"

namespace fcrystal {

struct MonomialOperator {
    int size = 0;
    std::vector<int> perm; // 0-based image: e_i -> e_{perm[i]}
    std::vector<long long> exp;

    void validate() const; // throws std::invalid_argument
};

struct Cycle {
    std::vector<int> indices;
    Rat slope;
};

/// Sorted slope multiset with multiplicities; derived height, degree and
/// lower-convex vertex list.
struct NewtonPolygon {
    std::vector<std::pair<Rat, long long>> slopes; // strictly increasing

    long long height() const;
    Rat degree() const;
    /// Lattice path vertices (x, y) at every slope change, endpoints included.
    std::vector<std::pair<long long, Rat>> vertices() const;

    bool operator==(const NewtonPolygon& o) const { return slopes == o.slopes; }
    bool operator<(const NewtonPolygon& o) const { return slopes < o.slopes; }

    std::string str() const; // "s:mult;s:mult;..."
};

NewtonPolygon polygon_from_slopes(std::vector<Rat> raw);

/// Slope decomposition M = sum of isoclinic pieces, as index sets, plus the
/// descending (>= gamma) and ascending (<= gamma) filtration steps.
struct SlopeDecomposition {
    struct Piece {
        Rat slope;
        std::vector<int> indices;
    };
    std::vector<Piece> pieces; // slopes strictly increasing

    std::vector<int> upper(const Rat& gamma) const; // indices with slope >= gamma
    std::vector<int> lower(const Rat& gamma) const; // indices with slope <= gamma
};

/// Index involution of a perfect bilinear pairing (at most one fixed point,
/// for odd size) and the similitude slope c of the pairing: multiplicities
/// must satisfy mult(gamma) = mult(c - gamma).
struct PairingSpec {
    std::vector<int> partner;
    Rat similitude_slope;

    void validate() const;
};

std::vector<Cycle> cycles(const MonomialOperator& op);
NewtonPolygon slope_polygon(const MonomialOperator& op);
SlopeDecomposition slope_decomposition(const MonomialOperator& op);

/// True iff slopes lie in [0,1], height is 2r, degree is r, and mult(gamma)
/// = mult(1-gamma) throughout.
bool sharp_check(const NewtonPolygon& polygon, int r);

/// True iff every vertex of the lower-convex polygon has integer
/// coordinates.
bool integral_breakpoints(const NewtonPolygon& polygon);

/// All polygons of height 2r, degree r, slopes in [0,1], with the
/// mult(gamma) = mult(1-gamma) symmetry and integral breakpoints, by direct
/// recursion over lattice vertices. Bounded to r <= 8.
std::vector<NewtonPolygon> enumerate_symmetric_polygons(int r);

/// Some integer slope of the operator, if any.
std::optional<Rat> integer_slope_witness(const MonomialOperator& op);

/// Checks mult(gamma) = mult(c - gamma) and that the slope pieces pair off
/// as M_gamma <-> M_{c-gamma} under the involution. Throws
/// std::invalid_argument when the permutation does not preserve the partner
/// structure.
bool pairing_symmetry_check(const MonomialOperator& op, const PairingSpec& pairing);

struct ManinReport {
    std::vector<NewtonPolygon> achieved;
    std::vector<NewtonPolygon> admissible;
    bool equal = false;
};

/// Sweeps the full signed-permutation Weyl set of the rank-r similitude
/// symplectic datum and compares the achieved polygons with the
/// independently enumerated symmetric admissible set.
ManinReport manin_achievability(int r);

} // namespace fcrystal
