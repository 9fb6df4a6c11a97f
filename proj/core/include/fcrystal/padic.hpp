#pragma once

/**
 * Finite-precision p-adic arithmetic with honest valuation tracking, and
 * the convergent slope-splitting iteration: conjugating away a unipotent
 * perturbation supported in strictly positive relative slopes.
 *
 * A value is either p^v * unit with the unit known modulo p^relprec (so the
 * value is known modulo p^{v+relprec}), or the tracked zero O(p^v): nothing
 * is known below p^v. Arithmetic never claims more precision than its
 * inputs justify. Units are stored in 64 bits, which caps p^N at 2^62 —
 * far beyond the precisions used here.
 */

#include <string>
#include <vector>

#include "fcrystal/errors.hpp"

namespace fcrystal {

class PadicApprox {
public:
    /// The tracked zero O(p^bound).
    static PadicApprox zero(long long p, int bound);
    /// v at absolute precision N: known modulo p^N.
    static PadicApprox from_integer(long long p, long long v, int N);
    static PadicApprox from_unit(long long p, int val, unsigned long long unit, int relprec);

    long long prime() const { return p_; }
    /// Exact valuation for a unit value, the O-bound for a tracked zero.
    int valuation() const { return val_; }
    bool is_tracked_zero() const { return relprec_ == 0; }
    int relative_precision() const { return relprec_; }
    /// The position p^k below which nothing is known.
    int known_to() const { return val_ + relprec_; }
    unsigned long long unit_part() const { return unit_; }

    PadicApprox operator+(const PadicApprox& o) const;
    PadicApprox operator-(const PadicApprox& o) const;
    PadicApprox operator*(const PadicApprox& o) const;
    PadicApprox operator-() const;

    /// Multiplicative inverse; throws std::domain_error on a tracked zero.
    PadicApprox invert() const;

    /// Multiplication by p^k (an exact valuation shift).
    PadicApprox shifted(int k) const;

    /// Caps the absolute precision at N (no-op when already coarser).
    PadicApprox reduce_precision(int N) const;

    /// Congruent modulo p^{min(known_to)} — the honest equality at finite
    /// precision.
    bool congruent(const PadicApprox& o) const;

    std::string str() const;

private:
    PadicApprox(long long p, int val, unsigned long long unit, int relprec)
        : p_(p), val_(val), unit_(unit), relprec_(relprec) {}

    long long p_;
    int val_;
    unsigned long long unit_; // 0 iff tracked zero
    int relprec_;             // 0 iff tracked zero
};

struct PadicMatrix {
    long long p = 0;
    int precision = 0; // construction precision of the entries
    int n = 0;
    std::vector<PadicApprox> a; // row-major

    static PadicMatrix identity(long long p, int precision, int n);
    static PadicMatrix zero_matrix(long long p, int precision, int n);

    PadicApprox& at(int i, int j) { return a[size_t(i) * n + j]; }
    const PadicApprox& at(int i, int j) const { return a[size_t(i) * n + j]; }

    PadicMatrix operator*(const PadicMatrix& o) const;
    PadicMatrix operator+(const PadicMatrix& o) const;
    PadicMatrix operator-(const PadicMatrix& o) const;

    /// Gauss-Jordan inverse with minimal-valuation pivoting. Throws
    /// precision_error when a pivot's valuation cannot be certified.
    PadicMatrix inverse() const;

    /// Minimum of the entry valuations (tracked zeros contribute their
    /// bound).
    int min_valuation() const;

    PadicMatrix reduce_precision(int N) const;
};

/// phi * X * phi^{-1}.
PadicMatrix ad_phi(const PadicMatrix& phi, const PadicMatrix& X);

/// A block-monomial phi (Levi block structure, one integral slope per
/// diagonal block) together with a unipotent perturbation u supported in
/// blocks of strictly positive relative slope.
struct SplitProblem {
    long long p = 0;
    int precision = 0;
    std::vector<int> block_sizes;
    std::vector<long long> block_slopes;
    PadicMatrix phi;
    PadicMatrix u;

    int dimension() const;
    int block_of(int index) const;
    /// Relative slope of entry position (i, j).
    long long relative_slope(int i, int j) const;

    /// Shape, block-diagonal phi with per-block unit structure, unipotent
    /// u with positive-relative-slope support. Throws std::invalid_argument
    /// on violation.
    void validate() const;
};

/// Computes a unipotent h with h * u * phi * h^{-1} = phi to precision N,
/// stratum by stratum over the positive relative slopes, each resolved by
/// the geometric series X = -sum_j Ad(phi)^j(u-part). Throws
/// divergence_error if a series term fails to gain valuation at the rate
/// its slope promises.
PadicMatrix split_slopes(const SplitProblem& problem, int N);

/// Minimal entry valuation of h*u*phi*h^{-1} - phi, capped at N
/// (below-precision encodes as N).
int verify_conjugation(const PadicMatrix& h, const PadicMatrix& u,
                       const PadicMatrix& phi, int N);

} // namespace fcrystal
