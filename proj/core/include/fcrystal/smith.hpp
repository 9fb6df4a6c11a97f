#pragma once

#include <vector>

namespace fcrystal {

/// Smith normal form data of an integer matrix A: a unimodular left
/// transform U and the invariant factors d with U*A*V = diag(d), d_i >= 0,
/// d_i | d_{i+1}, zeros last. V is not tracked; only U and d are needed to
/// compute classes in the cokernel of A.
struct SmithResult {
    std::vector<std::vector<long long>> U; // rows x rows
    std::vector<long long> diag;           // length min(rows, cols)
    int rank = 0;                          // number of nonzero invariant factors
};

SmithResult smith_normal_form(std::vector<std::vector<long long>> A);

} // namespace fcrystal
