#include "fcrystal/smith.hpp"

#include <cstdint>
#include <cstdlib>
#include <stdexcept>

namespace fcrystal {

namespace {

long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("smith_normal_form: entry exceeds 64-bit range");
    return (long long)v;
}

// row[i] -= q * row[j], applied to both M and U
void row_op(std::vector<std::vector<long long>>& M, std::vector<std::vector<long long>>& U,
            size_t i, size_t j, long long q) {
    for (size_t c = 0; c < M[i].size(); ++c)
        M[i][c] = checked((__int128)M[i][c] - (__int128)q * M[j][c]);
    for (size_t c = 0; c < U[i].size(); ++c)
        U[i][c] = checked((__int128)U[i][c] - (__int128)q * U[j][c]);
}

void col_op(std::vector<std::vector<long long>>& M, size_t i, size_t j, long long q) {
    for (auto& row : M)
        row[i] = checked((__int128)row[i] - (__int128)q * row[j]);
}

} // namespace

SmithResult smith_normal_form(std::vector<std::vector<long long>> M) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    SmithResult res;
    res.U.assign(rows, std::vector<long long>(rows, 0));
    for (size_t i = 0; i < rows; ++i) res.U[i][i] = 1;
    size_t steps = std::min(rows, cols);

    for (size_t t = 0; t < steps; ++t) {
        // find the smallest nonzero entry in the trailing submatrix
        size_t pi = t, pj = t;
        long long best = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                long long a = std::llabs(M[i][j]);
                if (a != 0 && (best == 0 || a < best)) { best = a; pi = i; pj = j; }
            }
        if (best == 0) break; // trailing block is zero

        std::swap(M[t], M[pi]);
        std::swap(res.U[t], res.U[pi]);
        if (pj != t)
            for (auto& row : M) std::swap(row[t], row[pj]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < rows; ++i) {
                if (M[i][t] == 0) continue;
                long long q = M[i][t] / M[t][t];
                row_op(M, res.U, i, t, q);
                if (M[i][t] != 0) { // remainder smaller than pivot: promote it
                    std::swap(M[t], M[i]);
                    std::swap(res.U[t], res.U[i]);
                    clean = false;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (M[t][j] == 0) continue;
                long long q = M[t][j] / M[t][t];
                col_op(M, j, t, q);
                if (M[t][j] != 0) {
                    for (auto& row : M) std::swap(row[t], row[j]);
                    clean = false;
                }
            }
        }
        if (M[t][t] < 0) {
            for (auto& row : M) row[t] = -row[t];
        }
    }

    // enforce d_i | d_{i+1} (zeros are already trailing: a zero pivot stops
    // the elimination loop above)
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t t = 0; t + 1 < steps; ++t) {
            long long a = M[t][t], b = M[t + 1][t + 1];
            if (a == 0 || b == 0 || b % a == 0) continue;
            // fold d_{t+1} into column t and re-eliminate the 2x2 block
            col_op(M, t, t + 1, -1); // col t += col t+1
            while (M[t + 1][t] != 0) {
                long long q = M[t][t] == 0 ? 0 : M[t + 1][t] / M[t][t];
                if (q != 0) row_op(M, res.U, t + 1, t, q);
                if (M[t + 1][t] != 0) {
                    std::swap(M[t], M[t + 1]);
                    std::swap(res.U[t], res.U[t + 1]);
                }
            }
            // clear the fill-in above the new pivot
            if (M[t][t + 1] != 0) {
                long long q = M[t][t + 1] / M[t][t];
                col_op(M, t + 1, t, q);
                if (M[t][t + 1] != 0)
                    throw std::logic_error("smith_normal_form: divisibility pass failed");
            }
            if (M[t][t] < 0)
                for (auto& row : M) row[t] = -row[t];
            if (M[t + 1][t + 1] < 0)
                for (auto& row : M) row[t + 1] = -row[t + 1];
            changed = true;
        }
    }

    res.diag.resize(steps);
    for (size_t t = 0; t < steps; ++t) {
        res.diag[t] = M[t][t];
        if (res.diag[t] != 0) ++res.rank;
    }
    return res;
}

} // namespace fcrystal
