#pragma once

#include <optional>
#include <vector>

#include "kmd/numeric.hpp"

namespace kmd::detail {

using RatMat = std::vector<std::vector<Rat>>;

/// Reduced row echelon form in place; returns pivot columns. Pivots are
/// restricted to the first `ncols` columns (0 = full width); trailing columns
/// ride along as right-hand sides.
inline std::vector<size_t> rref(RatMat& m, size_t ncols = 0) {
    std::vector<size_t> piv;
    if (m.empty()) return piv;
    size_t R = m.size(), W = m[0].size();
    size_t C = ncols ? ncols : W;
    size_t row = 0;
    for (size_t col = 0; col < C && row < R; ++col) {
        size_t sel = R;
        for (size_t i = row; i < R; ++i)
            if (m[i][col] != Rat(0)) { sel = i; break; }
        if (sel == R) continue;
        std::swap(m[row], m[sel]);
        Rat p = m[row][col];
        for (auto& x : m[row]) x /= p;
        for (size_t i = 0; i < R; ++i) {
            if (i == row || m[i][col] == Rat(0)) continue;
            Rat f = m[i][col];
            for (size_t j = 0; j < W; ++j) m[i][j] -= f * m[row][j];
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

/// unique solution of A x = b when A has full column rank; nullopt when the
/// system is inconsistent or underdetermined
inline std::optional<std::vector<Rat>> solve_unique(RatMat a, const std::vector<Rat>& b) {
    size_t R = a.size(), C = R ? a[0].size() : 0;
    for (size_t i = 0; i < R; ++i) a[i].push_back(b[i]);
    auto piv = rref(a, C);
    if (piv.size() != C) return std::nullopt;
    for (size_t i = piv.size(); i < R; ++i)
        if (a[i][C] != Rat(0)) return std::nullopt;
    std::vector<Rat> x(C);
    for (size_t k = 0; k < C; ++k) x[piv[k]] = a[k][C];
    return x;
}

}  // namespace kmd::detail
