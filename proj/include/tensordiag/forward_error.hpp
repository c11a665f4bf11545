#ifndef TENSORDIAG_FORWARD_ERROR_HPP
#define TENSORDIAG_FORWARD_ERROR_HPP

#include "tensordiag/common.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <vector>

namespace tensordiag {

/// The three cube roots of unity, 1 first.
inline const std::array<Complex, 3>& cube_roots_of_unity() {
    static const std::array<Complex, 3> roots = {Complex(1.0, 0.0), std::polar(1.0, 2.0 * std::numbers::pi / 3.0),
                                                 std::polar(1.0, 4.0 * std::numbers::pi / 3.0)};
    return roots;
}

namespace detail {

// Kuhn's augmenting-path matching restricted to edges with cost ≤ threshold.
inline bool has_perfect_matching(const RealMatrix& cost, double threshold) {
    const Index r = cost.rows();
    std::vector<Index> match_of_col(static_cast<std::size_t>(r), -1);
    std::vector<char> seen;
    auto augment = [&](auto&& self, Index row) -> bool {
        for (Index col = 0; col < r; ++col) {
            if (cost(row, col) > threshold || seen[static_cast<std::size_t>(col)]) continue;
            seen[static_cast<std::size_t>(col)] = 1;
            auto& owner = match_of_col[static_cast<std::size_t>(col)];
            if (owner < 0 || self(self, owner)) {
                owner = row;
                return true;
            }
        }
        return false;
    };
    for (Index row = 0; row < r; ++row) {
        seen.assign(static_cast<std::size_t>(r), 0);
        if (!augment(augment, row)) return false;
    }
    return true;
}

}  // namespace detail

/// Minimum over permutations of the maximum assigned cost (bottleneck assignment).
inline double bottleneck_assignment(const RealMatrix& cost) {
    if (cost.rows() != cost.cols()) throw ArgumentError("bottleneck_assignment needs a square cost matrix");
    if (cost.size() == 0) return 0.0;
    std::vector<double> levels(cost.data(), cost.data() + cost.size());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::has_perfect_matching(cost, levels[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return levels[lo];
}

/// min over π ∈ S_r and cube roots ω_i of max_i ||ω_i u_π(i) − u'_i||, with the
/// vectors given as rows of the two r×n matrices.
inline double forward_error(const Matrix& U_true, const Matrix& U_est) {
    if (U_true.rows() != U_est.rows() || U_true.cols() != U_est.cols())
        throw ArgumentError("forward_error: shape mismatch");
    if (U_true.rows() > U_true.cols()) throw ArgumentError("forward_error: more vectors than dimensions");
    const Index r = U_true.rows();
    RealMatrix cost(r, r);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& w : cube_roots_of_unity())
                best = std::min(best, (w * U_true.row(i) - U_est.row(j)).norm());
            cost(i, j) = best;
        }
    return bottleneck_assignment(cost);
}

}  // namespace tensordiag

#endif  // TENSORDIAG_FORWARD_ERROR_HPP
