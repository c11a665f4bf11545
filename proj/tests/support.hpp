#ifndef TENSORDIAG_TESTS_SUPPORT_HPP
#define TENSORDIAG_TESTS_SUPPORT_HPP

// Independent reference implementations used as oracles. They are written as
// literal index sums and share no code paths with the library kernels.

#include "tensordiag/tensordiag.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testsupport {

using namespace tensordiag;

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const double re = nd(g);
            m(i, j) = Complex(re, nd(g));
        }
    return m;
}

inline Vector random_vector(Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

/// Entries indexed by the sorted triple so that the tensor is exactly symmetric.
inline SymTensor3 random_tensor(Index n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Complex> packed;
    for (Index c = 0; c < n; ++c)
        for (Index b = 0; b <= c; ++b)
            for (Index a = 0; a <= b; ++a) {
                const double re = nd(g);
                packed.emplace_back(re, nd(g));
            }
    std::vector<Complex> data(static_cast<std::size_t>(n * n * n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                Index s[3] = {i, j, k};
                std::sort(s, s + 3);
                data[static_cast<std::size_t>((i * n + j) * n + k)] = packed[packed_index(s[0], s[1], s[2])];
            }
    return SymTensor3::from_data(n, std::move(data));
}

/// Σ_m U_mi U_mj U_mk, entry by entry.
inline std::vector<Complex> rank_one_oracle(const Matrix& U) {
    const Index n = U.cols();
    std::vector<Complex> out(static_cast<std::size_t>(n * n * n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                Complex s = 0.0;
                for (Index m = 0; m < U.rows(); ++m) s += U(m, i) * U(m, j) * U(m, k);
                out[static_cast<std::size_t>((i * n + j) * n + k)] = s;
            }
    return out;
}

/// S_{i1 i2 i3} = Σ_{j1 j2 j3} V_{j1 i1} V_{j2 i2} V_{j3 i3} T_{j1 j2 j3}, as a literal sixfold loop.
inline std::vector<Complex> cob_oracle(const SymTensor3& T, const Matrix& V) {
    const Index n = T.n(), r = V.cols();
    std::vector<Complex> out(static_cast<std::size_t>(r * r * r));
    for (Index a = 0; a < r; ++a)
        for (Index b = 0; b < r; ++b)
            for (Index c = 0; c < r; ++c) {
                Complex s = 0.0;
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < n; ++j)
                        for (Index k = 0; k < n; ++k) s += V(i, a) * V(j, b) * V(k, c) * T(i, j, k);
                out[static_cast<std::size_t>((a * r + b) * r + c)] = s;
            }
    return out;
}

inline double max_abs_diff(const std::vector<Complex>& x, std::span<const Complex> y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

inline double max_abs(std::span<const Complex> y) {
    double worst = 0.0;
    for (const auto& z : y) worst = std::max(worst, std::abs(z));
    return worst;
}

/// Slice k read entry by entry from a flat oracle array of side r.
inline Matrix oracle_slice(const std::vector<Complex>& S, Index r, Index k) {
    Matrix m(r, r);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) m(i, j) = S[static_cast<std::size_t>((i * r + j) * r + k)];
    return m;
}

/// Largest principal angle as acos of the smallest singular value of Q_A* Q_B.
/// Loses accuracy below ~1e-8 rad; fine as a cross-check on larger angles.
inline double angle_via_svd(const Matrix& A, const Matrix& B) {
    Eigen::JacobiSVD<Matrix> sa(A, Eigen::ComputeThinU), sb(B, Eigen::ComputeThinU);
    const Matrix G = sa.matrixU().adjoint() * sb.matrixU();
    const double smin = Eigen::JacobiSVD<Matrix>(G).singularValues().minCoeff();
    return std::acos(std::min(1.0, smin));
}

}  // namespace testsupport

#endif  // TENSORDIAG_TESTS_SUPPORT_HPP
