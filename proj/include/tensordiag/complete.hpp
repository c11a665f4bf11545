#ifndef TENSORDIAG_COMPLETE_HPP
#define TENSORDIAG_COMPLETE_HPP

// Jennrich-style decomposition of diagonalisable tensors (r = n): a random
// slice pencil (T^(a))⁻¹T^(b) is diagonalised, the inverse eigenvector matrix
// gives the directions, and the slice traces after the change of basis give
// the cubed scales.

#include "tensordiag/basis_change.hpp"
#include "tensordiag/common.hpp"
#include "tensordiag/linalg.hpp"
#include "tensordiag/random.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace tensordiag {

/// Largest grid denominator: keeps every grid point −1 + k/N exact in a double.
inline constexpr double kMaxGridDenominator = 4503599627370496.0;  // 2^52

/// Grid step whose inverse is the integer ceil(x), clamped to [1, 2^52].
inline double grid_step_for(double x) {
    if (!(x > 0.0)) throw ArgumentError("grid denominator must be positive");
    const double N = std::min(std::ceil(x), kMaxGridDenominator);
    return 1.0 / std::max(1.0, N);
}

/// Uniform draws from {−1, −1+η, …, 1−η}; 1/η must be an integer.
inline RealVector sample_grid(Index count, double eta_grid, Rng& rng) {
    if (count < 0) throw ArgumentError("sample_grid: negative count");
    if (!(eta_grid > 0.0) || eta_grid > 1.0) throw ArgumentError("sample_grid: grid step must lie in (0, 1]");
    const double inv = 1.0 / eta_grid;
    const double N = std::round(inv);
    if (std::abs(inv - N) > 1e-9 * N || N > kMaxGridDenominator)
        throw ArgumentError("sample_grid: 1/eta_grid must be an integer");
    const auto points = static_cast<std::uint64_t>(2.0 * N);
    std::uniform_int_distribution<std::uint64_t> pick(0, points - 1);
    RealVector a(count);
    for (Index i = 0; i < count; ++i) a(i) = -1.0 + static_cast<double>(pick(rng)) / N;
    return a;
}

/// Principal cube root: modulus |α|^{1/3}, argument arg(α)/3.
inline Complex cube_root(Complex alpha) {
    if (alpha == Complex(0.0, 0.0)) return alpha;
    return std::polar(std::cbrt(std::abs(alpha)), std::arg(alpha) / 3.0);
}

struct RobustParams {
    double B = 0.0;
    double eps = 0.0;
    double eta_grid = 0.0;
    double eps1 = 0.0;
    double k_gap = 0.0;  // recorded, not consumed
    double k_F = 0.0;    // recorded, not consumed
    ConstantsProfile profile = ConstantsProfile::practical;

    /// Parameters for decomposing a side-n tensor. Unit absolute constants.
    static RobustParams make(Index n, double B, double eps, ConstantsProfile profile = ConstantsProfile::practical) {
        if (n < 1) throw ArgumentError("side length must be positive");
        if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in (0, 1)");
        if (!(B >= 2.0 * static_cast<double>(n)))
            throw ArgumentError("B must be at least 2n, the smallest possible condition number");
        const double nd = static_cast<double>(n);
        RobustParams p;
        p.B = B;
        p.eps = eps;
        p.profile = profile;
        p.k_gap = 1.0 / (std::pow(nd, 6.0) * std::pow(B, 3.0));
        p.k_F = std::pow(nd, 5.0) * std::pow(B, 3.0);
        if (profile == ConstantsProfile::paper) {
            p.eta_grid = grid_step_for(std::pow(nd, 8.5) * std::pow(B, 4.0));
            p.eps1 = std::max(std::pow(eps, 3.0) / (std::pow(nd, 12.0) * std::pow(B, 4.5)),
                              std::numeric_limits<double>::min());
        } else {
            p.eta_grid = 1.0 / 65536.0;
            p.eps1 = eps / 100.0;
        }
        return p;
    }
};

struct Decomposition {
    Index n = 0;
    Index r = 0;
    Matrix vectors;  // r×n, one factor per row
    double residual = 0.0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::exact;
    int attempts = 0;

    /// Smallest singular value of the factor matrix above kRankTol times the largest.
    bool linearly_independent() const {
        if (vectors.rows() == 0 || vectors.rows() > vectors.cols()) return false;
        Eigen::JacobiSVD<Matrix> svd(vectors);
        const RealVector& s = svd.singularValues();
        return s(0) > 0.0 && s(s.size() - 1) > kRankTol * s(0);
    }
};

namespace detail {

struct Pencil {
    Matrix vectors;  // unit eigenvectors of (Sa)⁻¹Sb, as columns
    Matrix inverse;  // rows are the recovered directions
};

inline Pencil diagonalise_pencil(const Matrix& Sa, const Matrix& Sb, double eps1) {
    const Index k = Sa.rows();
    const Matrix D = lu_inverse(Sa) * Sb;
    ops::gemm(k, k, k);
    EigResult eig = eig_diagonalisable(D, eps1);
    Matrix W = lu_inverse(eig.vectors);
    return {std::move(eig.vectors), std::move(W)};
}

inline Matrix scale_rows(const Matrix& W, const Vector& alpha) {
    Matrix Z = W;
    for (Index i = 0; i < Z.rows(); ++i) Z.row(i) *= cube_root(alpha(i));
    ops::add(static_cast<std::uint64_t>(W.size()));
    return Z;
}

inline std::string describe_residual(double res, double norm) {
    return "relative residual " + std::to_string(norm > 0.0 ? res / norm : res) + " above 1e-8";
}

}  // namespace detail

/// Relative residual above which the exact pipelines redraw.
inline constexpr double kExactResidualTol = 1e-8;

/// Exact-arithmetic pipeline. Coefficients come from the grid with 1/η =
/// max(n², 2); a draw is accepted once its residual is below 1e-8·||T||_F.
inline Decomposition decompose_complete_exact(const SymTensor3& T, std::uint64_t seed, int max_attempts = kMaxRetries) {
    const Index n = T.n();
    if (max_attempts < 1) throw ArgumentError("max_attempts must be positive");
    const double eta = 1.0 / std::max(2.0, static_cast<double>(n * n));
    const double norm = frobenius_norm(T);
    if (norm == 0.0) throw DegenerateInputError("zero tensor has no diagonalisable decomposition");

    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng = make_rng(seed, Stream::pencil, static_cast<std::uint64_t>(attempt));
        const RealVector a = sample_grid(n, eta, rng);
        const RealVector b = sample_grid(n, eta, rng);
        try {
            const detail::Pencil p = detail::diagonalise_pencil(slice_combination(T, a), slice_combination(T, b), 0.0);
            const Vector alpha = tscb(T, p.vectors);
            Decomposition out;
            out.vectors = detail::scale_rows(p.inverse, alpha);
            out.residual = residual(T, out.vectors);
            if (!(out.residual <= kExactResidualTol * norm)) {
                last = detail::describe_residual(out.residual, norm);
                continue;
            }
            out.n = n;
            out.r = n;
            out.seed = seed;
            out.algorithm = Algorithm::exact;
            out.attempts = attempt + 1;
            return out;
        } catch (const DegenerateInputError& e) {
            last = e.what();
        } catch (const IllConditionedSpectrumError& e) {
            last = e.what();
        }
    }
    throw AlgorithmFailure("complete decomposition", max_attempts, last);
}

/// Grid-sampled pipeline with the eigensolver at accuracy eps1. There is no
/// residual test: with noisy input the achievable residual is unknown.
inline Decomposition decompose_complete_robust(const SymTensor3& Tprime, const RobustParams& params, std::uint64_t seed,
                                               int max_attempts = kMaxRetries) {
    const Index n = Tprime.n();
    if (!(params.eps > 0.0 && params.eps < 1.0)) throw ArgumentError("eps must lie in (0, 1)");
    if (max_attempts < 1) throw ArgumentError("max_attempts must be positive");

    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng = make_rng(seed, Stream::pencil, static_cast<std::uint64_t>(attempt));
        const RealVector a = sample_grid(n, params.eta_grid, rng);
        const RealVector b = sample_grid(n, params.eta_grid, rng);
        try {
            const Matrix Ta = slice_combination(Tprime, a);
#ifndef NDEBUG
            assert(operator_norm(Ta) <= std::sqrt(static_cast<double>(n) * std::pow(params.B, 3.0)) * (1.0 + 1e-9));
#endif
            const detail::Pencil p = detail::diagonalise_pencil(Ta, slice_combination(Tprime, b), params.eps1);
            const Vector alpha = tscb(Tprime, p.vectors);
            Decomposition out;
            out.n = n;
            out.r = n;
            out.vectors = detail::scale_rows(p.inverse, alpha);
            out.residual = residual(Tprime, out.vectors);
            out.seed = seed;
            out.algorithm = Algorithm::robust;
            out.attempts = attempt + 1;
            return out;
        } catch (const DegenerateInputError& e) {
            last = e.what();
        } catch (const IllConditionedSpectrumError& e) {
            last = e.what();
        }
    }
    throw AlgorithmFailure("complete decomposition", max_attempts, last);
}

}  // namespace tensordiag

#endif  // TENSORDIAG_COMPLETE_HPP
