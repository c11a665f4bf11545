#ifndef TENSORDIAG_UNDERCOMPLETE_HPP
#define TENSORDIAG_UNDERCOMPLETE_HPP

// Undercomplete decomposition (r ≤ n): recover an orthonormal basis P of the
// factor span, decompose the r×r×r tensor S = (P̄⊗P̄⊗P̄).T, and map the factors
// back with P. The variants differ only in how much of S they materialize.

#include "tensordiag/basis_change.hpp"
#include "tensordiag/common.hpp"
#include "tensordiag/complete.hpp"
#include "tensordiag/linalg.hpp"
#include "tensordiag/random.hpp"
#include "tensordiag/sub_recovery.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace tensordiag {

struct UndercompleteParams {
    double B = 0.0;
    double eps = 0.0;
    Index r = 0;
    double C = 1.0;
    double C_CW = 1.0;
    ConstantsProfile profile = ConstantsProfile::practical;
    double delta = 0.0;  // declared input noise

    /// Subspace accuracy. Paper profile: r^{−C₁·log⁴(rB/ε)} with C₁ = 80·C,
    /// floored at the smallest normal double.
    double eps1() const {
        if (profile == ConstantsProfile::practical) return eps / 1000.0;
        const double rd = static_cast<double>(r);
        const double L = std::log(rd * B / eps);
        const double e = std::exp(-80.0 * C * L * L * L * L * std::log(rd));
        return std::max(e, std::numeric_limits<double>::min());
    }

    double eps3() const { return eps / (2.0 * std::sqrt(static_cast<double>(r))); }
    double eps0() const { return eps3(); }

    void validate(Index n) const {
        if (r < 1 || r > n) throw ArgumentError("r must satisfy 1 <= r <= n");
        if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in (0, 1)");
        if (!(B > 0.0)) throw ArgumentError("B must be positive");
    }

    SubParams sub_params() const { return SubParams{B, eps1(), r, C_CW, profile, delta}; }

    /// Parameters of the inner r×r×r decomposition at accuracy eps3.
    RobustParams inner() const { return RobustParams::make(r, B, eps3(), profile); }
};

namespace detail {

/// l_i = P z_i for the rows z_i of Z.
inline Matrix lift(const SemiUnitary& P, const Matrix& Z) {
    ops::gemm(Z.rows(), Z.cols(), P.rows());
    return Z * P.cols.transpose();
}

inline Decomposition finish(const SymTensor3& T, Matrix L, std::uint64_t seed, Algorithm tag, int attempts) {
    Decomposition out;
    out.n = T.n();
    out.r = L.rows();
    out.residual = residual(T, L);
    out.vectors = std::move(L);
    out.seed = seed;
    out.algorithm = tag;
    out.attempts = attempts;
    return out;
}

}  // namespace detail

/// Exact basis recovery, explicit change of basis, exact complete decomposition.
inline Decomposition decompose_undercomplete_exact(const SymTensor3& T, Index r, std::uint64_t seed,
                                                   int max_attempts = kMaxRetries) {
    const SubResult sub = sub_recover_exact_detailed(T, r, seed, max_attempts);
    const SymTensor3 S = explicit_cob(T, sub.basis.cols.conjugate());
    const Decomposition inner = decompose_complete_exact(S, seed, max_attempts);
    Decomposition out =
        detail::finish(T, detail::lift(sub.basis, inner.vectors), seed, Algorithm::exact, sub.attempts + inner.attempts);
    const double norm = frobenius_norm(T);
    if (!(out.residual <= kExactResidualTol * norm))
        throw AlgorithmFailure("undercomplete decomposition", out.attempts,
                               detail::describe_residual(out.residual, norm));
    return out;
}

/// Robust basis recovery, explicit change of basis, robust complete
/// decomposition of the materialized S′.
inline Decomposition decompose_undercomplete_robust(const SymTensor3& Tprime, const UndercompleteParams& params,
                                                    std::uint64_t seed, int max_attempts = kMaxRetries) {
    params.validate(Tprime.n());
    const SubResult sub = sub_recover_robust_detailed(Tprime, params.sub_params(), seed, max_attempts);
    const SymTensor3 S = explicit_cob(Tprime, sub.basis.cols.conjugate());
    const Decomposition inner = decompose_complete_robust(S, params.inner(), seed, max_attempts);
    return detail::finish(Tprime, detail::lift(sub.basis, inner.vectors), seed, Algorithm::naive_cob,
                          sub.attempts + inner.attempts);
}

namespace detail {

// Shared by the expanded and linear variants. `combine(a)` returns Σ a_i S_i
// and `traces(V)` the slice traces of (V⊗V⊗V).S; everything else is common,
// including the random bits.
template <class Combine, class Traces>
Decomposition pencil_stage(const SymTensor3& Tprime, const SubResult& sub, const RobustParams& inner, std::uint64_t seed,
                           int max_attempts, Algorithm tag, Combine&& combine, Traces&& traces) {
    const Index r = sub.basis.rank();
    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng = make_rng(seed, Stream::pencil, static_cast<std::uint64_t>(attempt));
        const RealVector a = sample_grid(r, inner.eta_grid, rng);
        const RealVector b = sample_grid(r, inner.eta_grid, rng);
        try {
            const Pencil p = diagonalise_pencil(combine(a), combine(b), inner.eps1);
            const Vector alpha = traces(p.vectors);
            return finish(Tprime, lift(sub.basis, scale_rows(p.inverse, alpha)), seed, tag,
                          sub.attempts + attempt + 1);
        } catch (const DegenerateInputError& e) {
            last = e.what();
        } catch (const IllConditionedSpectrumError& e) {
            last = e.what();
        }
    }
    throw AlgorithmFailure("pencil diagonalisation", max_attempts, last);
}

}  // namespace detail

/// Materializes S, then runs the complete-case steps on its slices.
inline Decomposition decompose_undercomplete_expanded(const SymTensor3& Tprime, const UndercompleteParams& params,
                                                      std::uint64_t seed, int max_attempts = kMaxRetries) {
    params.validate(Tprime.n());
    const SubResult sub = sub_recover_robust_detailed(Tprime, params.sub_params(), seed, max_attempts);
    const SymTensor3 S = explicit_cob(Tprime, sub.basis.cols.conjugate());
    return detail::pencil_stage(
        Tprime, sub, params.inner(), seed, max_attempts, Algorithm::expanded,
        [&](const RealVector& a) { return slice_combination(S, a); },
        [&](const Matrix& V) { return tscb(S, V); });
}

/// Never forms S: its slice combinations come from lcscb on T′ and the scales
/// from tscb on T′ with the composed basis P̄V.
inline Decomposition decompose_undercomplete_linear(const SymTensor3& Tprime, const UndercompleteParams& params,
                                                    std::uint64_t seed, int max_attempts = kMaxRetries) {
    params.validate(Tprime.n());
    const SubResult sub = sub_recover_robust_detailed(Tprime, params.sub_params(), seed, max_attempts);
    const Matrix Pbar = sub.basis.cols.conjugate();
    return detail::pencil_stage(
        Tprime, sub, params.inner(), seed, max_attempts, Algorithm::linear,
        [&](const RealVector& a) { return lcscb(Tprime, Pbar, a); },
        [&](const Matrix& V) {
            const Matrix M = Pbar * V;
            ops::gemm(Pbar.rows(), V.rows(), V.cols());
            return tscb(Tprime, M);
        });
}

}  // namespace tensordiag

#endif  // TENSORDIAG_UNDERCOMPLETE_HPP
