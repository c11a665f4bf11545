#ifndef TENSORDIAG_SUB_RECOVERY_HPP
#define TENSORDIAG_SUB_RECOVERY_HPP

// Orthonormal basis of span{u_1..u_r} from a random slice combination, whose
// range is exactly that span when the combination has full rank r.

#include "tensordiag/common.hpp"
#include "tensordiag/complete.hpp"
#include "tensordiag/conditioning.hpp"
#include "tensordiag/linalg.hpp"
#include "tensordiag/random.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>

namespace tensordiag {

struct SubParams {
    double B = 0.0;
    double eps = 0.0;
    Index r = 0;
    double C_CW = 1.0;
    ConstantsProfile profile = ConstantsProfile::practical;
    double delta = 0.0;  // declared input noise; checked under the paper profile

    /// (192·C_CW² + 1)·n⁵·B³
    double k_F(Index n) const {
        const double nd = static_cast<double>(n);
        return (192.0 * C_CW * C_CW + 1.0) * std::pow(nd, 5.0) * std::pow(B, 3.0);
    }

    double eta_grid(Index n) const {
        if (profile == ConstantsProfile::practical) return 1.0 / 65536.0;
        const double rd = static_cast<double>(r);
        return grid_step_for(2.0 * C_CW * rd * rd * std::sqrt(static_cast<double>(n) * B));
    }

    /// Largest admissible input noise: ε⁴ / (c_δ·n¹²·B^{9/2}), c_δ = 24·20⁶·(192·C_CW² + 1).
    double delta_bound(Index n) const {
        const double c_delta = 24.0 * std::pow(20.0, 6.0) * (192.0 * C_CW * C_CW + 1.0);
        return std::pow(eps, 4.0) / (c_delta * std::pow(static_cast<double>(n), 12.0) * std::pow(B, 4.5));
    }

    void validate(Index n) const {
        if (r < 1 || r > n) throw ArgumentError("r must satisfy 1 <= r <= n");
        if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError("eps must lie in (0, 1]");
        if (!(B > 0.0)) throw ArgumentError("B must be positive");
        if (!(C_CW > 0.0)) throw ArgumentError("C_CW must be positive");
        if (!(delta >= 0.0)) throw ArgumentError("delta must be nonnegative");
    }
};

struct SubResult {
    SemiUnitary basis;
    RealVector a;       // coefficients of the accepted slice combination
    RealVector values;  // leading r singular values of the range-finder input
    double sigma_r = 0.0;
    int attempts = 0;
};

/// Grid with 1/η = r², i.e. 2r² points; top-r singular vectors of T^(α).
inline SubResult sub_recover_exact_detailed(const SymTensor3& T, Index r, std::uint64_t seed,
                                            int max_attempts = kMaxRetries) {
    const Index n = T.n();
    if (r < 1 || r > n) throw ArgumentError("r must satisfy 1 <= r <= n");
    if (max_attempts < 1) throw ArgumentError("max_attempts must be positive");
    const double eta = 1.0 / static_cast<double>(r * r);
    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng = make_rng(seed, Stream::sub_recovery, static_cast<std::uint64_t>(attempt));
        RealVector alpha = sample_grid(n, eta, rng);
        try {
            const CompactSVD f = compact_svd(slice_combination(T, alpha));
            if (f.rank < r) {
                last = "slice combination has numerical rank " + std::to_string(f.rank) + " < " + std::to_string(r);
                continue;
            }
            SubResult out;
            out.basis.cols = f.P.leftCols(r);
            out.a = std::move(alpha);
            out.values = f.sigma.head(r);
            out.sigma_r = f.sigma(r - 1);
            out.attempts = attempt + 1;
            return out;
        } catch (const DegenerateInputError& e) {
            last = e.what();
        }
    }
    throw AlgorithmFailure("subspace recovery", max_attempts, last);
}

inline SemiUnitary sub_recover_exact(const SymTensor3& T, Index r, std::uint64_t seed, int max_attempts = kMaxRetries) {
    return sub_recover_exact_detailed(T, r, seed, max_attempts).basis;
}

/// Range of 2·k_F·T^(a)T^(a)* for a drawn from the grid, via the range finder.
inline SubResult sub_recover_robust_detailed(const SymTensor3& Tprime, const SubParams& params, std::uint64_t seed,
                                             int max_attempts = kMaxRetries) {
    const Index n = Tprime.n();
    params.validate(n);
    if (max_attempts < 1) throw ArgumentError("max_attempts must be positive");
    if (params.profile == ConstantsProfile::paper && params.delta > params.delta_bound(n))
        throw ArgumentError("declared noise " + std::to_string(params.delta) + " exceeds the admissible bound " +
                            std::to_string(params.delta_bound(n)));
    const double eta = params.eta_grid(n);
    const double scale = 2.0 * params.k_F(n);
    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng = make_rng(seed, Stream::sub_recovery, static_cast<std::uint64_t>(attempt));
        RealVector a = sample_grid(n, eta, rng);
        const Matrix Ta = slice_combination(Tprime, a);
        const Matrix A = Ta * Ta.adjoint();
        ops::gemm(n, n, n);
        Rng deflate_rng = make_rng(seed, Stream::deflate, static_cast<std::uint64_t>(attempt));
        try {
            DeflateResult d = deflate_detailed(scale * A, params.r, params.eps, deflate_rng);
            SubResult out;
            out.basis = std::move(d.basis);
            out.a = std::move(a);
            out.sigma_r = d.values(params.r - 1);
            out.values = std::move(d.values);
            out.attempts = attempt + 1;
            return out;
        } catch (const RankDeficiencyError& e) {
            last = e.what();
        }
    }
    throw AlgorithmFailure("subspace recovery", max_attempts, last);
}

inline SemiUnitary sub_recover_robust(const SymTensor3& Tprime, const SubParams& params, std::uint64_t seed,
                                      int max_attempts = kMaxRetries) {
    return sub_recover_robust_detailed(Tprime, params, seed, max_attempts).basis;
}

struct InputConditions {
    bool rank_ok = false;
    double kappa_F_Ta = 0.0;
    bool passes = false;
};

/// rank(T^(a)) = r and κ_F(T^(a)) ≤ k_F.
inline InputConditions check_input_conditions(const SymTensor3& T, const RealVector& a, Index r, double B, double k_F) {
    (void)B;
    InputConditions c;
    const Matrix Ta = slice_combination(T, a);
    if (Ta.cwiseAbs().maxCoeff() == 0.0) return c;
    c.rank_ok = compact_svd(Ta).rank == r;
    c.kappa_F_Ta = kappa_F(Ta).kappa;
    c.passes = c.rank_ok && c.kappa_F_Ta <= k_F;
    return c;
}

}  // namespace tensordiag

#endif  // TENSORDIAG_SUB_RECOVERY_HPP
