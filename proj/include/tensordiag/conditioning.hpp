#ifndef TENSORDIAG_CONDITIONING_HPP
#define TENSORDIAG_CONDITIONING_HPP

// Frobenius condition numbers, the instance generator used by every
// decomposition test, and the Gaussian-perturbation Monte Carlo experiments.

#include "tensordiag/common.hpp"
#include "tensordiag/linalg.hpp"
#include "tensordiag/random.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

namespace tensordiag {

struct CondReport {
    double norm_U_sq = 0.0;
    double norm_Upinv_sq = 0.0;
    double kappa = 0.0;
};

/// ||U||_F² + ||U†||_F².
inline CondReport kappa_F(const Matrix& U) {
    if (U.size() == 0 || U.cwiseAbs().maxCoeff() == 0.0) throw DegenerateInputError("kappa_F of a zero matrix");
    CondReport c;
    c.norm_U_sq = U.squaredNorm();
    c.norm_Upinv_sq = pseudoinverse(U).squaredNorm();
    c.kappa = c.norm_U_sq + c.norm_Upinv_sq;
    return c;
}

inline CondReport kappa_F(const RealMatrix& U) { return kappa_F(Matrix(U.cast<Complex>())); }

struct GeneratedInstance {
    SymTensor3 tensor;
    Matrix U;  // r×n ground truth, one factor per row
    CondReport cond;
    int draws = 0;
};

inline constexpr int kGeneratorBudget = 100;

/// Complex Gaussian factors, each draw rescaled by the scalar that minimizes
/// κ_F (c² = ||U†||_F/||U||_F), rejected until κ_F ≤ kappa_max.
inline GeneratedInstance gen_rdiag(Index n, Index r, double kappa_max, std::uint64_t seed) {
    if (n < 1 || r < 1) throw ArgumentError("n and r must be positive");
    if (r > n) throw ArgumentError("r must be <= n");
    Rng rng = make_rng(seed, Stream::generator);
    double best = std::numeric_limits<double>::infinity();
    for (int draw = 1; draw <= kGeneratorBudget; ++draw) {
        Matrix U = complex_gaussian(r, n, rng);
        const CondReport raw = kappa_F(U);
        U *= std::sqrt(std::sqrt(raw.norm_Upinv_sq / raw.norm_U_sq));
        const CondReport cond = kappa_F(U);
        best = std::min(best, cond.kappa);
        if (cond.kappa <= kappa_max) return GeneratedInstance{from_rank_one_sum(U), std::move(U), cond, draw};
    }
    throw GeneratorError("no draw with kappa_F <= " + std::to_string(kappa_max) + " in " +
                         std::to_string(kGeneratorBudget) + " draws (best " + std::to_string(best) + ")");
}

/// 98σ²n³ + 2n||Ā||² + e²n⁴/σ², with ||Ā|| the operator norm of the center.
inline double smoothed_bound(Index n, double sigma, double center_norm) {
    const double nd = static_cast<double>(n);
    const double e2 = std::numbers::e * std::numbers::e;
    return 98.0 * sigma * sigma * nd * nd * nd + 2.0 * nd * center_norm * center_norm + e2 * nd * nd * nd * nd / (sigma * sigma);
}

/// Failure probability attached to smoothed_bound: 1/√n + e^{−2n/π²}.
inline double smoothed_failure_bound(Index n) {
    const double nd = static_cast<double>(n);
    return 1.0 / std::sqrt(nd) + std::exp(-2.0 * nd / (std::numbers::pi * std::numbers::pi));
}

/// Average-case bound 5n² + 2n⁷ for a standard Gaussian square matrix.
inline double average_case_bound(Index n) {
    const double nd = static_cast<double>(n);
    return 5.0 * nd * nd + 2.0 * std::pow(nd, 7.0);
}

/// √(2/(n²π)) + n·e^{−n^{1/4}}; stated for n ≥ 256.
inline double average_case_failure_bound(Index n) {
    const double nd = static_cast<double>(n);
    return std::sqrt(2.0 / (nd * nd * std::numbers::pi)) + nd * std::exp(-std::pow(nd, 0.25));
}

struct SmoothedTrialSpec {
    RealMatrix center;  // r×n; zero for the average case
    double sigma = 1.0;
    int trials = 1;
    std::uint64_t seed = 0;

    static SmoothedTrialSpec zero_center(Index n, Index r, double sigma, int trials, std::uint64_t seed) {
        return {RealMatrix::Zero(r, n), sigma, trials, seed};
    }

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be positive");
        if (trials < 1) throw ArgumentError("trials must be positive");
        if (center.rows() < 1 || center.cols() < 1) throw ArgumentError("center must be a nonempty r×n matrix");
        if (!center.allFinite()) throw ArgumentError("center has non-finite entries");
    }
};

struct TrialRecord {
    int trial = 0;
    Index n = 0;
    Index r = 0;
    double sigma = 0.0;
    double kappa_F = 0.0;
    double bound = 0.0;
    bool exceeded = false;
};

inline double real_operator_norm(const RealMatrix& A) {
    if (A.size() == 0) return 0.0;
    return Eigen::JacobiSVD<RealMatrix>(A).singularValues()(0);
}

/// One draw A ~ N(Ū, σ²I) from the trial's own stream.
inline TrialRecord smoothed_trial(const SmoothedTrialSpec& spec, int index) {
    spec.validate();
    Rng rng = make_rng(spec.seed, Stream::trial, static_cast<std::uint64_t>(index));
    const RealMatrix A = spec.center + real_gaussian(spec.center.rows(), spec.center.cols(), rng, spec.sigma);
    TrialRecord rec;
    rec.trial = index;
    rec.n = spec.center.cols();
    rec.r = spec.center.rows();
    rec.sigma = spec.sigma;
    rec.kappa_F = kappa_F(A).kappa;
    rec.bound = smoothed_bound(rec.n, spec.sigma, real_operator_norm(spec.center));
    rec.exceeded = rec.kappa_F > rec.bound;
    return rec;
}

struct SmoothedSummary {
    Index n = 0;
    Index r = 0;
    double sigma = 0.0;
    int trials = 0;
    double exceedance_rate = 0.0;
    double paper_failure_bound = 0.0;
    double kappa_min = 0.0, kappa_q25 = 0.0, kappa_median = 0.0, kappa_q75 = 0.0, kappa_q90 = 0.0, kappa_max = 0.0;
};

struct SmoothedResult {
    std::vector<TrialRecord> records;
    SmoothedSummary summary;
};

/// Linear-interpolation quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline SmoothedSummary summarize(const std::vector<TrialRecord>& records, double failure_bound) {
    SmoothedSummary s;
    if (records.empty()) return s;
    s.n = records.front().n;
    s.r = records.front().r;
    s.sigma = records.front().sigma;
    s.trials = static_cast<int>(records.size());
    s.paper_failure_bound = failure_bound;
    std::vector<double> k;
    int exceeded = 0;
    for (const auto& rec : records) {
        k.push_back(rec.kappa_F);
        exceeded += rec.exceeded ? 1 : 0;
    }
    std::sort(k.begin(), k.end());
    s.exceedance_rate = static_cast<double>(exceeded) / static_cast<double>(records.size());
    s.kappa_min = k.front();
    s.kappa_q25 = quantile_sorted(k, 0.25);
    s.kappa_median = quantile_sorted(k, 0.5);
    s.kappa_q75 = quantile_sorted(k, 0.75);
    s.kappa_q90 = quantile_sorted(k, 0.9);
    s.kappa_max = k.back();
    return s;
}

/// Runs every trial of `spec`; results depend only on the seed, not on
/// `threads` (each trial owns its stream and its output slot).
inline SmoothedResult smoothed_experiment(const SmoothedTrialSpec& spec, unsigned threads = 1) {
    spec.validate();
    std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials));
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(spec.trials)));
    auto run = [&](unsigned w) {
        for (int i = static_cast<int>(w); i < spec.trials; i += static_cast<int>(workers))
            records[static_cast<std::size_t>(i)] = smoothed_trial(spec, i);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    SmoothedResult out;
    out.summary = summarize(records, smoothed_failure_bound(spec.center.cols()));
    out.records = std::move(records);
    return out;
}

}  // namespace tensordiag

#endif  // TENSORDIAG_CONDITIONING_HPP
