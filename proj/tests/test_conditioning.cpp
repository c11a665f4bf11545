#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace tensordiag;
using namespace testsupport;

TEST(KappaF, Examples) {
    EXPECT_NEAR(kappa_F(Matrix(Matrix::Identity(2, 2))).kappa, 4.0, 1e-14);
    Matrix u(1, 1);
    u << 2.0;
    EXPECT_NEAR(kappa_F(u).kappa, 4.25, 1e-14);
    EXPECT_THROW(kappa_F(Matrix(Matrix::Zero(2, 3))), DegenerateInputError);
}

TEST(KappaF, PermutationAndCubeRootInvariance) {
    std::mt19937_64 g(3);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Index r = 1 + static_cast<Index>(s % 5), n = r + static_cast<Index>(s % 3);
        const Matrix U = random_matrix(r, n, s);
        std::vector<Index> perm(static_cast<std::size_t>(r));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g);
        Matrix V(r, n);
        for (Index i = 0; i < r; ++i) {
            const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(g() % 3) / 3.0);
            V.row(i) = w * U.row(perm[static_cast<std::size_t>(i)]);
        }
        const double a = kappa_F(U).kappa, b = kappa_F(V).kappa;
        EXPECT_LE(std::abs(a - b), 1e-12 * a);
    }
}

TEST(KappaF, LowerBound) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Index r = 1 + static_cast<Index>(s % 6), n = 6;
        EXPECT_GE(kappa_F(random_matrix(r, n, 500 + s)).kappa, 2.0 * static_cast<double>(r) * (1 - 1e-12));
    }
}

TEST(GenRdiag, ScalarInstance) {
    const GeneratedInstance inst = gen_rdiag(1, 1, 10.0, 4);
    const Complex u = inst.U(0, 0);
    EXPECT_NEAR(std::abs(inst.tensor(0, 0, 0) - u * u * u), 0.0, 1e-14);
    EXPECT_NEAR(inst.cond.kappa, std::norm(u) + 1.0 / std::norm(u), 1e-12);
}

TEST(GenRdiag, RejectionContract) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const GeneratedInstance inst = gen_rdiag(8, 3, 100.0, s);
        EXPECT_LE(inst.cond.kappa, 100.0);
        EXPECT_NEAR(kappa_F(inst.U).kappa, inst.cond.kappa, 1e-10 * inst.cond.kappa);
        EXPECT_LE(residual(inst.tensor, inst.U), 1e-12 * frobenius_norm(inst.tensor));
    }
}

TEST(GenRdiag, Errors) {
    EXPECT_THROW(gen_rdiag(3, 5, 100.0, 1), ArgumentError);
    EXPECT_THROW(gen_rdiag(8, 8, 1.0, 1), GeneratorError);
}

TEST(GenRdiag, Deterministic) {
    EXPECT_EQ(gen_rdiag(5, 3, 60.0, 9).U, gen_rdiag(5, 3, 60.0, 9).U);
}

TEST(KappaF, WellDefinedThroughDecomposition) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const GeneratedInstance inst = gen_rdiag(6, 6, 50.0, 40 + s);
        const Decomposition d = decompose_complete_exact(inst.tensor, s);
        EXPECT_LE(std::abs(kappa_F(d.vectors).kappa - inst.cond.kappa), 1e-8 * inst.cond.kappa);
    }
}

TEST(Smoothed, ZeroCenterAtTwenty) {
    const SmoothedResult res = smoothed_experiment(SmoothedTrialSpec::zero_center(20, 20, 1.0, 200, 1));
    EXPECT_NEAR(res.summary.paper_failure_bound, 1.0 / std::sqrt(20.0) + std::exp(-40.0 / (std::numbers::pi * std::numbers::pi)), 1e-15);
    EXPECT_LE(res.summary.exceedance_rate, res.summary.paper_failure_bound);
    EXPECT_EQ(res.summary.trials, 200);
}

TEST(Smoothed, AverageCaseAtFifty) {
    const SmoothedTrialSpec spec = SmoothedTrialSpec::zero_center(50, 50, 1.0, 200, 2);
    int exceeded = 0;
    for (const auto& rec : smoothed_experiment(spec).records) exceeded += rec.kappa_F > average_case_bound(50) ? 1 : 0;
    EXPECT_LE(exceeded, 20);
}

TEST(Smoothed, RandomCenter) {
    std::mt19937_64 g(8);
    std::normal_distribution<double> nd;
    RealMatrix C(20, 20);
    for (Index i = 0; i < C.size(); ++i) C.data()[i] = nd(g);
    C *= 10.0 / real_operator_norm(C);
    const SmoothedResult res = smoothed_experiment(SmoothedTrialSpec{C, 0.1, 200, 3});
    EXPECT_LE(res.summary.exceedance_rate, res.summary.paper_failure_bound + 0.05);
    EXPECT_NEAR(res.records.front().bound, smoothed_bound(20, 0.1, 10.0), 1e-9 * res.records.front().bound);
}

TEST(Smoothed, BoundFormula) {
    const double e2 = std::exp(2.0);
    EXPECT_NEAR(smoothed_bound(2, 1.0, 3.0), 98.0 * 8 + 2 * 2 * 9 + e2 * 16, 1e-9);
    EXPECT_DOUBLE_EQ(average_case_bound(2), 20.0 + 256.0);
}

TEST(Smoothed, InvalidSigma) {
    EXPECT_THROW(smoothed_trial(SmoothedTrialSpec::zero_center(4, 4, 0.0, 1, 1), 0), ArgumentError);
    EXPECT_THROW(smoothed_experiment(SmoothedTrialSpec::zero_center(4, 4, -1.0, 1, 1)), ArgumentError);
    EXPECT_THROW(smoothed_experiment(SmoothedTrialSpec::zero_center(4, 4, 1.0, 0, 1)), ArgumentError);
}

TEST(Smoothed, SingleTrialSummary) {
    const SmoothedResult res = smoothed_experiment(SmoothedTrialSpec::zero_center(5, 5, 1.0, 1, 4));
    ASSERT_EQ(res.records.size(), 1u);
    const double k = res.records[0].kappa_F;
    for (double q : {res.summary.kappa_min, res.summary.kappa_q25, res.summary.kappa_median, res.summary.kappa_q75,
                     res.summary.kappa_q90, res.summary.kappa_max})
        EXPECT_EQ(q, k);
    EXPECT_EQ(res.summary.exceedance_rate, res.records[0].exceeded ? 1.0 : 0.0);
}

TEST(Smoothed, CsvIsDeterministicAcrossThreadCounts) {
    const SmoothedTrialSpec spec = SmoothedTrialSpec::zero_center(10, 8, 0.5, 37, 5);
    std::ostringstream a, b, c;
    io::write_trial_csv(a, smoothed_experiment(spec, 1).records);
    io::write_trial_csv(b, smoothed_experiment(spec, 1).records);
    io::write_trial_csv(c, smoothed_experiment(spec, 4).records);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str(), c.str());
    EXPECT_EQ(a.str().rfind("trial,n,r,sigma,kappa_F,bound,exceeded\n", 0), 0u);
}

TEST(Concentration, GaussianOperatorNorm) {
    // Pr[||A|| ≥ 6σ√n + σ√n + ||Ā||] ≤ e^{−2n/π²}, with Ā = 0, σ = 1.
    const Index n = 50;
    const double threshold = 7.0 * std::sqrt(50.0);
    std::mt19937_64 g(11);
    std::normal_distribution<double> nd;
    int over = 0;
    for (int t = 0; t < 1000; ++t) {
        RealMatrix A(n, n);
        for (Index i = 0; i < A.size(); ++i) A.data()[i] = nd(g);
        over += Eigen::JacobiSVD<RealMatrix>(A).singularValues()(0) >= threshold ? 1 : 0;
    }
    EXPECT_LE(over / 1000.0, std::exp(-100.0 / (std::numbers::pi * std::numbers::pi)) + 0.02);
}

TEST(Concentration, SquaredNormWindow) {
    const double n = 256.0;
    const double lo = n - 2.0 * std::pow(n, 0.75), hi = n + 2.0 * std::pow(n, 0.75) + 2.0 * std::pow(n, 0.25);
    std::mt19937_64 g(12);
    std::normal_distribution<double> nd;
    int outside = 0;
    for (int t = 0; t < 1000; ++t) {
        double sq = 0.0;
        for (int i = 0; i < 256; ++i) {
            const double x = nd(g);
            sq += x * x;
        }
        outside += (sq < lo || sq > hi) ? 1 : 0;
    }
    EXPECT_LE(outside / 1000.0, std::exp(-std::pow(n, 0.25)) + 0.02);
}
