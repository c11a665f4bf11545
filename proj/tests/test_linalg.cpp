#include "support.hpp"

#include <gtest/gtest.h>

using namespace tensordiag;
using namespace testsupport;

namespace {

double mp_residual(const Matrix& A, const Matrix& X) {
    const double scale = std::max({1.0, operator_norm(A), operator_norm(X)});
    const double r1 = operator_norm(A * X * A - A);
    const double r2 = operator_norm(X * A * X - X);
    const Matrix AX = A * X, XA = X * A;
    const double r3 = operator_norm(AX - AX.adjoint());
    const double r4 = operator_norm(XA - XA.adjoint());
    return std::max({r1, r2, r3, r4}) / scale;
}

Matrix random_rank(Index m, Index n, Index k, std::uint64_t seed) {
    return random_matrix(m, k, seed) * random_matrix(k, n, seed + 1);
}

}  // namespace

TEST(CompactSvd, DiagonalRankDetection) {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 0) = 3.0;
    A(1, 1) = 2.0;
    const CompactSVD f = compact_svd(A);
    EXPECT_EQ(f.rank, 2);
    EXPECT_NEAR(f.sigma(0), 3.0, 1e-14);
    EXPECT_NEAR(f.sigma(1), 2.0, 1e-14);
}

TEST(CompactSvd, Identity) {
    const CompactSVD f = compact_svd(Matrix::Identity(4, 4));
    EXPECT_EQ(f.rank, 4);
    for (Index i = 0; i < 4; ++i) EXPECT_NEAR(f.sigma(i), 1.0, 1e-14);
    EXPECT_LE((f.P.cwiseAbs() * f.Q.cwiseAbs().transpose() - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CompactSvd, ConstructedLowRank) {
    const Vector x = random_vector(4, 1), y = random_vector(4, 2), u = random_vector(4, 3), v = random_vector(4, 4);
    const Matrix A = x * y.adjoint() + u * v.adjoint();
    const CompactSVD f = compact_svd(A);
    EXPECT_EQ(f.rank, 2);
    EXPECT_LE(operator_norm(A - f.reconstruct()), 1e-12 * operator_norm(A));
    EXPECT_LE(operator_norm(f.P.adjoint() * f.P - Matrix::Identity(2, 2)), 1e-10);
    EXPECT_LE(operator_norm(f.Q.adjoint() * f.Q - Matrix::Identity(2, 2)), 1e-10);
}

TEST(CompactSvd, RankHintAndErrors) {
    const Matrix A = random_rank(6, 5, 3, 10);
    EXPECT_EQ(compact_svd(A, 2).rank, 2);
    EXPECT_THROW(compact_svd(Matrix::Zero(3, 3)), DegenerateInputError);
    EXPECT_THROW(compact_svd(A, 0), ArgumentError);
    EXPECT_THROW(compact_svd(A, 6), ArgumentError);
}

TEST(CompactSvd, MatchesGramEigenvalues) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Index m = 3 + static_cast<Index>(s % 10), n = 2 + static_cast<Index>((s * 7) % 11);
        const Matrix A = random_matrix(m, n, 50 + s);
        const CompactSVD f = compact_svd(A);
        Eigen::SelfAdjointEigenSolver<Matrix> es(A.adjoint() * A);
        RealVector ev = es.eigenvalues().reverse().head(f.rank).cwiseMax(0.0).cwiseSqrt();
        for (Index i = 0; i < f.rank; ++i) EXPECT_NEAR(f.sigma(i), ev(i), 1e-8 * ev(0));
        for (Index i = 1; i < f.rank; ++i) EXPECT_GE(f.sigma(i - 1), f.sigma(i));
    }
}

TEST(Pseudoinverse, Invertible) {
    const Matrix M = random_matrix(5, 5, 7);
    const Matrix inv = M.inverse();
    const double cond = operator_norm(M) * operator_norm(inv);
    EXPECT_LE(operator_norm(pseudoinverse(M) - inv), 1e-12 * cond * operator_norm(inv));
}

TEST(Pseudoinverse, ZeroRowsAppended) {
    const Matrix M = random_matrix(3, 3, 8);
    Matrix tall = Matrix::Zero(5, 3);
    tall.topRows(3) = M;
    const Matrix X = pseudoinverse(tall);
    ASSERT_EQ(X.rows(), 3);
    ASSERT_EQ(X.cols(), 5);
    EXPECT_LE((X.leftCols(3) - M.inverse()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(X.rightCols(2).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pseudoinverse, LeftInverseOfTall) {
    const Matrix A = random_matrix(5, 3, 9);
    EXPECT_LE(operator_norm(pseudoinverse(A) * A - Matrix::Identity(3, 3)), 1e-10);
}

TEST(Pseudoinverse, ZeroMatrix) {
    const Matrix X = pseudoinverse(Matrix::Zero(2, 4));
    EXPECT_EQ(X.rows(), 4);
    EXPECT_EQ(X.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Pseudoinverse, MoorePenroseConditions) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Matrix sq = random_matrix(6, 6, 1000 + s);
        const Matrix tall = random_matrix(8, 4, 2000 + s);
        const Matrix deficient = random_rank(7, 6, 3, 3000 + 2 * s);
        EXPECT_LE(mp_residual(sq, pseudoinverse(sq)), 1e-9);
        EXPECT_LE(mp_residual(tall, pseudoinverse(tall)), 1e-9);
        EXPECT_LE(mp_residual(deficient, pseudoinverse(deficient)), 1e-9);
    }
}

TEST(Pseudoinverse, ProductWithOrthonormalLeftFactor) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Matrix A = Eigen::HouseholderQR<Matrix>(random_matrix(7, 4, 400 + s)).householderQ() * Matrix::Identity(7, 4);
        const Matrix B = random_matrix(4, 5, 500 + s);
        const Matrix lhs = pseudoinverse(A * B);
        const Matrix rhs = pseudoinverse(B) * pseudoinverse(A);
        EXPECT_LE(operator_norm(lhs - rhs), 1e-10 * std::max(1.0, operator_norm(rhs)));
    }
}

TEST(LuInverse, SingularDetected) {
    Matrix M = Matrix::Identity(3, 3);
    M(2, 2) = 0.0;
    EXPECT_THROW(lu_inverse(M), SingularMatrixError);
    const Matrix R = random_matrix(4, 4, 2);
    EXPECT_LE(operator_norm(lu_inverse(R) * R - Matrix::Identity(4, 4)), 1e-12 * operator_norm(R) * operator_norm(R.inverse()));
}

TEST(EigDiagonalisable, Diagonal) {
    Matrix D = Matrix::Zero(3, 3);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    D(2, 2) = 3.0;
    const EigResult e = eig_diagonalisable(D, 1e-10);
    for (Index i = 0; i < 3; ++i) {
        EXPECT_NEAR(e.values(i).real(), static_cast<double>(i + 1), 1e-14);
        EXPECT_NEAR(std::abs(e.vectors(i, i)), 1.0, 1e-14);
        EXPECT_EQ(e.vectors(i, i).imag(), 0.0);
    }
}

TEST(EigDiagonalisable, Swap) {
    Matrix D(2, 2);
    D << 0.0, 1.0, 1.0, 0.0;
    const EigResult e = eig_diagonalisable(D, 1e-10);
    EXPECT_NEAR(e.values(0).real(), -1.0, 1e-14);
    EXPECT_NEAR(e.values(1).real(), 1.0, 1e-14);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(e.vectors(0, 0)), h, 1e-14);
    EXPECT_NEAR(std::abs(e.vectors(1, 0)), h, 1e-14);
    EXPECT_NEAR(std::abs(e.vectors(0, 0) + e.vectors(1, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.vectors(0, 1) - e.vectors(1, 1)), 0.0, 1e-14);
}

TEST(EigDiagonalisable, ConstructedSpectrum) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Index n = 6;
        Matrix V = random_matrix(n, n, 60 + s) + 3.0 * Matrix::Identity(n, n);
        Vector lam(n);
        for (Index i = 0; i < n; ++i) lam(i) = Complex(static_cast<double>(i) + 0.1 * static_cast<double>(s % 3), 0.5);
        const Matrix D = V * lam.asDiagonal() * V.inverse();
        const EigResult e = eig_diagonalisable(D, 1e-10);
        for (Index i = 0; i < n; ++i) {
            Vector v = V.col(i).normalized();
            canonicalize_phase(v);
            EXPECT_LE((e.vectors.col(i) - v).norm(), 1e-8);
            EXPECT_NEAR(e.vectors.col(i).norm(), 1.0, 1e-12);
        }
        EXPECT_LE(e.max_residual, 1e-12);
    }
}

TEST(EigDiagonalisable, ClusteredSpectrumRejected) {
    EXPECT_THROW(eig_diagonalisable(Matrix::Identity(3, 3), 1e-10), IllConditionedSpectrumError);
}

TEST(Deflate, CoordinatePlane) {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 0) = 1.0;
    A(1, 1) = 1.0;
    Rng rng(1);
    const SemiUnitary S = deflate(A, 2, 1e-6, rng);
    Matrix ref = Matrix::Zero(3, 2);
    ref(0, 0) = 1.0;
    ref(1, 1) = 1.0;
    EXPECT_LE(principal_angle(S.cols, ref), 1e-14);
}

TEST(Deflate, NoisyRankTwo) {
    const Matrix X = random_matrix(6, 2, 5);
    const Matrix A = X * X.adjoint();
    Matrix N = random_matrix(6, 6, 6);
    N = (N + N.adjoint()).eval();
    N *= 1e-10 / operator_norm(N);
    Rng rng(2);
    const SemiUnitary S = deflate(A + N, 2, 1e-3, rng);
    const CompactSVD truth = compact_svd(A, 2);
    EXPECT_LE(principal_angle(S.cols, truth.P), 1e-3);
    EXPECT_LE(S.orthonormality_error(), 1e-3 + 1e-10);
}

TEST(Deflate, ConstructedRange) {
    const Index n = 7, r = 3;
    const Matrix U = Eigen::HouseholderQR<Matrix>(random_matrix(n, r, 8)).householderQ() * Matrix::Identity(n, r);
    RealVector lam(r);
    lam << 3.0, 2.0, 1.0;
    const Matrix Ut = U.transpose();  // r×n
    const Matrix A = Ut.transpose() * lam.cast<Complex>().asDiagonal() * Ut.conjugate();
    Rng rng(3);
    const SemiUnitary S = deflate(A, r, 1e-10, rng);
    EXPECT_LE(principal_angle(S.cols, Ut.transpose()), 1e-10);
}

TEST(Deflate, FloorAndArguments) {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 0) = 1.0;
    A(1, 1) = 0.1;  // below 1/(2r) = 0.25
    Rng rng(4);
    EXPECT_THROW(deflate(A, 2, 1e-6, rng), RankDeficiencyError);
    EXPECT_THROW(deflate(A, 4, 1e-6, rng), ArgumentError);
    EXPECT_THROW(deflate(A, 1, 0.0, rng), ArgumentError);
}

TEST(PrincipalAngle, AgreesWithCosineForm) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix A = random_matrix(8, 3, 700 + s), B = random_matrix(8, 3, 800 + s);
        EXPECT_NEAR(principal_angle(A, B), angle_via_svd(A, B), 1e-8);
    }
}

TEST(AlignedDistance, UnitaryRotationIsZero) {
    const Matrix P = Eigen::HouseholderQR<Matrix>(random_matrix(6, 3, 1)).householderQ() * Matrix::Identity(6, 3);
    const Matrix R = Eigen::HouseholderQR<Matrix>(random_matrix(3, 3, 2)).householderQ();
    EXPECT_LE(aligned_distance(P * R, P), 1e-13);
}
