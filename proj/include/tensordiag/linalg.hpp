#ifndef TENSORDIAG_LINALG_HPP
#define TENSORDIAG_LINALG_HPP

// Dense complex matrix primitives consumed by the decomposition algorithms.
// The eigensolver and range finder satisfy the forward-error and η-accurate
// range contracts with standard dense solvers from Eigen.

#include "tensordiag/common.hpp"
#include "tensordiag/op_count.hpp"
#include "tensordiag/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace tensordiag {

/// Relative gap below which an eigenvalue pair counts as clustered.
inline constexpr double kGapTol = 1e-12;

/// Singularity threshold for LU pivots, relative to the matrix norm.
inline constexpr double kPivotTol = 1e-12;

/// Orthonormality tolerance for semi-unitary factors.
inline constexpr double kOrthoTol = 1e-10;

/// Rank-r factorization A = P·diag(sigma)·Q*.
struct CompactSVD {
    Matrix P;
    RealVector sigma;
    Matrix Q;
    Index rank = 0;

    Matrix reconstruct() const { return P * sigma.cast<Complex>().asDiagonal() * Q.adjoint(); }
};

/// n×r matrix with orthonormal columns.
struct SemiUnitary {
    Matrix cols;

    Index rows() const noexcept { return cols.rows(); }
    Index rank() const noexcept { return cols.cols(); }
    double orthonormality_error() const;
};

struct EigResult {
    Matrix vectors;  // unit columns
    Vector values;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;  // max_i ||D v_i − λ_i v_i|| / ||D||_F
};

inline double operator_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

inline double SemiUnitary::orthonormality_error() const {
    return operator_norm(cols.adjoint() * cols - Matrix::Identity(cols.cols(), cols.cols()));
}

/// Rotates a unit vector so that its largest-modulus entry is positive real.
inline void canonicalize_phase(Eigen::Ref<Vector> v) {
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    const Complex pivot = v(arg);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
}

inline CompactSVD compact_svd(const Matrix& A, std::optional<Index> rank = std::nullopt) {
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) throw DegenerateInputError("compact_svd: zero matrix");
    const Index kmax = std::min(A.rows(), A.cols());
    if (rank && (*rank < 1 || *rank > kmax)) throw ArgumentError("compact_svd: rank hint out of range");
    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ops::factorization(A.rows(), A.cols());
    const RealVector& s = svd.singularValues();
    Index r = 0;
    if (rank) {
        r = *rank;
        if (!(s(r - 1) > 0.0)) throw RankDeficiencyError("compact_svd: requested rank exceeds exact rank");
    } else {
        const double cut = kRankTol * s(0);
        while (r < kmax && s(r) > cut) ++r;
    }
    return CompactSVD{svd.matrixU().leftCols(r), s.head(r), svd.matrixV().leftCols(r), r};
}

/// Moore–Penrose inverse via the compact SVD; the zero matrix maps to zero.
inline Matrix pseudoinverse(const Matrix& A) {
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(A.cols(), A.rows());
    const CompactSVD f = compact_svd(A);
    return f.Q * f.sigma.cwiseInverse().cast<Complex>().asDiagonal() * f.P.adjoint();
}

/// Inverse by LU with partial pivoting; throws when a pivot is below
/// kPivotTol·||M||_F.
inline Matrix lu_inverse(const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() == 0) throw ArgumentError("lu_inverse needs a nonempty square matrix");
    Eigen::PartialPivLU<Matrix> lu(M);
    ops::lu(static_cast<std::uint64_t>(M.rows()));
    const double floor = kPivotTol * M.norm();
    const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(smallest >= floor) || smallest == 0.0) throw SingularMatrixError("matrix is numerically singular");
    return lu.inverse();
}

/// Eigendecomposition of a diagonalisable matrix with simple spectrum.
/// Eigenvectors have unit norm and canonical phase; pairs are sorted by the
/// eigenvalue's (real, imaginary) parts. `eps1` is the caller's requested
/// accuracy; the dense solver does not consume it.
inline EigResult eig_diagonalisable(const Matrix& D, [[maybe_unused]] double eps1) {
    if (D.rows() != D.cols() || D.rows() == 0) throw ArgumentError("eig_diagonalisable needs a square matrix");
    const Index n = D.rows();
    Eigen::ComplexEigenSolver<Matrix> es(D, true);
    ops::factorization(n, n);
    if (es.info() != Eigen::Success) throw IllConditionedSpectrumError("eigensolver did not converge");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    const Vector& lam = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (lam(a).real() != lam(b).real()) return lam(a).real() < lam(b).real();
        return lam(a).imag() < lam(b).imag();
    });

    EigResult out;
    out.vectors.resize(n, n);
    out.values.resize(n);
    for (Index i = 0; i < n; ++i) {
        const Index src = order[static_cast<std::size_t>(i)];
        out.values(i) = lam(src);
        Vector v = es.eigenvectors().col(src);
        v.normalize();
        canonicalize_phase(v);
        out.vectors.col(i) = v;
    }

    const double scale = D.norm();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) out.min_gap = std::min(out.min_gap, std::abs(out.values(i) - out.values(j)));
    if (out.min_gap < kGapTol * scale)
        throw IllConditionedSpectrumError("eigenvalue gap below resolution; spectrum is clustered");
    for (Index i = 0; i < n; ++i) {
        const double res = (D * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
        out.max_residual = std::max(out.max_residual, scale > 0.0 ? res / scale : res);
    }
    return out;
}

struct DeflateResult {
    SemiUnitary basis;
    RealVector values;  // the r leading eigenvalues, nonincreasing
};

/// Floor for the r-th eigenvalue of a range-finder input: half the guaranteed 2/r.
inline double deflate_floor(Index r) { return 1.0 / (2.0 * static_cast<double>(r)); }

/// η-accurate orthonormal basis of the range of the rank-r Hermitian PSD matrix
/// near A0, from its top-r spectral decomposition. The generator is unused by
/// the spectral route.
inline DeflateResult deflate_detailed(const Matrix& A0, Index r, double eta, [[maybe_unused]] Rng& rng) {
    if (A0.rows() != A0.cols()) throw ArgumentError("deflate needs a square matrix");
    const Index n = A0.rows();
    if (r < 1 || r > n) throw ArgumentError("deflate: rank out of range");
    if (!(eta > 0.0)) throw ArgumentError("deflate: accuracy must be positive");
    const Matrix H = (A0 + A0.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    ops::factorization(n, n);
    if (es.info() != Eigen::Success) throw RankDeficiencyError("deflate: eigensolver did not converge");

    DeflateResult out;
    out.basis.cols.resize(n, r);
    out.values.resize(r);
    for (Index i = 0; i < r; ++i) {
        const Index src = n - 1 - i;
        out.values(i) = es.eigenvalues()(src);
        Vector v = es.eigenvectors().col(src);
        canonicalize_phase(v);
        out.basis.cols.col(i) = v;
    }
    const double top = out.values(0);
    const double rth = out.values(r - 1);
    if (rth < deflate_floor(r) || rth <= kRankTol * top)
        throw RankDeficiencyError("deflate: r-th eigenvalue " + std::to_string(rth) + " below floor");
    return out;
}

inline SemiUnitary deflate(const Matrix& A0, Index r, double eta, Rng& rng) {
    return deflate_detailed(A0, r, eta, rng).basis;
}

/// Largest principal angle between the column spans of A and B (equal rank).
/// Uses the sine form ||(I − Q_A Q_A*) Q_B|| so that tiny angles stay accurate.
inline double principal_angle(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw ArgumentError("principal_angle: shape mismatch");
    const Index k = A.cols();
    const Matrix QA = Eigen::HouseholderQR<Matrix>(A).householderQ() * Matrix::Identity(A.rows(), k);
    const Matrix QB = Eigen::HouseholderQR<Matrix>(B).householderQ() * Matrix::Identity(B.rows(), k);
    const double s = operator_norm(QB - QA * (QA.adjoint() * QB));
    return std::asin(std::min(1.0, s));
}

/// min over unitary R of ||P − P_ref·R||, the operator-norm distance to the
/// best-aligned representative of P_ref's span.
inline double aligned_distance(const Matrix& P, const Matrix& P_ref) {
    if (P.rows() != P_ref.rows() || P.cols() != P_ref.cols()) throw ArgumentError("aligned_distance: shape mismatch");
    Eigen::JacobiSVD<Matrix> svd(P_ref.adjoint() * P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix R = svd.matrixU() * svd.matrixV().adjoint();
    return operator_norm(P - P_ref * R);
}

}  // namespace tensordiag

#endif  // TENSORDIAG_LINALG_HPP
