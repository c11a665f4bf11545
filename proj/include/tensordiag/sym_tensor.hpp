#ifndef TENSORDIAG_SYM_TENSOR_HPP
#define TENSORDIAG_SYM_TENSOR_HPP

#include "tensordiag/common.hpp"
#include "tensordiag/op_count.hpp"
#include "tensordiag/random.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace tensordiag {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Tolerance (relative to ||T||_F) for accepting externally supplied tensors.
inline constexpr double kSymTol = 1e-10;

/// Dense order-3 symmetric tensor over ℂ, stored as n³ entries in (i,j,k)
/// row-major order. Indices are zero-based. Immutable after construction.
class SymTensor3 {
public:
    SymTensor3() = default;

    /// Zero tensor of side n.
    explicit SymTensor3(Index n) : n_(n), data_(checked_size(n), Complex(0.0, 0.0)) {}

    /// Takes ownership of raw entries; rejects asymmetric input rather than
    /// symmetrizing it.
    static SymTensor3 from_data(Index n, std::vector<Complex> data, double sym_tol = kSymTol) {
        if (static_cast<std::size_t>(data.size()) != checked_size(n))
            throw ArgumentError("tensor data has " + std::to_string(data.size()) + " entries, expected n³ = " +
                                std::to_string(checked_size(n)));
        for (const auto& z : data)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw DegenerateInputError("tensor contains non-finite entries");
        SymTensor3 t;
        t.n_ = n;
        t.data_ = std::move(data);
        const double norm = t.frobenius_norm_impl();
        if (t.max_asymmetry() > sym_tol * norm)
            throw DegenerateInputError("tensor is not symmetric within tolerance");
        return t;
    }

    /// Fills every entry from f(a, b, c) evaluated on the sorted index triple
    /// a ≤ b ≤ c, so the result is exactly symmetric.
    template <class F>
    static SymTensor3 generate_symmetric(Index n, F&& f) {
        SymTensor3 t(n);
        Complex* out = t.data_.data();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k) {
                    Index a = i, b = j, c = k;
                    if (a > b) std::swap(a, b);
                    if (b > c) std::swap(b, c);
                    if (a > b) std::swap(a, b);
                    *out++ = f(a, b, c);
                }
        return t;
    }

    Index n() const noexcept { return n_; }

    const Complex& operator()(Index i, Index j, Index k) const noexcept { return data_[offset(i, j, k)]; }

    std::span<const Complex> data() const noexcept { return data_; }

    /// n×n block with first index fixed to m. For a symmetric tensor this is slice m.
    Eigen::Map<const RowMatrix> block(Index m) const noexcept {
        return Eigen::Map<const RowMatrix>(data_.data() + m * n_ * n_, n_, n_);
    }

    /// n × n² flattening whose row m is block m.
    Eigen::Map<const RowMatrix> flat() const noexcept {
        return Eigen::Map<const RowMatrix>(data_.data(), n_, n_ * n_);
    }

    /// Largest |T_ijk − T_σ(ijk)| over all permutations σ.
    double max_asymmetry() const noexcept {
        double worst = 0.0;
        for (Index i = 0; i < n_; ++i)
            for (Index j = i; j < n_; ++j)
                for (Index k = j; k < n_; ++k) {
                    const Complex ref = (*this)(i, j, k);
                    const Complex perms[] = {(*this)(i, k, j), (*this)(j, i, k), (*this)(j, k, i),
                                             (*this)(k, i, j), (*this)(k, j, i)};
                    for (const auto& p : perms) worst = std::max(worst, std::abs(p - ref));
                }
        return worst;
    }

    friend bool operator==(const SymTensor3& a, const SymTensor3& b) {
        return a.n_ == b.n_ && a.data_ == b.data_;
    }

private:
    static std::size_t checked_size(Index n) {
        if (n < 1) throw ArgumentError("tensor side length must be positive");
        const auto s = static_cast<std::size_t>(n);
        return s * s * s;
    }

    std::size_t offset(Index i, Index j, Index k) const noexcept {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }

    double frobenius_norm_impl() const noexcept {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    Index n_ = 0;
    std::vector<Complex> data_;
};

/// Position of the sorted triple a ≤ b ≤ c in packed symmetric storage.
inline std::size_t packed_index(Index a, Index b, Index c) noexcept {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b), uc = static_cast<std::size_t>(c);
    return uc * (uc + 1) * (uc + 2) / 6 + ub * (ub + 1) / 2 + ua;
}

inline std::size_t packed_size(Index n) noexcept { return packed_index(0, 0, n); }

namespace detail {

// Column a*n+b holds the entrywise product of columns a and b of U.
inline Matrix pair_products(const Matrix& U) {
    const Index n = U.cols();
    Matrix Q(U.rows(), n * n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) Q.col(a * n + b) = U.col(a).cwiseProduct(U.col(b));
    return Q;
}

inline Complex rank_one_entry(const Matrix& Q, const Matrix& U, Index a, Index b, Index c) {
    return (Q.col(a * U.cols() + b).array() * U.col(c).array()).sum();
}

}  // namespace detail

/// T = Σ_m u_m⊗³ where u_m are the rows of U (r×n). Linear independence is not required.
inline SymTensor3 from_rank_one_sum(const Matrix& U) {
    if (U.rows() < 1 || U.cols() < 1) throw ArgumentError("from_rank_one_sum needs a nonempty r×n matrix");
    const Matrix Q = detail::pair_products(U);
    ops::add(static_cast<std::uint64_t>(U.rows()) * U.cols() * U.cols() * U.cols());
    return SymTensor3::generate_symmetric(U.cols(), [&](Index a, Index b, Index c) {
        return detail::rank_one_entry(Q, U, a, b, c);
    });
}

/// Slice k: the matrix (T_ijk)_{i,j}. Symmetric, not Hermitian.
inline Matrix slice(const SymTensor3& T, Index k) {
    if (k < 0 || k >= T.n()) throw ArgumentError("slice index out of range");
    Matrix S(T.n(), T.n());
    for (Index i = 0; i < T.n(); ++i)
        for (Index j = 0; j < T.n(); ++j) S(i, j) = T(i, j, k);
    return S;
}

/// Σ_i a_i T_i in one pass over the tensor data.
inline Matrix slice_combination(const SymTensor3& T, const Vector& a) {
    const Index n = T.n();
    if (a.size() != n) throw ArgumentError("slice_combination: coefficient vector has wrong length");
    ops::add(static_cast<std::uint64_t>(n) * n * n);
    Vector combined = T.flat().transpose() * a;
    return Eigen::Map<const RowMatrix>(combined.data(), n, n);
}

inline Matrix slice_combination(const SymTensor3& T, const RealVector& a) {
    return slice_combination(T, Vector(a.cast<Complex>()));
}

inline double frobenius_norm(const SymTensor3& T) {
    double s = 0.0;
    for (const auto& z : T.data()) s += std::norm(z);
    return std::sqrt(s);
}

/// ||A − B||_F for tensors of equal side.
inline double frobenius_distance(const SymTensor3& A, const SymTensor3& B) {
    if (A.n() != B.n()) throw ArgumentError("frobenius_distance: side lengths differ");
    double s = 0.0;
    const auto a = A.data(), b = B.data();
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

/// ||T − Σ_m u_m⊗³||_F without materializing the reconstruction.
inline double residual(const SymTensor3& T, const Matrix& U) {
    if (U.cols() != T.n()) throw ArgumentError("residual: vector length does not match tensor side");
    const Index n = T.n();
    const Matrix Q = detail::pair_products(U);
    double s = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                Index a = i, b = j, c = k;
                if (a > b) std::swap(a, b);
                if (b > c) std::swap(b, c);
                if (a > b) std::swap(a, b);
                s += std::norm(T(i, j, k) - detail::rank_one_entry(Q, U, a, b, c));
            }
    return std::sqrt(s);
}

/// Random symmetric tensor with ||E||_F = delta.
inline SymTensor3 symmetric_noise(Index n, double delta, Rng& rng) {
    if (!(delta >= 0.0)) throw ArgumentError("noise magnitude must be nonnegative");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> packed(packed_size(n));
    for (auto& z : packed) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = Complex(re, im);
    }
    // Each packed entry appears once per distinct permutation of its triple.
    double g2 = 0.0;
    for (Index c = 0; c < n; ++c)
        for (Index b = 0; b <= c; ++b)
            for (Index a = 0; a <= b; ++a) {
                const double mult = (a == b && b == c) ? 1.0 : (a == b || b == c) ? 3.0 : 6.0;
                g2 += mult * std::norm(packed[packed_index(a, b, c)]);
            }
    const double scale = delta / std::sqrt(g2);
    return SymTensor3::generate_symmetric(n, [&](Index a, Index b, Index c) {
        return packed[packed_index(a, b, c)] * scale;
    });
}

/// T + E with E a random symmetric direction of Frobenius norm exactly delta.
inline SymTensor3 add_noise(const SymTensor3& T, double delta, Rng& rng) {
    if (!(delta >= 0.0)) throw ArgumentError("noise magnitude must be nonnegative");
    if (delta == 0.0) return T;
    const SymTensor3 E = symmetric_noise(T.n(), delta, rng);
    return SymTensor3::generate_symmetric(T.n(), [&](Index a, Index b, Index c) { return T(a, b, c) + E(a, b, c); });
}

}  // namespace tensordiag

#endif  // TENSORDIAG_SYM_TENSOR_HPP
