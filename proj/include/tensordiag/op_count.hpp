#ifndef TENSORDIAG_OP_COUNT_HPP
#define TENSORDIAG_OP_COUNT_HPP

#include <cstdint>

// Scalar-operation accounting. Kernels written in this library add the exact
// number of complex multiply-adds their loops perform; calls into dense Eigen
// factorizations add the nominal LAPACK-style count for their shape. Counts are
// per thread, so trials that run on separate threads do not interfere.

namespace tensordiag::ops {

namespace detail {
inline thread_local std::uint64_t counter = 0;
}

inline void add(std::uint64_t n) noexcept { detail::counter += n; }

inline std::uint64_t total() noexcept { return detail::counter; }

/// m×k times k×n product.
inline void gemm(std::uint64_t m, std::uint64_t k, std::uint64_t n) noexcept { add(m * k * n); }

/// Nominal cost of a dense SVD or eigendecomposition of an m×n matrix.
inline void factorization(std::uint64_t m, std::uint64_t n) noexcept {
    const std::uint64_t k = m < n ? m : n;
    add(10 * m * n * k);
}

/// Nominal cost of an LU-based inverse or solve of an n×n system.
inline void lu(std::uint64_t n) noexcept { add(n * n * n); }

/// Counts operations performed between construction and `count()`.
class Scope {
public:
    Scope() noexcept : start_(total()) {}
    std::uint64_t count() const noexcept { return total() - start_; }

private:
    std::uint64_t start_;
};

}  // namespace tensordiag::ops

#endif  // TENSORDIAG_OP_COUNT_HPP
