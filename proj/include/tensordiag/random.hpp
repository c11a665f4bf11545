#ifndef TENSORDIAG_RANDOM_HPP
#define TENSORDIAG_RANDOM_HPP

#include "tensordiag/common.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace tensordiag {

using Rng = std::mt19937_64;

/// Independent random streams carved out of one user seed.
enum class Stream : std::uint64_t {
    sub_recovery = 1,
    pencil = 2,
    complete = 3,
    noise = 4,
    generator = 5,
    trial = 6,
    deflate = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based derivation: the same (seed, stream, index) always yields the
/// same child seed, independent of how many draws other streams consumed.
inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ (index * 0xd6e8feb86659fd93ULL));
}

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    return Rng(derive_seed(seed, stream, index));
}

/// Entries with independent real and imaginary parts, E|z|² = variance.
inline Matrix complex_gaussian(Index rows, Index cols, Rng& rng, double variance = 1.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

inline RealMatrix real_gaussian(Index rows, Index cols, Rng& rng, double stddev = 1.0) {
    std::normal_distribution<double> normal(0.0, stddev);
    RealMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

}  // namespace tensordiag

#endif  // TENSORDIAG_RANDOM_HPP
