#ifndef TENSORDIAG_COMMON_HPP
#define TENSORDIAG_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tensordiag {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad shapes, out-of-range indices, invalid parameters.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input that the operation is not defined for (zero matrix, malformed file).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Matrix whose smallest LU pivot falls below the singularity threshold.
class SingularMatrixError : public DegenerateInputError {
public:
    using DegenerateInputError::DegenerateInputError;
};

/// Eigenvalue gap below gap_tol; callers redraw their random combination.
class IllConditionedSpectrumError : public Error {
public:
    using Error::Error;
};

/// r-th eigenvalue of a range-finder input below the deflation floor.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

/// Instance generator ran out of its rejection budget.
class GeneratorError : public Error {
public:
    using Error::Error;
};

/// A randomized stage failed on every redraw.
class AlgorithmFailure : public Error {
public:
    AlgorithmFailure(std::string stage, int attempts, const std::string& detail)
        : Error(stage + " failed after " + std::to_string(attempts) + " draw(s): " + detail),
          stage_(std::move(stage)),
          attempts_(attempts) {}

    const std::string& stage() const noexcept { return stage_; }
    int attempts() const noexcept { return attempts_; }

private:
    std::string stage_;
    int attempts_;
};

/// Which pipeline produced a decomposition.
enum class Algorithm { exact, robust, linear, expanded, naive_cob };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::exact: return "exact";
        case Algorithm::robust: return "robust";
        case Algorithm::linear: return "linear";
        case Algorithm::expanded: return "expanded";
        case Algorithm::naive_cob: return "naive-cob";
    }
    return "unknown";
}

inline Algorithm parse_algorithm(std::string_view s) {
    if (s == "exact") return Algorithm::exact;
    if (s == "robust") return Algorithm::robust;
    if (s == "linear") return Algorithm::linear;
    if (s == "expanded") return Algorithm::expanded;
    if (s == "naive-cob" || s == "naive_cob") return Algorithm::naive_cob;
    throw ArgumentError("unknown algorithm '" + std::string(s) + "'");
}

/// Literal constant formulas ("paper") or usable double-precision values ("practical").
enum class ConstantsProfile { paper, practical };

inline std::string_view to_string(ConstantsProfile p) {
    return p == ConstantsProfile::paper ? "paper" : "practical";
}

inline ConstantsProfile parse_profile(std::string_view s) {
    if (s == "paper") return ConstantsProfile::paper;
    if (s == "practical") return ConstantsProfile::practical;
    throw ArgumentError("unknown constants profile '" + std::string(s) + "'");
}

/// Retry budget shared by every randomized stage.
inline constexpr int kMaxRetries = 8;

/// Relative threshold for numerical rank detection.
inline constexpr double kRankTol = 1e-9;

}  // namespace tensordiag

#endif  // TENSORDIAG_COMMON_HPP
