#ifndef TENSORDIAG_BENCH_HPP
#define TENSORDIAG_BENCH_HPP

// Algorithm dispatch by tag, and the operation-count sweep behind `bench`.

#include "tensordiag/common.hpp"
#include "tensordiag/complete.hpp"
#include "tensordiag/conditioning.hpp"
#include "tensordiag/forward_error.hpp"
#include "tensordiag/io.hpp"
#include "tensordiag/op_count.hpp"
#include "tensordiag/undercomplete.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace tensordiag {

struct DecomposeOptions {
    Algorithm algorithm = Algorithm::linear;
    Index r = 0;
    double B = 1e3;
    double eps = 1e-3;
    ConstantsProfile profile = ConstantsProfile::practical;
    double delta = 0.0;  // declared noise level of the input
    int max_attempts = kMaxRetries;
};

/// exact: complete pipeline when r = n, undercomplete otherwise.
/// robust: complete robust pipeline when r = n, explicit-basis pipeline otherwise.
/// naive-cob, expanded, linear: the undercomplete variants for any r ≤ n.
inline Decomposition decompose(const SymTensor3& T, const DecomposeOptions& o, std::uint64_t seed) {
    const Index n = T.n();
    if (o.r < 1 || o.r > n) throw ArgumentError("r must satisfy 1 <= r <= n");
    const UndercompleteParams up{o.B, o.eps, o.r, 1.0, 1.0, o.profile, o.delta};
    switch (o.algorithm) {
        case Algorithm::exact:
            return o.r == n ? decompose_complete_exact(T, seed, o.max_attempts)
                            : decompose_undercomplete_exact(T, o.r, seed, o.max_attempts);
        case Algorithm::robust: {
            if (o.r == n) return decompose_complete_robust(T, RobustParams::make(n, o.B, o.eps, o.profile), seed, o.max_attempts);
            Decomposition d = decompose_undercomplete_robust(T, up, seed, o.max_attempts);
            d.algorithm = Algorithm::robust;
            return d;
        }
        case Algorithm::naive_cob: return decompose_undercomplete_robust(T, up, seed, o.max_attempts);
        case Algorithm::expanded: return decompose_undercomplete_expanded(T, up, seed, o.max_attempts);
        case Algorithm::linear: return decompose_undercomplete_linear(T, up, seed, o.max_attempts);
    }
    throw ArgumentError("unknown algorithm");
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ArgumentError("slope fit needs distinct x values");
    return sxy / sxx;
}

struct BenchSpec {
    std::vector<Index> n_list;
    Index r = 8;
    int trials = 1;
    std::vector<Algorithm> algorithms{Algorithm::linear};
    std::uint64_t seed = 0;
    double kappa_max = 100.0;
    double B = 1e3;
    double eps = 1e-3;
};

/// One instance per (n, trial), shared by every algorithm. Only the
/// decomposition itself is inside the counted scope. `on_row` sees each row
/// as it is produced.
inline std::vector<io::BenchRow> run_bench(const BenchSpec& spec,
                                           const std::function<void(const io::BenchRow&)>& on_row = {}) {
    if (spec.n_list.empty()) throw ArgumentError("n-list must be nonempty");
    if (spec.trials < 1) throw ArgumentError("trials must be positive");
    std::vector<io::BenchRow> rows;
    std::uint64_t index = 0;
    for (const Index n : spec.n_list) {
        if (spec.r > n) throw ArgumentError("r must be <= n for every n in the list");
        for (int t = 0; t < spec.trials; ++t, ++index) {
            const std::uint64_t trial_seed = derive_seed(spec.seed, Stream::trial, index);
            GeneratedInstance inst = gen_rdiag(n, spec.r, spec.kappa_max, trial_seed);
            for (const Algorithm algo : spec.algorithms) {
                DecomposeOptions o;
                o.algorithm = algo;
                o.r = spec.r;
                o.B = spec.B;
                o.eps = spec.eps;
                const auto start = std::chrono::steady_clock::now();
                const ops::Scope scope;
                const Decomposition d = decompose(inst.tensor, o, trial_seed);
                const std::uint64_t count = scope.count();
                const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                io::BenchRow row{n, spec.r, std::string(to_string(algo)), wall, count, d.residual,
                                 forward_error(inst.U, d.vectors), trial_seed};
                if (on_row) on_row(row);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

/// Slope of mean op count against n for one algorithm's rows.
inline double op_count_slope(const std::vector<io::BenchRow>& rows, const std::string& algorithm) {
    std::vector<double> ns, counts;
    for (const auto& row : rows) {
        if (row.algorithm != algorithm) continue;
        const auto n = static_cast<double>(row.n);
        auto it = std::find(ns.begin(), ns.end(), n);
        if (it == ns.end()) {
            ns.push_back(n);
            counts.push_back(0.0);
            it = ns.end() - 1;
        }
        counts[static_cast<std::size_t>(it - ns.begin())] += static_cast<double>(row.scalar_op_count);
    }
    return loglog_slope(ns, counts);
}

}  // namespace tensordiag

#endif  // TENSORDIAG_BENCH_HPP
