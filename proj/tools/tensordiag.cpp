// tensordiag: generate, decompose, verify, benchmark and smoothed-analysis sweeps.
//
// Exit codes: 0 ok, 1 verification failed, 2 bad arguments or I/O,
// 3 generator gave up, 4 algorithm failed after its redraws.

#include "tensordiag/tensordiag.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace tensordiag;

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kGenerator = 3, kAlgorithm = 4 };

unsigned thread_cap() {
    const char* env = std::getenv("TENSORDIAG_THREADS");
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (!env || !*env) return 1;
    try {
        const long v = std::stol(env);
        if (v < 0) throw ArgumentError("TENSORDIAG_THREADS must be >= 0");
        return v == 0 ? hw : static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
        throw ArgumentError("TENSORDIAG_THREADS must be an integer");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct GenArgs {
    Index n = 0, r = 0;
    double kappa_max = 50.0;
    std::uint64_t seed = 0;
    std::string out, truth;
};

int cmd_gen(const GenArgs& a) {
    if (a.r > a.n) throw ArgumentError("r must be ≤ n");
    const GeneratedInstance inst = gen_rdiag(a.n, a.r, a.kappa_max, a.seed);
    io::save_st3(a.out, inst.tensor);
    if (!a.truth.empty()) io::save_truth(a.truth, inst.U, inst.cond.kappa);
    std::cout << "wrote " << a.out << " (n=" << a.n << ", r=" << a.r << ", kappa_F=" << inst.cond.kappa
              << ", draws=" << inst.draws << ")\n";
    return kOk;
}

struct DecomposeArgs {
    std::string in, out, truth, algo = "linear", profile = "practical";
    Index r = 0;
    double B = 1e3, eps = 1e-3, delta = 0.0;
    std::uint64_t seed = 0;
};

int cmd_decompose(const DecomposeArgs& a) {
    SymTensor3 T = io::load_tensor(a.in);
    DecomposeOptions o;
    o.algorithm = parse_algorithm(a.algo);
    o.profile = parse_profile(a.profile);
    o.r = a.r > 0 ? a.r : T.n();
    o.B = a.B;
    o.eps = a.eps;
    o.delta = a.delta;
    if (a.delta < 0.0) throw ArgumentError("delta must be nonnegative");
    if (a.delta > 0.0) {
        Rng rng = make_rng(a.seed, Stream::noise);
        T = add_noise(T, a.delta, rng);
    }
    Matrix truth;
    if (!a.truth.empty()) {
        truth = io::load_truth(a.truth);
        if (truth.cols() != T.n() || truth.rows() != o.r) throw ArgumentError("truth shape does not match n and r");
    }
    const Decomposition d = decompose(T, o, a.seed);
    std::optional<double> fe;
    if (truth.size() > 0) fe = forward_error(truth, d.vectors);
    io::save_decomposition(a.out, io::to_file(d, fe));
    const double norm = frobenius_norm(T);
    std::cout << "algorithm=" << to_string(d.algorithm) << " n=" << d.n << " r=" << d.r << " attempts=" << d.attempts
              << " residual=" << d.residual << " relative_residual=" << (norm > 0 ? d.residual / norm : d.residual);
    if (fe) std::cout << " forward_error=" << *fe;
    std::cout << "\n";
    return kOk;
}

struct VerifyArgs {
    std::string in, dec, truth;
    double tol = 1e-6;
};

int cmd_verify(const VerifyArgs& a) {
    const SymTensor3 T = io::load_tensor(a.in);
    const io::DecompositionFile d = io::load_decomposition(a.dec);
    if (d.n != T.n()) throw ArgumentError("decomposition has n=" + std::to_string(d.n) + " but tensor has n=" + std::to_string(T.n()));
    const double res = residual(T, d.vectors);
    const double norm = frobenius_norm(T);
    const double rel = norm > 0 ? res / norm : res;
    std::cout << "residual=" << res << " relative_residual=" << rel;
    if (!a.truth.empty()) {
        const Matrix U = io::load_truth(a.truth);
        if (U.rows() != d.vectors.rows() || U.cols() != d.vectors.cols())
            throw ArgumentError("truth and decomposition shapes differ");
        std::cout << " forward_error=" << forward_error(U, d.vectors);
    }
    const bool ok = rel <= a.tol;
    std::cout << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? kOk : kVerifyFailed;
}

struct BenchArgs {
    std::string n_list, algos = "linear", csv;
    Index r = 8;
    int trials = 1;
    std::uint64_t seed = 0;
    double kappa_max = 100.0, B = 1e3, eps = 1e-3;
};

int cmd_bench(const BenchArgs& a) {
    BenchSpec spec;
    for (const auto& s : split_list(a.n_list)) {
        try {
            spec.n_list.push_back(static_cast<Index>(std::stol(s)));
        } catch (const std::logic_error&) {
            throw ArgumentError("bad entry in --n-list: " + s);
        }
    }
    if (spec.n_list.empty()) throw ArgumentError("--n-list must be nonempty");
    spec.algorithms.clear();
    for (const auto& s : split_list(a.algos)) spec.algorithms.push_back(parse_algorithm(s));
    if (spec.algorithms.empty()) throw ArgumentError("--algos must be nonempty");
    spec.r = a.r;
    spec.trials = a.trials;
    spec.seed = a.seed;
    spec.kappa_max = a.kappa_max;
    spec.B = a.B;
    spec.eps = a.eps;

    std::ofstream file;
    if (!a.csv.empty()) {
        file.open(a.csv, std::ios::binary);
        if (!file) throw io::IoError("cannot write " + a.csv);
    }
    std::ostream& csv = a.csv.empty() ? std::cout : file;
    std::ostream& report = a.csv.empty() ? std::cerr : std::cout;
    csv << io::kBenchCsvHeader;
    const auto rows = run_bench(spec, [&](const io::BenchRow& row) { csv << io::bench_csv_row(row) << std::flush; });
    if (spec.n_list.size() >= 2)
        for (const Algorithm algo : spec.algorithms) {
            const std::string name(to_string(algo));
            report << "slope " << name << " " << op_count_slope(rows, name) << "\n";
        }
    return kOk;
}

struct SmoothArgs {
    Index n = 0, r = 0;
    double sigma = 1.0;
    int trials = 100;
    std::string center = "zero", center_file, csv;
    std::uint64_t seed = 0;
};

int cmd_smooth(const SmoothArgs& a) {
    if (!(a.sigma > 0.0)) throw ArgumentError("sigma must be positive");
    const Index r = a.r > 0 ? a.r : a.n;
    SmoothedTrialSpec spec;
    if (a.center == "zero") {
        spec = SmoothedTrialSpec::zero_center(a.n, r, a.sigma, a.trials, a.seed);
    } else if (a.center == "file") {
        if (a.center_file.empty()) throw ArgumentError("--center file needs --center-file");
        spec.center = io::load_center(a.center_file);
        if (spec.center.cols() != a.n || spec.center.rows() != r)
            throw ArgumentError("center matrix must be r×n");
        spec.sigma = a.sigma;
        spec.trials = a.trials;
        spec.seed = a.seed;
    } else {
        throw ArgumentError("--center must be zero or file");
    }
    const SmoothedResult res = smoothed_experiment(spec, thread_cap());

    std::ofstream file;
    if (!a.csv.empty()) {
        file.open(a.csv, std::ios::binary);
        if (!file) throw io::IoError("cannot write " + a.csv);
    }
    std::ostream& csv = a.csv.empty() ? std::cout : file;
    io::write_trial_csv(csv, res.records);
    const auto& s = res.summary;
    std::ostream& report = a.csv.empty() ? std::cerr : std::cout;
    report << "summary n=" << s.n << " r=" << s.r << " sigma=" << io::format_double(s.sigma) << " trials=" << s.trials
           << " exceedance_rate=" << io::format_double(s.exceedance_rate)
           << " paper_failure_bound=" << io::format_double(s.paper_failure_bound)
           << " kappa_min=" << s.kappa_min << " kappa_median=" << s.kappa_median << " kappa_q90=" << s.kappa_q90
           << " kappa_max=" << s.kappa_max << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decomposition of order-3 symmetric tensors"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a random r-diagonalisable tensor");
    g->add_option("--n", gen.n, "Side length")->required()->check(CLI::PositiveNumber);
    g->add_option("--r", gen.r, "Number of rank-one terms")->required()->check(CLI::PositiveNumber);
    g->add_option("--kappa-max", gen.kappa_max, "Reject factor matrices with larger kappa_F");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--out", gen.out, ".st3 output path")->required();
    g->add_option("--truth,--truth-out", gen.truth, "Ground-truth JSON output path");

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "Decompose a tensor");
    d->add_option("--in", dec.in, "Input tensor (.st3 or .json)")->required();
    d->add_option("--r", dec.r, "Rank (default n)");
    d->add_option("--B", dec.B, "Condition number bound");
    d->add_option("--eps", dec.eps, "Target forward accuracy");
    d->add_option("--algo", dec.algo, "exact, robust, linear, expanded or naive-cob");
    d->add_option("--delta", dec.delta, "Inject symmetric noise of this Frobenius norm first");
    d->add_option("--seed", dec.seed, "Random seed");
    d->add_option("--profile", dec.profile, "Constants profile: practical or paper");
    d->add_option("--out", dec.out, "Decomposition JSON output path")->required();
    d->add_option("--truth", dec.truth, "Ground truth for reporting forward error");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check a decomposition against its tensor");
    v->add_option("--in", ver.in, "Tensor")->required();
    v->add_option("--dec", ver.dec, "Decomposition JSON")->required();
    v->add_option("--truth", ver.truth, "Ground-truth JSON");
    v->add_option("--tol", ver.tol, "Relative residual tolerance");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Operation-count scaling sweep");
    b->add_option("--n-list", bench.n_list, "Comma-separated side lengths")->required();
    b->add_option("--r", bench.r, "Rank");
    b->add_option("--trials", bench.trials, "Instances per n");
    b->add_option("--algos", bench.algos, "Comma-separated algorithms");
    b->add_option("--seed", bench.seed, "Random seed");
    b->add_option("--csv", bench.csv, "CSV output path (default stdout)");
    b->add_option("--kappa-max", bench.kappa_max, "Generator acceptance threshold");
    b->add_option("--B", bench.B, "Condition number bound");
    b->add_option("--eps", bench.eps, "Target forward accuracy");

    SmoothArgs smooth;
    auto* s = app.add_subcommand("smooth", "Monte Carlo check of the smoothed condition bound");
    s->add_option("--n", smooth.n, "Columns")->required()->check(CLI::PositiveNumber);
    s->add_option("--r", smooth.r, "Rows (default n)");
    s->add_option("--sigma", smooth.sigma, "Perturbation standard deviation");
    s->add_option("--trials", smooth.trials, "Number of draws");
    s->add_option("--center", smooth.center, "zero or file");
    s->add_option("--center-file", smooth.center_file, "JSON {\"center\": [[...]]} when --center file");
    s->add_option("--seed", smooth.seed, "Random seed");
    s->add_option("--csv", smooth.csv, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*d) return cmd_decompose(dec);
        if (*v) return cmd_verify(ver);
        if (*b) return cmd_bench(bench);
        if (*s) return cmd_smooth(smooth);
    } catch (const GeneratorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGenerator;
    } catch (const AlgorithmFailure& e) {
        std::cerr << "error: stage '" << e.stage() << "' gave up after " << e.attempts() << " draw(s): " << e.what() << "\n";
        return kAlgorithm;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAlgorithm;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kUsage;
    }
    return kUsage;
}
