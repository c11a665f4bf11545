#ifndef TENSORDIAG_IO_HPP
#define TENSORDIAG_IO_HPP

// File formats: binary .st3 tensors, JSON tensors (small n), decomposition and
// ground-truth JSON, and CSV rows.
//
// .st3 layout: "ST3\0", u32 LE side length n, then n³ (re, im) pairs of f64 LE
// in (i,j,k) row-major order.

#include "tensordiag/common.hpp"
#include "tensordiag/complete.hpp"
#include "tensordiag/conditioning.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tensordiag::io {

using Json = nlohmann::json;

/// Unreadable, unwritable or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

inline constexpr char kSt3Magic[4] = {'S', 'T', '3', '\0'};
inline constexpr Index kJsonTensorMax = 16;

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

inline void put_f64(unsigned char* out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(bits >> (8 * i));
}

inline double get_f64(const unsigned char* b) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = bits << 8 | b[i];
    return std::bit_cast<double>(bits);
}

inline Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number())
        throw IoError("expected a {re, im} object");
    return {j["re"].get<double>(), j["im"].get<double>()};
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

inline void write_st3(std::ostream& os, const SymTensor3& T) {
    os.write(kSt3Magic, 4);
    detail::put_u32(os, static_cast<std::uint32_t>(T.n()));
    std::vector<unsigned char> buf(16 * 4096);
    const auto data = T.data();
    std::size_t filled = 0;
    for (const auto& z : data) {
        detail::put_f64(&buf[filled], z.real());
        detail::put_f64(&buf[filled + 8], z.imag());
        filled += 16;
        if (filled == buf.size()) {
            os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(filled));
            filled = 0;
        }
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(filled));
}

inline SymTensor3 read_st3(std::istream& is, double sym_tol = kSymTol) {
    unsigned char head[8];
    if (!is.read(reinterpret_cast<char*>(head), 8)) throw IoError("truncated .st3 header");
    if (std::memcmp(head, kSt3Magic, 4) != 0) throw IoError("bad .st3 magic");
    const std::uint32_t n = detail::get_u32(head + 4);
    if (n == 0) throw IoError(".st3 side length is zero");
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    std::vector<Complex> data(count);
    std::vector<unsigned char> buf(16 * 4096);
    std::size_t done = 0;
    while (done < count) {
        const std::size_t chunk = std::min<std::size_t>(4096, count - done);
        if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(16 * chunk)))
            throw IoError("truncated .st3 payload");
        for (std::size_t i = 0; i < chunk; ++i)
            data[done + i] = Complex(detail::get_f64(&buf[16 * i]), detail::get_f64(&buf[16 * i + 8]));
        done += chunk;
    }
    if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes after .st3 payload");
    return SymTensor3::from_data(static_cast<Index>(n), std::move(data), sym_tol);
}

inline void save_st3(const std::string& path, const SymTensor3& T) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    write_st3(out, T);
    if (!out) throw IoError("write failed: " + path);
}

inline SymTensor3 load_st3(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_st3(in);
}

/// Nested n×n×n array of {re, im}; only for n ≤ 16.
inline Json tensor_to_json(const SymTensor3& T) {
    if (T.n() > kJsonTensorMax) throw ArgumentError("JSON tensors are limited to n <= 16");
    Json out = Json::array();
    for (Index i = 0; i < T.n(); ++i) {
        Json plane = Json::array();
        for (Index j = 0; j < T.n(); ++j) {
            Json row = Json::array();
            for (Index k = 0; k < T.n(); ++k) row.push_back(detail::complex_json(T(i, j, k)));
            plane.push_back(std::move(row));
        }
        out.push_back(std::move(plane));
    }
    return out;
}

inline SymTensor3 tensor_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw IoError("tensor JSON must be a nonempty array");
    const auto n = static_cast<Index>(j.size());
    if (n > kJsonTensorMax) throw IoError("JSON tensors are limited to n <= 16");
    std::vector<Complex> data;
    data.reserve(static_cast<std::size_t>(n * n * n));
    for (const auto& plane : j) {
        if (!plane.is_array() || static_cast<Index>(plane.size()) != n) throw IoError("ragged tensor JSON");
        for (const auto& row : plane) {
            if (!row.is_array() || static_cast<Index>(row.size()) != n) throw IoError("ragged tensor JSON");
            for (const auto& z : row) data.push_back(detail::complex_from_json(z));
        }
    }
    return SymTensor3::from_data(n, std::move(data));
}

/// Loads .st3, or JSON when the path ends in ".json".
inline SymTensor3 load_tensor(const std::string& path) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return tensor_from_json(detail::read_json_file(path));
    return load_st3(path);
}

inline Json matrix_rows_json(const Matrix& U) {
    Json rows = Json::array();
    for (Index i = 0; i < U.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < U.cols(); ++j) row.push_back(detail::complex_json(U(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_rows_from_json(const Json& rows, Index r, Index n) {
    if (!rows.is_array() || static_cast<Index>(rows.size()) != r) throw IoError("expected " + std::to_string(r) + " vectors");
    Matrix U(r, n);
    for (Index i = 0; i < r; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw IoError("vector " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
        for (Index j = 0; j < n; ++j) U(i, j) = detail::complex_from_json(row[static_cast<std::size_t>(j)]);
    }
    return U;
}

struct DecompositionFile {
    Index n = 0;
    Index r = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    double residual = 0.0;
    std::optional<double> forward_error;
    Matrix vectors;
};

inline DecompositionFile to_file(const Decomposition& d, std::optional<double> forward_error = std::nullopt) {
    return {d.n, d.r, std::string(to_string(d.algorithm)), d.seed, d.residual, forward_error, d.vectors};
}

inline Json to_json(const DecompositionFile& f) {
    Json j;
    j["n"] = f.n;
    j["r"] = f.r;
    j["algorithm"] = f.algorithm;
    j["seed"] = f.seed;
    j["residual"] = f.residual;
    if (f.forward_error) j["forward_error"] = *f.forward_error;
    j["vectors"] = matrix_rows_json(f.vectors);
    return j;
}

inline DecompositionFile decomposition_from_json(const Json& j) {
    try {
        DecompositionFile f;
        f.n = j.at("n").get<Index>();
        f.r = j.at("r").get<Index>();
        if (f.n < 1 || f.r < 1 || f.r > f.n) throw IoError("decomposition has invalid n/r");
        f.algorithm = j.at("algorithm").get<std::string>();
        f.seed = j.at("seed").get<std::uint64_t>();
        f.residual = j.at("residual").get<double>();
        if (j.contains("forward_error") && !j["forward_error"].is_null())
            f.forward_error = j["forward_error"].get<double>();
        f.vectors = matrix_rows_from_json(j.at("vectors"), f.r, f.n);
        return f;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed decomposition JSON: ") + e.what());
    }
}

inline void save_decomposition(const std::string& path, const DecompositionFile& f) {
    detail::write_text_file(path, to_json(f).dump(2) + "\n");
}

inline DecompositionFile load_decomposition(const std::string& path) {
    return decomposition_from_json(detail::read_json_file(path));
}

/// Ground-truth factors {n, r, kappa_F, U}.
inline void save_truth(const std::string& path, const Matrix& U, double kappa) {
    Json j;
    j["n"] = U.cols();
    j["r"] = U.rows();
    j["kappa_F"] = kappa;
    j["U"] = matrix_rows_json(U);
    detail::write_text_file(path, j.dump(2) + "\n");
}

inline Matrix load_truth(const std::string& path) {
    const Json j = detail::read_json_file(path);
    try {
        const auto n = j.at("n").get<Index>();
        const auto r = j.at("r").get<Index>();
        if (n < 1 || r < 1 || r > n) throw IoError("truth has invalid n/r");
        return matrix_rows_from_json(j.at("U"), r, n);
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed truth JSON: ") + e.what());
    }
}

/// Real center matrix for smoothed runs: {"center": [[...], ...]}.
inline RealMatrix load_center(const std::string& path) {
    const Json j = detail::read_json_file(path);
    try {
        const Json& rows = j.at("center");
        if (!rows.is_array() || rows.empty()) throw IoError("center must be a nonempty array of rows");
        const auto r = static_cast<Index>(rows.size());
        const auto n = static_cast<Index>(rows[0].size());
        RealMatrix C(r, n);
        for (Index i = 0; i < r; ++i) {
            const Json& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Index>(row.size()) != n) throw IoError("ragged center matrix");
            for (Index k = 0; k < n; ++k) C(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
        return C;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed center JSON: ") + e.what());
    }
}

// ---- CSV ----

/// RFC-4180 field: quoted when it contains a comma, quote, CR or LF.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_field(fields[i]);
    }
    line += '\n';
    return line;
}

inline constexpr const char* kTrialCsvHeader = "trial,n,r,sigma,kappa_F,bound,exceeded\n";

inline void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << kTrialCsvHeader;
    for (const auto& t : records)
        os << csv_row({std::to_string(t.trial), std::to_string(t.n), std::to_string(t.r), format_double(t.sigma),
                       format_double(t.kappa_F), format_double(t.bound), t.exceeded ? "true" : "false"});
}

struct BenchRow {
    Index n = 0;
    Index r = 0;
    std::string algorithm;
    double wall_seconds = 0.0;
    std::uint64_t scalar_op_count = 0;
    double residual = 0.0;
    double forward_error = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kBenchCsvHeader = "n,r,algorithm,wall_seconds,scalar_op_count,residual,forward_error,seed\n";

inline std::string bench_csv_row(const BenchRow& b) {
    return csv_row({std::to_string(b.n), std::to_string(b.r), b.algorithm, format_double(b.wall_seconds),
                    std::to_string(b.scalar_op_count), format_double(b.residual), format_double(b.forward_error),
                    std::to_string(b.seed)});
}

}  // namespace tensordiag::io

#endif  // TENSORDIAG_IO_HPP
