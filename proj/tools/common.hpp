#pragma once

// Shared plumbing for the CLI front end and the acceptance driver: CSV and
// manifest output, dense Green-matrix arithmetic, and the linear-stage
// verification sweep.

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsk/config.hpp"
#include "nsk/linear.hpp"

namespace nsk::tools {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// CSV writer, RFC 4180 framing: CRLF rows, mandatory header.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\r\n";
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt17(values[i]);
        out_ << "\r\n";
    }
    void row_mixed(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\r\n";
    }

  private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // indexed [col][row]
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first) {
            table.header = cells;
            table.columns.assign(cells.size(), {});
            first = false;
            continue;
        }
        if (cells.size() != table.header.size())
            throw std::runtime_error("ragged CSV row in " + path);
        for (std::size_t i = 0; i < cells.size(); ++i)
            table.columns[i].push_back(std::stod(cells[i]));
    }
    if (first) throw std::runtime_error("CSV has no header row: " + path);
    return table;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

// Manifest goes out before any long computation; the timestamp lives only
// here so reruns stay byte-identical elsewhere.
inline void write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                           const nsk::config::ExperimentConfig& cfg) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json echo = nsk::config::to_json(cfg);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(echo.dump())));
    nlohmann::json m = {{"subcommand", subcommand},
                        {"timestamp", timestamp_now()},
                        {"content_hash", hash},
                        {"config", echo}};
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

// --- dense Green-matrix arithmetic ---------------------------------------

using DenseMat = std::array<std::array<cplx, 4>, 4>;

inline DenseMat to_dense(const linear::GreenMatrix& g, int dim) {
    DenseMat m{};
    m[0][0] = g.g11;
    for (int k = 0; k < dim; ++k) {
        m[0][1 + k] = g.g12[k];
        m[1 + k][0] = g.g21[k];
        for (int l = 0; l < dim; ++l) m[1 + k][1 + l] = g.g22[k][l];
    }
    return m;
}

// generator of the linearized system: dU/dt = A(xi) U
inline DenseMat generator(std::array<double, 3> xi, int dim,
                          const linear::LinearParams& p) {
    DenseMat a{};
    double xi_sq = 0.0;
    for (int k = 0; k < dim; ++k) xi_sq += xi[k] * xi[k];
    for (int k = 0; k < dim; ++k) {
        a[0][1 + k] = cplx{0.0, -xi[k]};
        a[1 + k][0] = cplx{0.0, -p.kappa * xi[k] * xi_sq};
        for (int l = 0; l < dim; ++l) {
            a[1 + k][1 + l] = -(p.lambda_visc + p.mu) * xi[k] * xi[l];
            if (k == l) a[1 + k][1 + l] -= p.mu * xi_sq;
        }
    }
    return a;
}

inline DenseMat dense_mul(const DenseMat& x, const DenseMat& y, int size) {
    DenseMat r{};
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < size; ++k) s += x[i][k] * y[k][j];
            r[i][j] = s;
        }
    return r;
}

inline double dense_max_diff(const DenseMat& x, const DenseMat& y, int size) {
    double m = 0.0;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) m = std::max(m, std::abs(x[i][j] - y[i][j]));
    return m;
}

// --- linear verification sweep -------------------------------------------

struct LinearChecks {
    double identity_err = 0.0;   // G(0) vs Id
    double semigroup_err = 0.0;  // G(t1+t2) vs G(t1) G(t2)
    double ode_residual = 0.0;   // central difference vs A G
};

inline LinearChecks run_linear_checks(const linear::LinearParams& params, int dim,
                                      std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LinearChecks out;
    const double h = 1e-4;
    for (int s = 0; s < samples; ++s) {
        // |xi| log-uniform in [0.05, 1]: keeps the finite-difference bias of
        // the ODE residual well below its tolerance
        double r = 0.05 * std::pow(20.0, unit(rng));
        std::array<double, 3> dir{0.0, 0.0, 0.0};
        double norm = 0.0;
        for (int k = 0; k < dim; ++k) {
            dir[k] = 2.0 * unit(rng) - 1.0;
            norm += dir[k] * dir[k];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            dir[0] = 1.0;
            norm = 1.0;
        }
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        for (int k = 0; k < dim; ++k) xi[k] = dir[k] / norm * r;

        double t1 = 0.1 + 2.0 * unit(rng);
        double t2 = 0.1 + 2.0 * unit(rng);
        int size = dim + 1;

        DenseMat g0 = to_dense(linear::green_matrix(0.0, xi, dim, params), dim);
        DenseMat id{};
        for (int i = 0; i < size; ++i) id[i][i] = cplx{1.0, 0.0};
        out.identity_err = std::max(out.identity_err, dense_max_diff(g0, id, size));

        DenseMat ga = to_dense(linear::green_matrix(t1, xi, dim, params), dim);
        DenseMat gb = to_dense(linear::green_matrix(t2, xi, dim, params), dim);
        DenseMat gab = to_dense(linear::green_matrix(t1 + t2, xi, dim, params), dim);
        out.semigroup_err =
            std::max(out.semigroup_err, dense_max_diff(gab, dense_mul(ga, gb, size), size));

        DenseMat gp = to_dense(linear::green_matrix(t1 + h, xi, dim, params), dim);
        DenseMat gm = to_dense(linear::green_matrix(t1 - h, xi, dim, params), dim);
        DenseMat rhs = dense_mul(generator(xi, dim, params), ga, size);
        double res = 0.0;
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) {
                cplx diff = (gp[i][j] - gm[i][j]) / (2.0 * h) - rhs[i][j];
                res = std::max(res, std::abs(diff));
            }
        out.ode_residual = std::max(out.ode_residual, res);
    }
    return out;
}

// standard sample set for the pointwise-bound fit
inline linear::PointwiseFit fit_pointwise(const linear::LinearParams& params, int dim) {
    std::vector<double> times, xis;
    for (double t = 0.01; t <= 100.0 + 1e-9; t *= std::sqrt(10.0)) times.push_back(t);
    for (double x = 0.02; x <= 10.0 + 1e-9; x *= 1.5) xis.push_back(x);
    return linear::pointwise_bound_fit(params, times, xis, dim);
}

}  // namespace nsk::tools
