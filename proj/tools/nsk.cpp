// nsk: pseudo-spectral simulator and verification toolkit for the zero
// sound speed compressible Navier-Stokes-Korteweg system.

#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsk/asymptotics.hpp"
#include "nsk/besov.hpp"
#include "nsk/config.hpp"
#include "nsk/grid.hpp"
#include "nsk/linear.hpp"
#include "nsk/snapshot.hpp"
#include "nsk/solver.hpp"
#include "acceptance.hpp"
#include "common.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nsk::config::ConfigError;
using nsk::config::ExperimentConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitGuard = 2;
constexpr int kExitVerdict = 3;

std::string regime_name(nsk::linear::Regime r) {
    switch (r) {
        case nsk::linear::Regime::underdamped: return "underdamped";
        case nsk::linear::Regime::critical: return "critical";
        default: return "overdamped";
    }
}

std::string index_str(double v) {
    return v == nsk::besov::kInf ? std::string("inf") : nsk::tools::fmt17(v);
}

// resolves the Gevrey rate from the c0 policy; the fitted linear rate always
// serves as the cap
void resolve_gevrey(ExperimentConfig& cfg, nsk::solver::SolverConfig& sc) {
    nsk::linear::PointwiseFit fit = nsk::tools::fit_pointwise(cfg.params, cfg.d);
    sc.track_gevrey = true;
    sc.gevrey_c0_cap = fit.c0_fit;
    sc.gevrey_c0 = cfg.c0_fit ? cfg.gevrey_factor * fit.c0_fit : cfg.c0_value;
    try {
        sc.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("c0: ") + e.what());
    }
}

json moments_to_json(const nsk::solver::AsymptoticMoments& mom, int dim) {
    json m = json::array();
    for (int j = 0; j < dim; ++j) {
        json row = json::array();
        for (int k = 0; k < dim; ++k) row.push_back(mom.M[j][k]);
        m.push_back(row);
    }
    return json{{"alpha", mom.alpha},
                {"beta", mom.beta},
                {"pi_P", mom.pi_P},
                {"M", m},
                {"tail_slope", mom.tail_slope},
                {"tail_estimable", mom.tail_estimable},
                {"pressure_tail", mom.pressure_tail}};
}

nsk::solver::AsymptoticMoments moments_from_json(const json& j, int dim) {
    nsk::solver::AsymptoticMoments mom;
    mom.alpha = j.at("alpha").get<double>();
    mom.beta = j.at("beta").get<double>();
    mom.pi_P = j.at("pi_P").get<double>();
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) mom.M[a][b] = j.at("M")[a][b].get<double>();
    mom.tail_slope = j.value("tail_slope", 0.0);
    mom.tail_estimable = j.value("tail_estimable", false);
    mom.pressure_tail = j.value("pressure_tail", 0.0);
    return mom;
}

void write_trajectory_artifacts(const fs::path& out, const nsk::solver::Trajectory& traj,
                                int dim) {
    nsk::tools::CsvWriter diag(
        (out / "diagnostics.csv").string(),
        {"t", "mass", "boundary_fraction", "a_norm", "m_norm", "gevrey_norm",
         "gevrey_radius"});
    for (const auto& r : traj.rows)
        diag.row({r.t, r.mass, r.boundary_fraction, r.a_norm, r.m_norm, r.gevrey_norm,
                  r.gevrey_radius});

    std::vector<std::string> mh{"t", "pressure"};
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            mh.push_back("M" + std::to_string(j + 1) + std::to_string(k + 1));
    nsk::tools::CsvWriter momcsv((out / "moments.csv").string(), mh);
    for (std::size_t i = 0; i < traj.moments.times.size(); ++i) {
        std::vector<double> row{traj.moments.times[i], traj.moments.pressure[i]};
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) row.push_back(traj.moments.momentum[i][j][k]);
        momcsv.row(row);
    }

    nsk::tools::CsvWriter snaps((out / "snapshots.csv").string(), {"index", "t"});
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%04zu.nskfld", i);
        nsk::write_snapshot((out / name).string(), traj.snapshots[i]);
        snaps.row({static_cast<double>(i), traj.snapshot_times[i]});
    }
}

int cmd_linear_verify(ExperimentConfig& cfg, const fs::path& out) {
    nsk::tools::write_manifest(out, "linear-verify", cfg);
    nsk::tools::LinearChecks checks =
        nsk::tools::run_linear_checks(cfg.params, cfg.d, cfg.seed, 100);
    nsk::linear::PointwiseFit fit = nsk::tools::fit_pointwise(cfg.params, cfg.d);
    bool pass = fit.ok && fit.c0_fit > 0.0 && std::isfinite(fit.C_fit) &&
                checks.identity_err <= 1e-14 && checks.semigroup_err <= 1e-10 &&
                checks.ode_residual <= 1e-6;
    json report = {{"regime", regime_name(cfg.params.regime())},
                   {"c0_fit", fit.c0_fit},
                   {"C_fit", fit.C_fit},
                   {"ode_residual_max", checks.ode_residual},
                   {"semigroup_err_max", checks.semigroup_err},
                   {"identity_err_max", checks.identity_err},
                   {"pass", pass}};
    nsk::tools::write_json(out / "linear_verify.json", report);
    std::cout << report.dump(2) << "\n";
    return pass ? kExitOk : kExitVerdict;
}

int cmd_simulate(ExperimentConfig& cfg, const fs::path& out) {
    nsk::tools::write_manifest(out, "simulate", cfg);
    nsk::solver::SolverConfig sc = cfg.time;
    resolve_gevrey(cfg, sc);
    nsk::Grid grid = cfg.make_grid();
    nsk::solver::InitialData data = nsk::solver::build_initial_data(grid, cfg.initial);
    nsk::solver::Trajectory traj =
        nsk::solver::simulate(data.state, sc, cfg.params, cfg.pressure, cfg.guards);
    write_trajectory_artifacts(out, traj, cfg.d);
    if (traj.aborted) {
        nsk::tools::write_json(out / "abort.json", {{"reason", traj.abort_reason}});
        std::cerr << "guard abort: " << traj.abort_reason << "\n";
        return kExitGuard;
    }
    nsk::solver::AsymptoticMoments mom = nsk::solver::accumulate_nonlinear_moments(traj, data);
    json mj = moments_to_json(mom, cfg.d);
    mj["gevrey_c0"] = sc.gevrey_c0;
    mj["initial_norms"] = {{"a_low", data.a_norm_low},
                           {"a_high", data.a_norm_high},
                           {"m_low", data.m_norm_low},
                           {"m_high", data.m_norm_high}};
    nsk::tools::write_json(out / "moments.json", mj);
    return kExitOk;
}

int cmd_norms(ExperimentConfig& cfg, const fs::path& out) {
    if (cfg.input.empty()) throw ConfigError("input: norms requires a snapshot path");
    nsk::tools::write_manifest(out, "norms", cfg);
    nsk::LoadedState loaded = nsk::read_snapshot(cfg.input);
    const nsk::Grid& grid = *loaded.grid;
    nsk::besov::DyadicPartition part(grid);
    std::vector<nsk::config::NormRequest> requests = cfg.norms;
    if (requests.empty()) requests.push_back({"besov", 0.0, 2.0, 1.0, nsk::besov::kInf});

    nsk::tools::CsvWriter csv((out / "norms.csv").string(),
                              {"component", "name", "s", "p", "sigma", "value"});
    for (int c = 0; c <= grid.dim(); ++c) {
        const nsk::SpectralField& f =
            c == 0 ? loaded.state.a : loaded.state.m[c - 1];
        std::string comp = c == 0 ? "a" : "m" + std::to_string(c);
        for (const auto& nr : requests) {
            double value;
            if (nr.name == "lebesgue")
                value = nsk::besov::fourier_lebesgue_norm(f, nr.p);
            else if (nr.name == "sobolev")
                value = nsk::besov::fourier_sobolev_norm(f, nr.s, nr.p);
            else
                value = nsk::besov::besov_norm(part, f, {nr.s, nr.p, nr.sigma});
            csv.row_mixed({comp, nr.name, nsk::tools::fmt17(nr.s), index_str(nr.p),
                           index_str(nr.sigma), nsk::tools::fmt17(value)});
        }
    }
    return kExitOk;
}

int cmd_decay_fit(ExperimentConfig& cfg, const fs::path& out) {
    if (cfg.input.empty()) throw ConfigError("input: decay-fit requires a CSV path");
    nsk::tools::write_manifest(out, "decay-fit", cfg);
    nsk::tools::CsvTable table = nsk::tools::read_csv(cfg.input);
    if (table.columns.size() < 2) throw ConfigError("input: decay-fit CSV needs two columns");
    nsk::asymptotics::DecayFit fit = nsk::asymptotics::decay_fit(
        table.columns[0], table.columns[1], cfg.window[0], cfg.window[1]);
    bool has_target = std::isfinite(cfg.target_slope);
    bool pass = !has_target || std::abs(fit.slope - cfg.target_slope) <= cfg.slope_tolerance;
    json report = {{"slope", fit.slope},
                   {"intercept", fit.intercept},
                   {"residual", fit.residual},
                   {"points", fit.points},
                   {"window", {cfg.window[0], cfg.window[1]}},
                   {"pass", pass}};
    if (has_target) {
        report["target_slope"] = cfg.target_slope;
        report["slope_tolerance"] = cfg.slope_tolerance;
    }
    nsk::tools::write_json(out / "decay_fit.json", report);
    std::cout << report.dump(2) << "\n";
    return pass ? kExitOk : kExitVerdict;
}

int cmd_asymptotics(ExperimentConfig& cfg, const fs::path& out, const std::string& traj_dir,
                    double s, double p) {
    nsk::tools::write_manifest(out, "asymptotics", cfg);

    std::vector<double> diag_t, a_series, m_series;
    std::vector<double> snap_times;
    std::vector<nsk::SpectralField> density;
    std::vector<nsk::LoadedState> keep_alive;
    nsk::solver::AsymptoticMoments mom;
    bool aborted = false;

    if (!traj_dir.empty()) {
        fs::path dir(traj_dir);
        nsk::tools::CsvTable diag = nsk::tools::read_csv((dir / "diagnostics.csv").string());
        diag_t = diag.columns[0];
        a_series = diag.columns[3];
        m_series = diag.columns[4];
        std::ifstream mj(dir / "moments.json");
        if (!mj) throw ConfigError("traj: missing moments.json in " + traj_dir);
        mom = moments_from_json(json::parse(mj), cfg.d);
        nsk::tools::CsvTable snaps = nsk::tools::read_csv((dir / "snapshots.csv").string());
        for (std::size_t i = 0; i < snaps.columns[0].size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%04zu.nskfld",
                          static_cast<std::size_t>(snaps.columns[0][i]));
            keep_alive.push_back(nsk::read_snapshot((dir / name).string()));
            snap_times.push_back(snaps.columns[1][i]);
            density.push_back(keep_alive.back().state.a);
        }
    } else {
        nsk::solver::SolverConfig sc = cfg.time;
        resolve_gevrey(cfg, sc);
        if (sc.snapshot_times.empty())
            sc.snapshot_times = nsk::solver::log_spaced_times(cfg.window[0], cfg.window[1], 12);
        nsk::Grid grid = cfg.make_grid();
        nsk::solver::InitialData data = nsk::solver::build_initial_data(grid, cfg.initial);
        nsk::solver::Trajectory traj =
            nsk::solver::simulate(data.state, sc, cfg.params, cfg.pressure, cfg.guards);
        write_trajectory_artifacts(out, traj, cfg.d);
        aborted = traj.aborted;
        mom = nsk::solver::accumulate_nonlinear_moments(traj, data);
        diag_t = traj.diag_times();
        for (const auto& r : traj.rows) {
            a_series.push_back(r.a_norm);
            m_series.push_back(r.m_norm);
        }
        snap_times = traj.snapshot_times;
        keep_alive.emplace_back();  // grid lives on the stack here; copy the fields
        for (const auto& snap : traj.snapshots) density.push_back(snap.a);
        if (aborted) {
            nsk::tools::write_json(out / "abort.json", {{"reason", traj.abort_reason}});
            std::cerr << "guard abort: " << traj.abort_reason << "\n";
            return kExitGuard;
        }
        // re-point the copied fields at a grid that outlives this scope
        keep_alive.back().grid = std::make_shared<nsk::Grid>(grid);
        for (auto& f : density) f.grid = keep_alive.back().grid.get();
    }

    // restrict the error series to snapshots inside the fit window
    std::vector<double> win_t;
    std::vector<nsk::SpectralField> win_f;
    for (std::size_t i = 0; i < snap_times.size(); ++i) {
        if (snap_times[i] < cfg.window[0] - 1e-9 || snap_times[i] > cfg.window[1] + 1e-9)
            continue;
        win_t.push_back(snap_times[i]);
        win_f.push_back(density[i]);
    }
    if (win_t.size() < 2)
        throw ConfigError("window: need at least two snapshots inside the window");
    nsk::asymptotics::ErrorSeries err =
        nsk::asymptotics::asymptotic_error(win_t, win_f, mom, s, p, cfg.params);

    json fits = json::array();
    bool fits_ok = true;
    for (auto [name, series] : {std::pair<const char*, std::vector<double>*>{"a_norm", &a_series},
                                {"m_norm", &m_series}}) {
        try {
            nsk::asymptotics::DecayFit fit = nsk::asymptotics::decay_fit(
                diag_t, *series, cfg.window[0], cfg.window[1]);
            json entry = {{"name", name}, {"slope", fit.slope}, {"residual", fit.residual}};
            if (std::isfinite(cfg.target_slope) && std::string(name) == "a_norm")
                entry["target"] = cfg.target_slope;
            fits.push_back(entry);
        } catch (const nsk::asymptotics::AsymptoticsError& e) {
            fits.push_back({{"name", name}, {"error", e.what()}});
            fits_ok = false;
        }
    }

    bool pass = err.pass && fits_ok;
    json report = {{"moments", moments_to_json(mom, cfg.d)},
                   {"s", s},
                   {"p", p},
                   {"weighted_error_series",
                    {{"times", err.times}, {"weighted", err.weighted},
                     {"decrease", err.decrease}}},
                   {"decay_fits", fits},
                   {"pass", pass}};
    nsk::tools::write_json(out / "report.json", report);
    std::cout << report.dump(2) << "\n";
    return pass ? kExitOk : kExitVerdict;
}

int cmd_gevrey(ExperimentConfig& cfg, const fs::path& out) {
    nsk::tools::write_manifest(out, "gevrey", cfg);
    nsk::solver::SolverConfig sc = cfg.time;
    resolve_gevrey(cfg, sc);
    nsk::Grid grid = cfg.make_grid();
    nsk::solver::InitialData data = nsk::solver::build_initial_data(grid, cfg.initial);
    nsk::solver::Trajectory traj =
        nsk::solver::simulate(data.state, sc, cfg.params, cfg.pressure, cfg.guards);

    nsk::tools::CsvWriter csv((out / "gevrey.csv").string(),
                              {"t", "gevrey_norm", "gevrey_radius", "r2_over_t"});
    for (const auto& r : traj.rows)
        csv.row({r.t, r.gevrey_norm, r.gevrey_radius,
                 r.t > 0.0 ? r.gevrey_radius * r.gevrey_radius / r.t : 0.0});
    if (traj.aborted) {
        nsk::tools::write_json(out / "abort.json", {{"reason", traj.abort_reason}});
        std::cerr << "guard abort: " << traj.abort_reason << "\n";
        return kExitGuard;
    }

    nsk::besov::DyadicPartition part(grid);
    std::vector<double> times = traj.diag_times();
    double cl_norm = nsk::besov::chemin_lerner_from_blocks(
        part, times, traj.gevrey_block_norms,
        {-2.0 + grid.dim() / sc.norm_p, sc.norm_p, 1.0, nsk::besov::kInf});
    double initial_norm = traj.rows.front().gevrey_norm;
    bool norm_ok = initial_norm > 0.0 && cl_norm <= 10.0 * initial_norm;

    // radius growth: r(t)^2/t should hover around a positive constant
    std::vector<double> ratios;
    for (const auto& r : traj.rows)
        if (r.t >= cfg.window[0] && r.t <= cfg.window[1] && r.gevrey_radius > 0.0)
            ratios.push_back(r.gevrey_radius * r.gevrey_radius / r.t);
    bool radius_ok = !ratios.empty();
    double rmin = 0.0, rmax = 0.0, rmed = 0.0;
    if (radius_ok) {
        std::vector<double> sorted = ratios;
        std::sort(sorted.begin(), sorted.end());
        rmed = sorted[sorted.size() / 2];
        rmin = sorted.front();
        rmax = sorted.back();
        radius_ok = rmed > 0.0 && rmin >= 0.8 * rmed && rmax <= 1.2 * rmed;
    }

    bool pass = norm_ok && radius_ok;
    json report = {{"c0", sc.gevrey_c0},
                   {"cl_norm", cl_norm},
                   {"initial_norm", initial_norm},
                   {"ratio_median", rmed},
                   {"ratio_min", rmin},
                   {"ratio_max", rmax},
                   {"norm_ok", norm_ok},
                   {"radius_ok", radius_ok},
                   {"pass", pass}};
    nsk::tools::write_json(out / "gevrey.json", report);
    std::cout << report.dump(2) << "\n";
    return pass ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral Navier-Stokes-Korteweg toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", level = "fast", traj_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double opt_s = 0.0, opt_p = 2.0;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", config_path, "JSON config file");
        if (need_config) c->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    CLI::App* lv = app.add_subcommand("linear-verify", "solution-operator symbol checks");
    add_common(lv, true);
    CLI::App* sim = app.add_subcommand("simulate", "time integration run");
    add_common(sim, true);
    CLI::App* nrm = app.add_subcommand("norms", "norms of a stored snapshot");
    add_common(nrm, true);
    CLI::App* dft = app.add_subcommand("decay-fit", "log-log slope fit of a CSV series");
    add_common(dft, true);
    CLI::App* asy = app.add_subcommand("asymptotics", "large-time profile comparison");
    add_common(asy, true);
    asy->add_option("--traj", traj_dir, "existing simulate output directory");
    asy->add_option("--s", opt_s, "regularity index of the error norm");
    asy->add_option("--p", opt_p, "Lebesgue index of the error norm");
    CLI::App* gev = app.add_subcommand("gevrey", "analyticity-radius tracking run");
    add_common(gev, true);
    CLI::App* acc = app.add_subcommand("acceptance", "acceptance suite");
    add_common(acc, false);
    acc->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (acc->parsed())
            return nsk::tools::run_acceptance(level, out_dir, seed_set ? seed : 1);

        ExperimentConfig cfg = nsk::config::load_config(config_path);
        if (seed_set) {
            cfg.seed = seed;
            cfg.initial.seed = seed;
        }
        fs::path out(out_dir);
        fs::create_directories(out);

        if (lv->parsed()) return cmd_linear_verify(cfg, out);
        if (sim->parsed()) return cmd_simulate(cfg, out);
        if (nrm->parsed()) return cmd_norms(cfg, out);
        if (dft->parsed()) return cmd_decay_fit(cfg, out);
        if (asy->parsed()) return cmd_asymptotics(cfg, out, traj_dir, opt_s, opt_p);
        if (gev->parsed()) return cmd_gevrey(cfg, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
