#include "nsk/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace nsk::config {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(path + "." + it.key() + ": unknown key");
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

double get_index(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return besov::kInf;
        throw ConfigError(key + ": expected a number or \"inf\"");
    }
    return v.get<double>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    check_keys(j, "config",
               {"grid", "params", "pressure", "guards", "initial", "time", "norms", "c0",
                "gevrey_factor", "input", "window", "target_slope", "slope_tolerance",
                "output", "seed"});
    ExperimentConfig c;

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"d", "n", "L"});
        c.d = get_or<int>(g, "d", 3);
        if (c.d < 1 || c.d > 3) throw ConfigError("grid.d: must be 1, 2 or 3");
        auto nv = get_or<std::vector<int>>(g, "n", {16, 16, 16});
        auto lv = get_or<std::vector<double>>(g, "L", {16.0, 16.0, 16.0});
        if (static_cast<int>(nv.size()) != c.d) throw ConfigError("grid.n: need d entries");
        if (static_cast<int>(lv.size()) != c.d) throw ConfigError("grid.L: need d entries");
        c.n = {1, 1, 1};
        c.L = {0.0, 0.0, 0.0};
        for (int a = 0; a < c.d; ++a) {
            if (nv[a] < 8 || nv[a] % 2 != 0)
                throw ConfigError("grid.n: entries must be even and >= 8");
            if (!(lv[a] > 0.0)) throw ConfigError("grid.L: entries must be positive");
            c.n[a] = nv[a];
            c.L[a] = lv[a];
        }
    }

    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p, "params", {"mu", "lambda_visc", "kappa", "eps_deg"});
        c.params.mu = get_or<double>(p, "mu", 1.0);
        c.params.lambda_visc = get_or<double>(p, "lambda_visc", 0.0);
        c.params.kappa = get_or<double>(p, "kappa", 1.0);
        c.params.eps_deg = get_or<double>(p, "eps_deg", 1e-6);
        try {
            c.params.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("params: ") + e.what());
        }
    }

    if (j.contains("pressure")) {
        const json& p = j.at("pressure");
        check_keys(p, "pressure", {"coeffs", "radius"});
        c.pressure.coeffs = get_or<std::vector<double>>(p, "coeffs", {1.0});
        c.pressure.radius = get_or<double>(p, "radius", 1.0);
        try {
            c.pressure.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("pressure: ") + e.what());
        }
    }

    if (j.contains("guards")) {
        const json& g = j.at("guards");
        check_keys(g, "guards", {"vacuum", "wrap"});
        c.guards.vacuum = get_or<double>(g, "vacuum", 0.1);
        c.time.wrap_guard = get_or<double>(g, "wrap", 1e-6);
        if (!(c.guards.vacuum > 0.0)) throw ConfigError("guards.vacuum: must be positive");
        if (c.time.wrap_guard < 0.0) throw ConfigError("guards.wrap: must be nonnegative");
    }

    if (j.contains("initial")) {
        const json& i = j.at("initial");
        check_keys(i, "initial",
                   {"family", "epsilon", "width", "band_lo", "band_hi", "momentum_epsilon",
                    "seed"});
        c.initial.family = get_or<std::string>(i, "family", "gaussian");
        if (c.initial.family != "gaussian" && c.initial.family != "random")
            throw ConfigError("initial.family: must be \"gaussian\" or \"random\"");
        c.initial.epsilon = get_or<double>(i, "epsilon", 1e-3);
        c.initial.width = get_or<double>(i, "width", 3.0);
        c.initial.band_lo = get_or<double>(i, "band_lo", 0.5);
        c.initial.band_hi = get_or<double>(i, "band_hi", 2.0);
        c.initial.momentum_epsilon = get_or<double>(i, "momentum_epsilon", -1.0);
        c.initial.seed = get_or<std::uint64_t>(i, "seed", 1);
        if (c.initial.epsilon < 0.0) throw ConfigError("initial.epsilon: must be >= 0");
        if (!(c.initial.width > 0.0)) throw ConfigError("initial.width: must be positive");
    }

    if (j.contains("time")) {
        const json& t = j.at("time");
        check_keys(t, "time",
                   {"dt", "T_final", "scheme", "exact_weight", "nonlinear",
                    "diagnostics_cadence", "snapshot_times"});
        c.time.dt = get_or<double>(t, "dt", 0.01);
        c.time.T_final = get_or<double>(t, "T_final", 1.0);
        std::string scheme = get_or<std::string>(t, "scheme", "etdrk2");
        if (scheme == "etd1")
            c.time.scheme = solver::Scheme::ETD1;
        else if (scheme == "etdrk2")
            c.time.scheme = solver::Scheme::ETDRK2;
        else
            throw ConfigError("time.scheme: must be \"etd1\" or \"etdrk2\"");
        c.time.exact_weight = get_or<bool>(t, "exact_weight", false);
        c.time.nonlinear = get_or<bool>(t, "nonlinear", true);
        c.time.diagnostics_cadence = get_or<int>(t, "diagnostics_cadence", 5);
        c.time.snapshot_times = get_or<std::vector<double>>(t, "snapshot_times", {});
        try {
            c.time.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("time: ") + e.what());
        }
    }

    if (j.contains("norms")) {
        if (!j.at("norms").is_array()) throw ConfigError("norms: expected an array");
        int idx = 0;
        for (const json& nj : j.at("norms")) {
            std::string path = "norms[" + std::to_string(idx++) + "]";
            check_keys(nj, path, {"name", "s", "p", "sigma", "r"});
            NormRequest nr;
            nr.name = get_or<std::string>(nj, "name", "besov");
            if (nr.name != "besov" && nr.name != "lebesgue" && nr.name != "sobolev")
                throw ConfigError(path + ".name: must be besov, lebesgue or sobolev");
            nr.s = get_or<double>(nj, "s", 0.0);
            nr.p = get_index(nj, "p", 2.0);
            nr.sigma = get_index(nj, "sigma", 1.0);
            nr.r = get_index(nj, "r", besov::kInf);
            if (!(nr.p >= 1.0)) throw ConfigError(path + ".p: must be in [1, inf]");
            if (!(nr.sigma >= 1.0)) throw ConfigError(path + ".sigma: must be in [1, inf]");
            if (!(nr.r >= 1.0)) throw ConfigError(path + ".r: must be in [1, inf]");
            c.norms.push_back(nr);
        }
    }

    if (j.contains("c0")) {
        const json& v = j.at("c0");
        if (v.is_string()) {
            if (v.get<std::string>() != "fit")
                throw ConfigError("c0: must be \"fit\" or a positive number");
            c.c0_fit = true;
        } else {
            c.c0_fit = false;
            c.c0_value = v.get<double>();
            if (!(c.c0_value > 0.0)) throw ConfigError("c0: must be positive");
        }
    }

    c.gevrey_factor = get_or<double>(j, "gevrey_factor", 0.5);
    if (!(c.gevrey_factor > 0.0) || c.gevrey_factor > 1.0)
        throw ConfigError("gevrey_factor: must be in (0, 1]");

    c.input = get_or<std::string>(j, "input", "");
    if (j.contains("window")) {
        auto w = get_or<std::vector<double>>(j, "window", {10.0, 100.0});
        if (w.size() != 2 || !(w[0] > 0.0) || !(w[1] > w[0]))
            throw ConfigError("window: need [t_lo, t_hi] with 0 < t_lo < t_hi");
        c.window = {w[0], w[1]};
    }
    c.target_slope = get_or<double>(j, "target_slope", c.target_slope);
    c.slope_tolerance = get_or<double>(j, "slope_tolerance", 0.15);
    if (!(c.slope_tolerance > 0.0)) throw ConfigError("slope_tolerance: must be positive");
    c.output = get_or<std::string>(j, "output", "");
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON: " + path);
    return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
    json j;
    j["grid"]["d"] = c.d;
    j["grid"]["n"] = std::vector<int>(c.n.begin(), c.n.begin() + c.d);
    j["grid"]["L"] = std::vector<double>(c.L.begin(), c.L.begin() + c.d);
    j["params"] = {{"mu", c.params.mu},
                   {"lambda_visc", c.params.lambda_visc},
                   {"kappa", c.params.kappa},
                   {"eps_deg", c.params.eps_deg}};
    j["pressure"] = {{"coeffs", c.pressure.coeffs}, {"radius", c.pressure.radius}};
    j["guards"] = {{"vacuum", c.guards.vacuum}, {"wrap", c.time.wrap_guard}};
    j["initial"] = {{"family", c.initial.family},   {"epsilon", c.initial.epsilon},
                    {"width", c.initial.width},     {"band_lo", c.initial.band_lo},
                    {"band_hi", c.initial.band_hi}, {"momentum_epsilon", c.initial.momentum_epsilon},
                    {"seed", c.initial.seed}};
    j["time"] = {{"dt", c.time.dt},
                 {"T_final", c.time.T_final},
                 {"scheme", c.time.scheme == solver::Scheme::ETD1 ? "etd1" : "etdrk2"},
                 {"exact_weight", c.time.exact_weight},
                 {"nonlinear", c.time.nonlinear},
                 {"diagnostics_cadence", c.time.diagnostics_cadence},
                 {"snapshot_times", c.time.snapshot_times}};
    auto idx = [](double v) -> json {
        if (v == besov::kInf) return "inf";
        return v;
    };
    j["norms"] = json::array();
    for (const auto& nr : c.norms)
        j["norms"].push_back({{"name", nr.name},
                              {"s", nr.s},
                              {"p", idx(nr.p)},
                              {"sigma", idx(nr.sigma)},
                              {"r", idx(nr.r)}});
    if (c.c0_fit)
        j["c0"] = "fit";
    else
        j["c0"] = c.c0_value;
    j["gevrey_factor"] = c.gevrey_factor;
    if (!c.input.empty()) j["input"] = c.input;
    j["window"] = {c.window[0], c.window[1]};
    if (std::isfinite(c.target_slope)) j["target_slope"] = c.target_slope;
    j["slope_tolerance"] = c.slope_tolerance;
    if (!c.output.empty()) j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

}  // namespace nsk::config
