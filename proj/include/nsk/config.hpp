#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsk/grid.hpp"
#include "nsk/linear.hpp"
#include "nsk/physics.hpp"
#include "nsk/solver.hpp"

namespace nsk::config {

struct NormRequest {
    std::string name;
    double s = 0.0;
    double p = 2.0;
    double sigma = 1.0;
    double r = besov::kInf;  // only meaningful for Chemin-Lerner requests
};

// One JSON document drives every subcommand. Unknown keys anywhere are
// rejected with the offending field path.
struct ExperimentConfig {
    int d = 3;
    std::array<int, 3> n{16, 16, 16};
    std::array<double, 3> L{16.0, 16.0, 16.0};
    linear::LinearParams params;
    physics::PressureModel pressure;
    physics::PhysicsGuards guards;
    solver::InitialDataSpec initial;
    solver::SolverConfig time;
    std::vector<NormRequest> norms;
    bool c0_fit = true;       // c0 policy: fitted from the linear stage
    double c0_value = 0.0;    // explicit c0 when c0_fit is false
    double gevrey_factor = 0.5;  // safety factor applied to the fitted c0
    std::string input;        // snapshot/CSV input for norms and decay-fit
    std::array<double, 2> window{10.0, 100.0};  // decay-fit window
    double target_slope = std::numeric_limits<double>::quiet_NaN();  // NaN: no verdict
    double slope_tolerance = 0.15;
    std::string output;
    std::uint64_t seed = 1;

    Grid make_grid() const { return Grid(d, n, L); }
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::config
