#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk::harness {

// Empirical constant report for one registered inequality: max LHS/RHS ratio
// over random band-limited trial fields. "pass" means the constant looks
// stable: the max over the second half of trials is at most 1.05x the max
// over the first half. 0/0 trials are skipped and not counted.
struct HarnessReport {
    std::string inequality;
    int trials = 0;
    int skipped = 0;
    double max_ratio = 0.0;
    double first_half_max = 0.0;
    double second_half_max = 0.0;
    bool pass = false;
};

std::vector<std::string> registered_inequalities();

// Trials run on a fixed internal d=3 reference grid; deterministic per
// (name, trials, seed). Unknown name -> error.
HarnessReport run_inequality(const std::string& name, int trials, std::uint64_t seed);

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::harness
