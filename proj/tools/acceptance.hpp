#pragma once

#include <cstdint>
#include <string>

namespace nsk::tools {

// Runs the acceptance suite at the given level ("fast" or "full"), printing
// one PASS/FAIL line per criterion and writing a verdict JSON into out_dir.
// Returns the process exit code (0 all pass, 3 any FAIL).
int run_acceptance(const std::string& level, const std::string& out_dir, std::uint64_t seed);

}  // namespace nsk::tools
