#pragma once

#include <memory>
#include <string>

#include "nsk/grid.hpp"

namespace nsk {

// Field snapshot container: 8-byte magic "NSKFLD01", a u32 little-endian
// length followed by that many bytes of JSON header {d, n, L, t, components},
// then per component the coefficients as interleaved little-endian (re, im)
// doubles in the standard FFT ordering.
void write_snapshot(const std::string& path, const State& state);

// The returned grid owns the geometry the state's fields point into.
struct LoadedState {
    std::shared_ptr<const Grid> grid;
    State state;
};

LoadedState read_snapshot(const std::string& path);

struct SnapshotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk
