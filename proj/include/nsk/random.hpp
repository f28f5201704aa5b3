#pragma once

#include <cmath>
#include <random>

#include "nsk/grid.hpp"

namespace nsk {

// Random Hermitian field with modes confined to the shell r_lo <= |xi| <= r_hi
// (zero DC). Used by the inequality harness and the property tests.
inline SpectralField random_band_field(const Grid& g, std::mt19937_64& rng, double r_lo,
                                       double r_hi) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double r = std::sqrt(g.xi_abs2(i));
        if (r < r_lo || r > r_hi || r == 0.0) continue;
        f.c[i] = cplx{gauss(rng), gauss(rng)};
    }
    hermitian_symmetrize(f);
    f.c[0] = cplx{0.0, 0.0};
    return f;
}

}  // namespace nsk
