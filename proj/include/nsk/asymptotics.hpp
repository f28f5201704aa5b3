#pragma once

#include <span>
#include <string>
#include <vector>

#include "nsk/grid.hpp"
#include "nsk/linear.hpp"
#include "nsk/solver.hpp"

namespace nsk::asymptotics {

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;
using linear::LinearParams;
using solver::AsymptoticMoments;

// Scalar large-time profile symbols, built from the G_pm combination
//   G1 = (1/2)(nu+w)G- - (1/2)(nu-w)G+,   G2 = G- - G+,
//   G3 = (1/2)(nu+w)G+ - (1/2)(nu-w)G-,   G_pm = e^{lambda_pm t}/w,
// with w = sqrt(nu^2 - 4 kappa); at the critical point the limits
//   G1 -> (1 + (nu/2)t|xi|^2) e^{-(nu/2)t|xi|^2}, G2 -> t|xi|^2 e^{..},
//   G3 -> (1 - (nu/2)t|xi|^2) e^{..}.
// This route is deliberately independent of the divided-difference forms in
// the linear module; the two are cross-checked against each other.
cplx profile_symbol_G1(double t, double xi_sq, const LinearParams& params);
cplx profile_symbol_G2(double t, double xi_sq, const LinearParams& params);
cplx profile_symbol_G3(double t, double xi_sq, const LinearParams& params);

// Riesz-composed tensor symbols: Gt_b^{jk} = -(xi_j xi_k / |xi|^2) Gb for
// b in {2, 3}; zero at xi = 0.
cplx profile_symbol_Gt(int base, int j, int k, double t, std::array<double, 3> xi, int dim,
                       const LinearParams& params);
// heat Leray symbol e^{-mu t |xi|^2} (delta_jk - xi_j xi_k / |xi|^2)
cplx profile_symbol_Smu(int j, int k, double t, std::array<double, 3> xi, int dim,
                        const LinearParams& params);

// name in {G1, G2, G3}: scalar symbol lookup for the CLI
cplx profile_symbol(const std::string& name, double t, double xi_sq,
                    const LinearParams& params);

// first-order density profile in stored-DFT normalization:
//   G1 a + G2 b - G2 piP + Gt2^{jk} M_{jk}, all times 1/cell_volume
SpectralField density_profile(double t, const AsymptoticMoments& moments, const Grid& grid,
                              const LinearParams& params);

struct MomentumProfiles {
    std::array<SpectralField, 3> solenoidal;
    std::array<SpectralField, 3> potential;
};
// potential_j: -kappa d_j G2 a + d_j G3 b - d_j G3 piP + d_k Gt3^{jl} M_{lk};
// solenoidal_j: -d_k Smu^{jl} M_{lk}
MomentumProfiles momentum_profiles(double t, const AsymptoticMoments& moments,
                                   const Grid& grid, const LinearParams& params);

struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> weighted;  // t^{d/2(1-1/p)+s/2} |grad^s (a - profile)|_{L^p}
    double decrease = 0.0;         // last/first over the final decade
    bool pass = false;             // decrease <= 0.7
};
// hypotheses: 1 < p <= 2 and s > -d/p'
ErrorSeries asymptotic_error(std::span<const double> times,
                             std::span<const SpectralField> density,
                             const AsymptoticMoments& moments, double s, double p,
                             const LinearParams& params);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of log-residuals
    int points = 0;
};
// least squares of log(value) vs log(t) over the window [t_lo, t_hi];
// needs >= 8 points spanning at least one decade, all values positive
DecayFit decay_fit(std::span<const double> times, std::span<const double> values,
                   double t_lo, double t_hi);

struct AsymptoticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::asymptotics
