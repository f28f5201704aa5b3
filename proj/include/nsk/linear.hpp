#pragma once

#include <array>
#include <complex>
#include <span>
#include <utility>

#include "nsk/grid.hpp"

namespace nsk::linear {

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;
using nsk::State;

enum class Regime { underdamped, critical, overdamped };

struct LinearParams {
    double mu = 1.0;
    double lambda_visc = 0.0;
    double kappa = 1.0;
    // relative half-width of the band around nu^2 = 4 kappa that is reported
    // as critical
    double eps_deg = 1e-6;

    double nu() const { return lambda_visc + 2.0 * mu; }
    Regime regime() const;
    void validate() const;  // mu > 0, nu > 0, kappa > 0
};

// roots of lambda^2 + nu |xi|^2 lambda + kappa |xi|^4 = 0, ordered so that
// |Re lambda_plus| >= |Re lambda_minus|
std::pair<cplx, cplx> characteristic_roots(double xi_sq, const LinearParams& params);

// stable complex expm1: series for small |z|, std::exp otherwise
cplx cexpm1(cplx z);

// The three scalar building blocks of the longitudinal dynamics:
//   D  = (e^{lam+ t} - e^{lam- t}) / (lam+ - lam-)   (-> t e^{lam t} at a
//        double root; evaluated through one branch via cexpm1, so the
//        critical regime needs no separate formula)
//   H1 = e^{lam- t} - lam- D   (density-density entry)
//   L  = e^{lam- t} + lam+ D   (longitudinal momentum-momentum factor)
struct LongitudinalSymbols {
    cplx D, H1, L;
};
LongitudinalSymbols longitudinal_symbols(double t, double xi_sq, const LinearParams& params);

// (1+d) x (1+d) solution-operator symbol at one (t, xi); blocks indexed by
// spatial components 0..d-1
struct GreenMatrix {
    cplx g11;
    std::array<cplx, 3> g12;                  // row: action on momentum input
    std::array<cplx, 3> g21;                  // column: density output of momentum eqn
    std::array<std::array<cplx, 3>, 3> g22;   // momentum-momentum block
};

GreenMatrix green_matrix(double t, std::array<double, 3> xi, int dim,
                         const LinearParams& params);

// per-mode matrix-vector product with green_matrix(t)
State apply_semigroup(const State& state, double t, const LinearParams& params);

// Fit of the Fourier-pointwise bound  |W U(t,xi)| <= C e^{-c0 t |xi|^2} |W U(0,xi)|
// with W = diag(|xi|, Id). C_fit is the smallest constant for which the bound
// holds with c0 = 0 on the sample set; c0_fit is the largest rate for which
// it holds with constant <= cap_factor * C_fit (grid search then bisection).
struct PointwiseFit {
    double C_fit = 0.0;
    double c0_fit = 0.0;
    bool ok = false;  // false if the bound failed for every c0 > 0
};
PointwiseFit pointwise_bound_fit(const LinearParams& params, std::span<const double> times,
                                 std::span<const double> xi_abs, int dim,
                                 double cap_factor = 10.0);

// Trapezoid quadrature of int_0^t G(t - tau) F(tau) dtau over the given
// nodes (strictly increasing, last node <= t).
State duhamel_convolve(std::span<const double> taus, std::span<const State> forcings,
                       double t, const LinearParams& params);

// int_0^dt G(s) ds entrywise by composite 16-point Gauss-Legendre; panel
// count grows with |lambda_max| dt so the result is quadrature-exact to
// machine precision. The optional exact-weight ETD variant builds on this.
GreenMatrix green_time_integral(double dt, std::array<double, 3> xi, int dim,
                                const LinearParams& params);

struct LinearError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::linear
