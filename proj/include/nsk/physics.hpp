#pragma once

#include <array>
#include <vector>

#include "nsk/grid.hpp"

namespace nsk::physics {

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;
using nsk::State;

// Analytic pressure about the reference density 1 with zero sound speed:
// P(1+b) = P(1) + sum_{n>=2} a_n b^n. coeffs[0] is a_2; at most 15 terms
// (n up to 16).
struct PressureModel {
    std::vector<double> coeffs = {1.0};
    double radius = 1.0;

    void validate() const;
    // I_P(b) = P'(1+b) = sum n a_n b^{n-1}
    double IP(double b) const;
    // tilde I_P(b) = sum a_n b^{n-2}, so I_P(b) grad b = grad(b^2 tilde I_P(b))
    double tildeIP(double b) const;
};

struct PhysicsGuards {
    double vacuum = 0.1;  // min physical density 1 + a
};

// d x d symmetric tensor of spectral fields; only the upper triangle is stored
struct TensorField {
    const Grid* grid = nullptr;
    std::vector<SpectralField> upper;

    TensorField() = default;
    explicit TensorField(const Grid& g);
    SpectralField& at(int j, int k);
    const SpectralField& at(int j, int k) const;
};

// I(a) = a / (1 + a), evaluated pointwise in physical space, dealiased
SpectralField compose_I(const SpectralField& a, const PhysicsGuards& guards = {});
SpectralField compose_IP(const SpectralField& a, const PressureModel& pressure);
SpectralField compose_tilde_IP(const SpectralField& a, const PressureModel& pressure);

// full Korteweg stress (kappa/2)(lap(rho^2) - |grad rho|^2) Id - kappa grad rho x grad rho
// with rho = 1 + a
TensorField korteweg_tensor(const SpectralField& a, double kappa);
// quadratic part: the full tensor minus its linearization kappa lap(a) Id
TensorField korteweg_tensor_quadratic(const SpectralField& a, double kappa);
// profile tensor: off-diagonal kappa da_j da_k, diagonal (kappa/2)|grad a|^2 + kappa (da_j)^2
TensorField ktilde_tensor(const SpectralField& a, double kappa);

// momentum-equation nonlinearity
//   N_j = div((I(a)-1) m x m)_j - I_P(a) da_j - Lame(I(a) m)_j + div(K_quad)_j
// products in physical space, derivatives spectral, 2/3-rule dealiasing after
// every product
std::array<SpectralField, 3> nonlinearity(const State& state, double mu, double lambda_visc,
                                          double kappa, const PressureModel& pressure,
                                          const PhysicsGuards& guards = {});

// spatial integrals feeding the large-time moments, as plain Riemann sums
// (exact for the DC mode): int a^2 tilde I_P(a) dy
double pressure_moment_integrand(const SpectralField& a, const PressureModel& pressure);
// int (m_j m_k / (1+a) + Ktilde_jk(a)) dy
std::array<std::array<double, 3>, 3> momentum_moment_integrand(const State& state,
                                                               double kappa,
                                                               const PhysicsGuards& guards = {});

struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::physics
