#include "nsk/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsk::physics {

void PressureModel::validate() const {
    if (coeffs.empty() || coeffs.size() > 15)
        throw PhysicsError("pressure model needs 1..15 Taylor coefficients (n = 2..16)");
    if (!(radius > 0.0)) throw PhysicsError("pressure convergence radius must be positive");
}

double PressureModel::IP(double b) const {
    // Horner in b over n = N..2 of n a_n b^{n-1}
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        double n = static_cast<double>(i + 2);
        acc = acc * b + n * coeffs[i];
    }
    return acc * b;
}

double PressureModel::tildeIP(double b) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * b + coeffs[i];
    return acc;
}

TensorField::TensorField(const Grid& g) : grid(&g) {
    int d = g.dim();
    upper.resize(static_cast<std::size_t>(d * (d + 1) / 2));
    for (auto& f : upper) f = SpectralField(g);
}

namespace {

std::size_t tri_index(int d, int j, int k) {
    if (j > k) std::swap(j, k);
    return static_cast<std::size_t>(j * d - j * (j - 1) / 2 + (k - j));
}

}  // namespace

SpectralField& TensorField::at(int j, int k) { return upper[tri_index(grid->dim(), j, k)]; }
const SpectralField& TensorField::at(int j, int k) const {
    return upper[tri_index(grid->dim(), j, k)];
}

namespace {

std::vector<double> physical_with_guards(const SpectralField& a, const PhysicsGuards& guards) {
    std::vector<double> phys = transform_inverse(a);
    double lo = *std::min_element(phys.begin(), phys.end());
    if (1.0 + lo < guards.vacuum)
        throw PhysicsError("vacuum guard violated: min density " + std::to_string(1.0 + lo));
    return phys;
}

void check_radius(const std::vector<double>& a_phys, const PressureModel& pressure) {
    double hi = 0.0;
    for (double v : a_phys) hi = std::max(hi, std::abs(v));
    if (hi > 0.5 * pressure.radius)
        throw PhysicsError("pressure radius guard violated: max |a| " + std::to_string(hi) +
                           " exceeds R_P/2 = " + std::to_string(0.5 * pressure.radius));
}

SpectralField forward_dealiased(const Grid& g, const std::vector<double>& phys) {
    SpectralField f = transform_forward(g, phys);
    dealias(f);
    return f;
}

}  // namespace

SpectralField compose_I(const SpectralField& a, const PhysicsGuards& guards) {
    const Grid& g = *a.grid;
    std::vector<double> phys = physical_with_guards(a, guards);
    for (double& v : phys) v = v / (1.0 + v);
    return forward_dealiased(g, phys);
}

SpectralField compose_IP(const SpectralField& a, const PressureModel& pressure) {
    pressure.validate();
    const Grid& g = *a.grid;
    std::vector<double> phys = transform_inverse(a);
    check_radius(phys, pressure);
    for (double& v : phys) v = pressure.IP(v);
    return forward_dealiased(g, phys);
}

SpectralField compose_tilde_IP(const SpectralField& a, const PressureModel& pressure) {
    pressure.validate();
    const Grid& g = *a.grid;
    std::vector<double> phys = transform_inverse(a);
    check_radius(phys, pressure);
    for (double& v : phys) v = pressure.tildeIP(v);
    return forward_dealiased(g, phys);
}

namespace {

// gradients of a in physical space, plus |grad a|^2 and lap(a^2) pieces
struct GradData {
    std::array<std::vector<double>, 3> grad;  // da_j samples
    std::vector<double> grad_sq;              // |grad a|^2 samples
};

GradData gradient_data(const SpectralField& a) {
    const Grid& g = *a.grid;
    GradData out;
    out.grad_sq.assign(g.mode_count(), 0.0);
    std::array<SpectralField, 3> da = gradient(a);
    for (int j = 0; j < g.dim(); ++j) {
        out.grad[j] = transform_inverse(da[j]);
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            out.grad_sq[i] += out.grad[j][i] * out.grad[j][i];
    }
    return out;
}

// shared assembly: diag_lap = coefficient of lap(...) Id term already in
// spectral form (dealiased); builds (kappa/2)(diag_lap - |grad a|^2) Id
// - kappa grad a x grad a
TensorField capillary_tensor(const SpectralField& a, double kappa,
                             const SpectralField& diag_lap) {
    const Grid& g = *a.grid;
    GradData gd = gradient_data(a);
    SpectralField grad_sq_hat = forward_dealiased(g, gd.grad_sq);
    TensorField out(g);
    std::vector<double> prod(g.mode_count());
    for (int j = 0; j < g.dim(); ++j)
        for (int k = j; k < g.dim(); ++k) {
            for (std::size_t i = 0; i < g.mode_count(); ++i)
                prod[i] = gd.grad[j][i] * gd.grad[k][i];
            SpectralField term = forward_dealiased(g, prod);
            SpectralField& dst = out.at(j, k);
            for (std::size_t i = 0; i < g.mode_count(); ++i) {
                cplx v = -kappa * term.c[i];
                if (j == k)
                    v += 0.5 * kappa * (diag_lap.c[i] - grad_sq_hat.c[i]);
                dst.c[i] = v;
            }
        }
    return out;
}

SpectralField lap_a_squared(const SpectralField& a) {
    const Grid& g = *a.grid;
    std::vector<double> phys = transform_inverse(a);
    for (double& v : phys) v = v * v;
    return laplacian(forward_dealiased(g, phys));
}

}  // namespace

TensorField korteweg_tensor(const SpectralField& a, double kappa) {
    // lap(rho^2) with rho = 1 + a: lap(a^2 + 2a)
    SpectralField diag = lap_a_squared(a);
    SpectralField lap_lin = laplacian(a);
    for (std::size_t i = 0; i < diag.size(); ++i) diag.c[i] += 2.0 * lap_lin.c[i];
    return capillary_tensor(a, kappa, diag);
}

TensorField korteweg_tensor_quadratic(const SpectralField& a, double kappa) {
    SpectralField diag = lap_a_squared(a);
    return capillary_tensor(a, kappa, diag);
}

TensorField ktilde_tensor(const SpectralField& a, double kappa) {
    const Grid& g = *a.grid;
    GradData gd = gradient_data(a);
    TensorField out(g);
    std::vector<double> samples(g.mode_count());
    for (int j = 0; j < g.dim(); ++j)
        for (int k = j; k < g.dim(); ++k) {
            for (std::size_t i = 0; i < g.mode_count(); ++i) {
                double v = kappa * gd.grad[j][i] * gd.grad[k][i];
                if (j == k) v += 0.5 * kappa * gd.grad_sq[i];
                samples[i] = v;
            }
            out.at(j, k) = forward_dealiased(g, samples);
        }
    return out;
}

std::array<SpectralField, 3> nonlinearity(const State& state, double mu, double lambda_visc,
                                          double kappa, const PressureModel& pressure,
                                          const PhysicsGuards& guards) {
    pressure.validate();
    const Grid& g = state.grid();
    int d = g.dim();

    std::vector<double> a_phys = physical_with_guards(state.a, guards);
    check_radius(a_phys, pressure);
    std::array<std::vector<double>, 3> m_phys;
    for (int j = 0; j < d; ++j) m_phys[j] = transform_inverse(state.m[j]);

    std::array<SpectralField, 3> out;
    for (int j = 0; j < d; ++j) out[j] = SpectralField(g);

    // div((I(a) - 1) m x m): I - 1 = -1/(1+a)
    {
        std::vector<double> prod(g.mode_count());
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) {
                for (std::size_t i = 0; i < g.mode_count(); ++i)
                    prod[i] = -m_phys[j][i] * m_phys[k][i] / (1.0 + a_phys[i]);
                SpectralField t = forward_dealiased(g, prod);
                for (std::size_t i = 0; i < g.mode_count(); ++i) {
                    cplx dk = cplx{0.0, g.xi_component(k, i)} * t.c[i];
                    out[j].c[i] += dk;
                    if (k != j) out[k].c[i] += cplx{0.0, g.xi_component(j, i)} * t.c[i];
                }
            }
    }

    // - I_P(a) grad a
    {
        GradData gd = gradient_data(state.a);
        std::vector<double> samples(g.mode_count());
        for (int j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < g.mode_count(); ++i)
                samples[i] = pressure.IP(a_phys[i]) * gd.grad[j][i];
            SpectralField t = forward_dealiased(g, samples);
            for (std::size_t i = 0; i < g.mode_count(); ++i) out[j].c[i] -= t.c[i];
        }
    }

    // - Lame(I(a) m)
    {
        std::vector<double> samples(g.mode_count());
        std::array<SpectralField, 3> im;
        for (int j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < g.mode_count(); ++i)
                samples[i] = a_phys[i] / (1.0 + a_phys[i]) * m_phys[j][i];
            im[j] = forward_dealiased(g, samples);
        }
        std::array<SpectralField, 3> lam =
            lame_apply(std::span<const SpectralField>(im.data(), static_cast<std::size_t>(d)),
                       mu, lambda_visc);
        for (int j = 0; j < d; ++j)
            for (std::size_t i = 0; i < g.mode_count(); ++i) out[j].c[i] -= lam[j].c[i];
    }

    // + div(K_quad)
    {
        TensorField kq = korteweg_tensor_quadratic(state.a, kappa);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const SpectralField& t = kq.at(j, k);
                for (std::size_t i = 0; i < g.mode_count(); ++i)
                    out[j].c[i] += cplx{0.0, g.xi_component(k, i)} * t.c[i];
            }
    }
    return out;
}

double pressure_moment_integrand(const SpectralField& a, const PressureModel& pressure) {
    pressure.validate();
    const Grid& g = *a.grid;
    std::vector<double> phys = transform_inverse(a);
    check_radius(phys, pressure);
    double acc = 0.0;
    for (double v : phys) acc += v * v * pressure.tildeIP(v);
    return acc * g.cell_volume();
}

std::array<std::array<double, 3>, 3> momentum_moment_integrand(const State& state, double kappa,
                                                               const PhysicsGuards& guards) {
    const Grid& g = state.grid();
    int d = g.dim();
    std::vector<double> a_phys = physical_with_guards(state.a, guards);
    std::array<std::vector<double>, 3> m_phys;
    for (int j = 0; j < d; ++j) m_phys[j] = transform_inverse(state.m[j]);
    GradData gd = gradient_data(state.a);

    std::array<std::array<double, 3>, 3> out{};
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.mode_count(); ++i) {
                double v = m_phys[j][i] * m_phys[k][i] / (1.0 + a_phys[i]) +
                           kappa * gd.grad[j][i] * gd.grad[k][i];
                if (j == k) v += 0.5 * kappa * gd.grad_sq[i];
                acc += v;
            }
            out[j][k] = out[k][j] = acc * g.cell_volume();
        }
    return out;
}

}  // namespace nsk::physics
