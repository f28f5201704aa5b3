#include "nsk/linear.hpp"

#include <algorithm>
#include <cmath>

namespace nsk::linear {

void LinearParams::validate() const {
    if (!(mu > 0.0)) throw LinearError("mu must be positive");
    if (!(nu() > 0.0)) throw LinearError("nu = lambda_visc + 2 mu must be positive");
    if (!(kappa > 0.0)) throw LinearError("kappa must be positive");
}

Regime LinearParams::regime() const {
    double disc = nu() * nu() - 4.0 * kappa;
    if (std::abs(disc) < eps_deg * nu() * nu()) return Regime::critical;
    return disc > 0.0 ? Regime::overdamped : Regime::underdamped;
}

std::pair<cplx, cplx> characteristic_roots(double xi_sq, const LinearParams& params) {
    double nu = params.nu();
    cplx sqrt_disc = std::sqrt(cplx{nu * nu - 4.0 * params.kappa, 0.0});
    cplx lam_plus = -0.5 * xi_sq * (nu + sqrt_disc);
    cplx lam_minus = -0.5 * xi_sq * (nu - sqrt_disc);
    return {lam_plus, lam_minus};
}

cplx cexpm1(cplx z) {
    if (std::abs(z) < 1e-3) {
        // z (1 + z/2 (1 + z/3 (1 + z/4 (1 + z/5)))); next term is O(z^6)
        return z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0))));
    }
    return std::exp(z) - 1.0;
}

LongitudinalSymbols longitudinal_symbols(double t, double xi_sq, const LinearParams& params) {
    auto [lam_plus, lam_minus] = characteristic_roots(xi_sq, params);
    cplx dlam = lam_plus - lam_minus;
    cplx em = std::exp(lam_minus * t);
    cplx z = dlam * t;
    cplx D;
    if (std::abs(z) == 0.0)
        D = t * em;  // double root or xi = 0
    else
        D = em * cexpm1(z) / dlam;
    return {D, em - lam_minus * D, em + lam_plus * D};
}

GreenMatrix green_matrix(double t, std::array<double, 3> xi, int dim,
                         const LinearParams& params) {
    if (t < 0.0) throw LinearError("green_matrix requires t >= 0");
    double xi_sq = 0.0;
    for (int a = 0; a < dim; ++a) xi_sq += xi[a] * xi[a];

    GreenMatrix gm{};
    if (xi_sq == 0.0) {
        gm.g11 = 1.0;
        for (int j = 0; j < dim; ++j) gm.g22[j][j] = 1.0;
        return gm;
    }
    LongitudinalSymbols sym = longitudinal_symbols(t, xi_sq, params);
    double heat = std::exp(-params.mu * xi_sq * t);
    gm.g11 = sym.H1;
    for (int j = 0; j < dim; ++j) {
        gm.g12[j] = cplx{0.0, -xi[j]} * sym.D;
        gm.g21[j] = cplx{0.0, -params.kappa * xi[j] * xi_sq} * sym.D;
        for (int k = 0; k < dim; ++k) {
            double proj = xi[j] * xi[k] / xi_sq;
            gm.g22[j][k] = sym.L * proj + heat * ((j == k ? 1.0 : 0.0) - proj);
        }
    }
    return gm;
}

State apply_semigroup(const State& state, double t, const LinearParams& params) {
    const Grid& g = state.grid();
    int d = g.dim();
    State out(g);
    out.t = state.t + t;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        GreenMatrix gm = green_matrix(t, g.wavevector(i), d, params);
        cplx a = gm.g11 * state.a.c[i];
        for (int k = 0; k < d; ++k) a += gm.g12[k] * state.m[k].c[i];
        out.a.c[i] = a;
        for (int j = 0; j < d; ++j) {
            cplx m = gm.g21[j] * state.a.c[i];
            for (int k = 0; k < d; ++k) m += gm.g22[j][k] * state.m[k].c[i];
            out.m[j].c[i] = m;
        }
    }
    return out;
}

namespace {

// largest singular value of a complex 2x2
double sigma_max_2x2(cplx b00, cplx b01, cplx b10, cplx b11) {
    double frob2 = std::norm(b00) + std::norm(b01) + std::norm(b10) + std::norm(b11);
    double det2 = std::norm(b00 * b11 - b01 * b10);
    double disc = std::max(0.25 * frob2 * frob2 - det2, 0.0);
    return std::sqrt(0.5 * frob2 + std::sqrt(disc));
}

// |W G W^{-1}|_2 at one (t, r): transverse heat factor vs the weighted
// longitudinal 2x2 block
double weighted_norm(double t, double r, int dim, const LinearParams& params) {
    double r2 = r * r;
    LongitudinalSymbols sym = longitudinal_symbols(t, r2, params);
    cplx b01 = cplx{0.0, -r2} * sym.D;
    cplx b10 = cplx{0.0, -params.kappa * r2} * sym.D;
    double sig = sigma_max_2x2(sym.H1, b01, b10, sym.L);
    if (dim >= 2) sig = std::max(sig, std::exp(-params.mu * r2 * t));
    return sig;
}

}  // namespace

PointwiseFit pointwise_bound_fit(const LinearParams& params, std::span<const double> times,
                                 std::span<const double> xi_abs, int dim,
                                 double cap_factor) {
    if (times.empty() || xi_abs.empty())
        throw LinearError("pointwise_bound_fit: empty sample grid");
    params.validate();

    auto C_of = [&](double c0) {
        double worst = 0.0;
        for (double t : times)
            for (double r : xi_abs) {
                if (r == 0.0) continue;
                double v = weighted_norm(t, r, dim, params) * std::exp(c0 * t * r * r);
                worst = std::max(worst, v);
            }
        return worst;
    };

    PointwiseFit fit;
    fit.C_fit = C_of(0.0);
    if (!(fit.C_fit > 0.0) || !std::isfinite(fit.C_fit)) return fit;
    double cap = cap_factor * fit.C_fit;

    double lo = 0.0, hi = params.kappa / params.nu() + params.mu + 1.0;
    int guard = 0;
    while (C_of(hi) <= cap && guard++ < 60) hi *= 2.0;
    if (guard >= 60) {
        fit.c0_fit = hi;
        fit.ok = true;
        return fit;
    }
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (C_of(mid) <= cap ? lo : hi) = mid;
    }
    fit.c0_fit = lo;
    fit.ok = fit.c0_fit > 0.0;
    return fit;
}

State duhamel_convolve(std::span<const double> taus, std::span<const State> forcings,
                       double t, const LinearParams& params) {
    if (taus.empty() || forcings.empty()) throw LinearError("duhamel_convolve: empty history");
    if (taus.size() != forcings.size()) throw LinearError("duhamel_convolve: size mismatch");
    if (taus.size() < 2) throw LinearError("duhamel_convolve: need at least 2 nodes");
    for (std::size_t i = 0; i + 1 < taus.size(); ++i)
        if (!(taus[i] < taus[i + 1])) throw LinearError("duhamel_convolve: nodes must increase");
    if (taus.back() > t + 1e-12) throw LinearError("duhamel_convolve: node beyond t");

    const Grid& g = forcings[0].grid();
    State out(g);
    out.t = t;
    std::size_t n = taus.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w;
        if (i == 0)
            w = 0.5 * (taus[1] - taus[0]);
        else if (i + 1 == n)
            w = 0.5 * (taus[n - 1] - taus[n - 2]);
        else
            w = 0.5 * (taus[i + 1] - taus[i - 1]);
        State propagated = apply_semigroup(forcings[i], t - taus[i], params);
        for (std::size_t k = 0; k < g.mode_count(); ++k) {
            out.a.c[k] += w * propagated.a.c[k];
            for (int j = 0; j < g.dim(); ++j) out.m[j].c[k] += w * propagated.m[j].c[k];
        }
    }
    return out;
}

GreenMatrix green_time_integral(double dt, std::array<double, 3> xi, int dim,
                                const LinearParams& params) {
    if (dt < 0.0) throw LinearError("green_time_integral requires dt >= 0");
    static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    double xi_sq = 0.0;
    for (int a = 0; a < dim; ++a) xi_sq += xi[a] * xi[a];
    auto [lam_plus, lam_minus] = characteristic_roots(xi_sq, params);
    double rate = std::max(std::abs(lam_plus), params.mu * xi_sq);
    int panels = std::max(1, static_cast<int>(std::ceil(rate * dt / 4.0)));

    GreenMatrix acc{};
    auto add = [&](double s, double w) {
        GreenMatrix gm = green_matrix(s, xi, dim, params);
        acc.g11 += w * gm.g11;
        for (int j = 0; j < dim; ++j) {
            acc.g12[j] += w * gm.g12[j];
            acc.g21[j] += w * gm.g21[j];
            for (int k = 0; k < dim; ++k) acc.g22[j][k] += w * gm.g22[j][k];
        }
    };
    double h = dt / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = (p + 0.5) * h, half = 0.5 * h;
        for (int q = 0; q < 8; ++q) {
            add(mid - half * gx[q], half * gw[q]);
            add(mid + half * gx[q], half * gw[q]);
        }
    }
    return acc;
}

}  // namespace nsk::linear
