#include "nsk/asymptotics.hpp"

#include <cmath>

namespace nsk::asymptotics {

using linear::Regime;

namespace {

struct Gpm {
    cplx plus, minus, w;  // G_pm = e^{lambda_pm t}/w, w = sqrt(nu^2 - 4 kappa)
};

Gpm gpm(double t, double xi_sq, const LinearParams& params) {
    double nu = params.nu();
    cplx w = std::sqrt(cplx{nu * nu - 4.0 * params.kappa, 0.0});
    cplx lam_plus = -0.5 * xi_sq * (nu + w);
    cplx lam_minus = -0.5 * xi_sq * (nu - w);
    return {std::exp(lam_plus * t) / w, std::exp(lam_minus * t) / w, w};
}

double heat_half_nu(double t, double xi_sq, const LinearParams& params) {
    return std::exp(-0.5 * params.nu() * xi_sq * t);
}

}  // namespace

cplx profile_symbol_G1(double t, double xi_sq, const LinearParams& params) {
    if (params.regime() == Regime::critical)
        return (1.0 + 0.5 * params.nu() * t * xi_sq) * heat_half_nu(t, xi_sq, params);
    Gpm g = gpm(t, xi_sq, params);
    double nu = params.nu();
    return 0.5 * (nu + g.w) * g.minus - 0.5 * (nu - g.w) * g.plus;
}

cplx profile_symbol_G2(double t, double xi_sq, const LinearParams& params) {
    if (params.regime() == Regime::critical)
        return t * xi_sq * heat_half_nu(t, xi_sq, params);
    Gpm g = gpm(t, xi_sq, params);
    return g.minus - g.plus;
}

cplx profile_symbol_G3(double t, double xi_sq, const LinearParams& params) {
    if (params.regime() == Regime::critical)
        return (1.0 - 0.5 * params.nu() * t * xi_sq) * heat_half_nu(t, xi_sq, params);
    Gpm g = gpm(t, xi_sq, params);
    double nu = params.nu();
    return 0.5 * (nu + g.w) * g.plus - 0.5 * (nu - g.w) * g.minus;
}

cplx profile_symbol(const std::string& name, double t, double xi_sq,
                    const LinearParams& params) {
    if (name == "G1") return profile_symbol_G1(t, xi_sq, params);
    if (name == "G2") return profile_symbol_G2(t, xi_sq, params);
    if (name == "G3") return profile_symbol_G3(t, xi_sq, params);
    throw AsymptoticsError("unknown profile symbol: " + name);
}

cplx profile_symbol_Gt(int base, int j, int k, double t, std::array<double, 3> xi, int dim,
                       const LinearParams& params) {
    double xi_sq = 0.0;
    for (int a = 0; a < dim; ++a) xi_sq += xi[a] * xi[a];
    if (xi_sq == 0.0) return {0.0, 0.0};
    cplx g = base == 2 ? profile_symbol_G2(t, xi_sq, params)
                       : profile_symbol_G3(t, xi_sq, params);
    return -(xi[j] * xi[k] / xi_sq) * g;
}

cplx profile_symbol_Smu(int j, int k, double t, std::array<double, 3> xi, int dim,
                        const LinearParams& params) {
    double xi_sq = 0.0;
    for (int a = 0; a < dim; ++a) xi_sq += xi[a] * xi[a];
    double delta = j == k ? 1.0 : 0.0;
    if (xi_sq == 0.0) return {delta, 0.0};
    return std::exp(-params.mu * xi_sq * t) * (delta - xi[j] * xi[k] / xi_sq);
}

// Initial data lives at the box center, so its spectrum carries the
// translation phase e^{-i xi . L/2}; the moment profiles must carry the same
// phase to compare mode by mode.
static cplx center_phase(const Grid& grid, std::size_t i) {
    double arg = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
        arg -= grid.xi_component(a, i) * 0.5 * grid.length(a);
    return {std::cos(arg), std::sin(arg)};
}

SpectralField density_profile(double t, const AsymptoticMoments& moments, const Grid& grid,
                              const LinearParams& params) {
    int d = grid.dim();
    double inv_vol = 1.0 / grid.cell_volume();
    SpectralField out(grid);
    for (std::size_t i = 0; i < grid.mode_count(); ++i) {
        auto xi = grid.wavevector(i);
        double xi_sq = grid.xi_abs2(i);
        cplx v = profile_symbol_G1(t, xi_sq, params) * moments.alpha +
                 profile_symbol_G2(t, xi_sq, params) * (moments.beta - moments.pi_P);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                v += profile_symbol_Gt(2, j, k, t, xi, d, params) * moments.M[j][k];
        out.c[i] = v * inv_vol * center_phase(grid, i);
    }
    return out;
}

MomentumProfiles momentum_profiles(double t, const AsymptoticMoments& moments,
                                   const Grid& grid, const LinearParams& params) {
    int d = grid.dim();
    double inv_vol = 1.0 / grid.cell_volume();
    MomentumProfiles out;
    for (int j = 0; j < d; ++j) {
        out.solenoidal[j] = SpectralField(grid);
        out.potential[j] = SpectralField(grid);
    }
    for (std::size_t i = 0; i < grid.mode_count(); ++i) {
        auto xi = grid.wavevector(i);
        double xi_sq = grid.xi_abs2(i);
        cplx g2 = profile_symbol_G2(t, xi_sq, params);
        cplx g3 = profile_symbol_G3(t, xi_sq, params);
        for (int j = 0; j < d; ++j) {
            cplx dj{0.0, xi[j]};
            cplx pot = -params.kappa * dj * g2 * moments.alpha +
                       dj * g3 * (moments.beta - moments.pi_P);
            cplx sol{0.0, 0.0};
            for (int l = 0; l < d; ++l)
                for (int k = 0; k < d; ++k) {
                    cplx dk{0.0, xi[k]};
                    pot += dk * profile_symbol_Gt(3, j, l, t, xi, d, params) *
                           moments.M[l][k];
                    sol -= dk * profile_symbol_Smu(j, l, t, xi, d, params) *
                           moments.M[l][k];
                }
            cplx phase = center_phase(grid, i);
            out.potential[j].c[i] = pot * inv_vol * phase;
            out.solenoidal[j].c[i] = sol * inv_vol * phase;
        }
    }
    return out;
}

ErrorSeries asymptotic_error(std::span<const double> times,
                             std::span<const SpectralField> density,
                             const AsymptoticMoments& moments, double s, double p,
                             const LinearParams& params) {
    if (!(p > 1.0 && p <= 2.0))
        throw AsymptoticsError("asymptotic error requires 1 < p <= 2");
    if (times.empty() || times.size() != density.size())
        throw AsymptoticsError("times/fields mismatch");
    const Grid& grid = *density[0].grid;
    double d = grid.dim();
    double pprime = p / (p - 1.0);
    if (!(s > -d / pprime))
        throw AsymptoticsError("regularity index out of range: need s > -d/p'");

    double exponent = 0.5 * d * (1.0 - 1.0 / p) + 0.5 * s;
    ErrorSeries out;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        SpectralField prof = density_profile(t, moments, grid, params);
        SpectralField diff(grid);
        for (std::size_t m = 0; m < grid.mode_count(); ++m)
            diff.c[m] = density[i].c[m] - prof.c[m];
        double nrm = besov::fourier_sobolev_norm(diff, s, p);
        out.times.push_back(t);
        out.weighted.push_back(std::pow(t, exponent) * nrm);
    }

    // final-decade verdict: last weighted value vs the value at the start of
    // the decade
    double T = out.times.back();
    std::size_t first = 0;
    while (first + 1 < out.times.size() && out.times[first] < T / 10.0) ++first;
    double v0 = out.weighted[first], v1 = out.weighted.back();
    out.decrease = v0 > 0.0 ? v1 / v0 : 0.0;
    out.pass = out.decrease <= 0.7;
    return out;
}

DecayFit decay_fit(std::span<const double> times, std::span<const double> values,
                   double t_lo, double t_hi) {
    if (times.size() != values.size()) throw AsymptoticsError("decay_fit: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0))
            throw AsymptoticsError("decay_fit: nonpositive value inside window");
        xs.push_back(std::log(times[i]));
        ys.push_back(std::log(values[i]));
    }
    DecayFit fit;
    fit.points = static_cast<int>(xs.size());
    if (fit.points < 8) throw AsymptoticsError("decay_fit: need at least 8 points in window");
    if (xs.back() - xs.front() < std::log(10.0) - 1e-9)
        throw AsymptoticsError("decay_fit: window must span at least one decade");
    for (int i = 0; i < fit.points; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double n = fit.points;
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace nsk::asymptotics
