#include <doctest.h>

#include <cmath>
#include <random>

#include "nsk/asymptotics.hpp"
#include "nsk/grid.hpp"
#include "nsk/linear.hpp"

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;
using namespace nsk::asymptotics;
using nsk::linear::GreenMatrix;
using nsk::linear::LinearParams;
using nsk::solver::AsymptoticMoments;

namespace {

LinearParams underdamped() { return {0.5, 0.0, 1.0, 1e-6}; }
LinearParams critical() { return {1.0, 0.0, 1.0, 1e-6}; }
LinearParams overdamped() { return {1.5, 0.0, 2.0, 1e-6}; }

}  // namespace

TEST_CASE("profile symbol spot values") {
    // critical, t = 1, |xi|^2 = 1: (nu/2) t |xi|^2 = 1
    CHECK(std::abs(profile_symbol_G1(1.0, 1.0, critical()) -
                   cplx{2.0 * std::exp(-1.0), 0.0}) < 1e-12);
    CHECK(std::abs(profile_symbol_G2(1.0, 1.0, critical()) - cplx{std::exp(-1.0), 0.0}) <
          1e-12);
    CHECK(std::abs(profile_symbol_G3(1.0, 1.0, critical())) < 1e-12);
    // overdamped nu = 3, kappa = 2: G2 = e^{-t} - e^{-2t} at |xi| = 1
    CHECK(std::abs(profile_symbol_G2(1.0, 1.0, overdamped()) -
                   cplx{std::exp(-1.0) - std::exp(-2.0), 0.0}) < 1e-12);
    // symbols are 1, 0, 1 at t = 0
    for (const LinearParams& p : {underdamped(), critical(), overdamped()}) {
        CHECK(std::abs(profile_symbol_G1(0.0, 2.3, p) - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(profile_symbol_G2(0.0, 2.3, p)) < 1e-12);
        CHECK(std::abs(profile_symbol_G3(0.0, 2.3, p) - cplx{1.0, 0.0}) < 1e-12);
    }
    CHECK(std::abs(profile_symbol("G1", 1.0, 1.0, critical()) -
                   profile_symbol_G1(1.0, 1.0, critical())) == 0.0);
    CHECK_THROWS_AS(profile_symbol("G7", 1.0, 1.0, critical()), AsymptoticsError);
}

TEST_CASE("cross identities against the solution operator") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (const LinearParams& p : {underdamped(), critical(), overdamped()}) {
        for (int trial = 0; trial < 60; ++trial) {
            double r = 0.05 * std::pow(60.0, uni(rng));
            double t = 0.05 * std::pow(60.0, uni(rng));
            double th = 2.0 * std::numbers::pi * uni(rng);
            double ph = std::acos(2.0 * uni(rng) - 1.0);
            std::array<double, 3> xi{r * std::sin(ph) * std::cos(th),
                                     r * std::sin(ph) * std::sin(th), r * std::cos(ph)};
            GreenMatrix g = nsk::linear::green_matrix(t, xi, 3, p);
            double r2 = r * r;
            cplx g1 = profile_symbol_G1(t, r2, p);
            cplx g2 = profile_symbol_G2(t, r2, p);
            cplx g3 = profile_symbol_G3(t, r2, p);
            // G1 is the density-density entry
            CHECK(std::abs(g1 - g.g11) < 1e-10);
            // G2 relates to the divergence row: sum_k i xi_k g12_k = |xi|^2 D
            cplx div_row{0.0, 0.0};
            for (int k = 0; k < 3; ++k) div_row += cplx{0.0, xi[k]} * g.g12[k];
            CHECK(std::abs(g2 - div_row) < 1e-10 * (1.0 + std::abs(g2)));
            // G3 is the longitudinal momentum factor
            cplx longi{0.0, 0.0};
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) longi += xi[j] * g.g22[j][k] * xi[k];
            longi /= r2;
            CHECK(std::abs(g3 - longi) < 1e-10 * (1.0 + std::abs(g3)));
        }
    }
}

TEST_CASE("tensor symbols") {
    LinearParams p = critical();
    std::array<double, 3> xi{0.6, -0.3, 0.8};
    double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    // Gt is the Riesz-composed scalar
    cplx g2 = profile_symbol_G2(0.7, r2, p);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            cplx expect = -(xi[j] * xi[k] / r2) * g2;
            CHECK(std::abs(profile_symbol_Gt(2, j, k, 0.7, xi, 3, p) - expect) < 1e-13);
        }
    // Smu annihilates xi and is the identity complement on the transverse space
    for (int j = 0; j < 3; ++j) {
        cplx dot{0.0, 0.0};
        for (int k = 0; k < 3; ++k) dot += profile_symbol_Smu(j, k, 0.7, xi, 3, p) * xi[k];
        CHECK(std::abs(dot) < 1e-13);
    }
    // xi = 0: Gt vanishes, Smu is Kronecker delta
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    CHECK(std::abs(profile_symbol_Gt(2, 0, 0, 0.7, zero, 3, p)) == 0.0);
    CHECK(std::abs(profile_symbol_Smu(0, 0, 0.7, zero, 3, p) - cplx{1.0, 0.0}) == 0.0);
    CHECK(std::abs(profile_symbol_Smu(0, 1, 0.7, zero, 3, p)) == 0.0);
}

TEST_CASE("profile field assembly") {
    Grid g(3, {8, 8, 8}, {16.0, 16.0, 16.0});
    LinearParams p = critical();
    // stored-DFT coefficient of a point moment at the box center is
    // symbol * e^{-i xi . L/2} / cell volume
    double V = g.cell_volume();
    auto phase = [&](std::size_t i) {
        double arg = 0.0;
        for (int a = 0; a < 3; ++a) arg -= g.xi_component(a, i) * 0.5 * g.length(a);
        return cplx{std::cos(arg), std::sin(arg)};
    };

    AsymptoticMoments ma;
    ma.alpha = 1.0;
    SpectralField rho = density_profile(2.0, ma, g, p);
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        cplx expect = profile_symbol_G1(2.0, g.xi_abs2(i), p) * phase(i) / V;
        CHECK(std::abs(rho.c[i] - expect) < 1e-13);
    }

    // beta = 1 alone: potential_j = i xi_j G3 * phase / V, solenoidal = 0
    AsymptoticMoments mb;
    mb.beta = 1.0;
    MomentumProfiles mp = momentum_profiles(2.0, mb, g, p);
    for (int j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < g.mode_count(); ++i) {
            cplx expect = cplx{0.0, g.xi_component(j, i)} *
                          profile_symbol_G3(2.0, g.xi_abs2(i), p) * phase(i) / V;
            CHECK(std::abs(mp.potential[j].c[i] - expect) < 1e-10);
            CHECK(std::abs(mp.solenoidal[j].c[i]) == 0.0);
        }

    // momentum moments alone: the solenoidal part is divergence free
    AsymptoticMoments mm;
    mm.M[0][1] = 0.4;
    mm.M[1][0] = 0.4;
    mm.M[0][0] = 0.9;
    mm.M[2][2] = -0.3;
    MomentumProfiles ms = momentum_profiles(1.5, mm, g, p);
    SpectralField div =
        nsk::divergence(std::span<const SpectralField>(ms.solenoidal.data(), 3));
    for (std::size_t i = 0; i < g.mode_count(); ++i) CHECK(std::abs(div.c[i]) < 1e-12);
}

TEST_CASE("asymptotic error on synthetic data") {
    Grid g(3, {8, 8, 8}, {16.0, 16.0, 16.0});
    LinearParams p = critical();
    AsymptoticMoments m;
    m.alpha = 0.7;
    m.pi_P = 0.05;
    m.M[0][0] = 0.1;

    std::vector<double> times{10.0, 20.0, 40.0, 80.0, 100.0};
    std::vector<SpectralField> density;
    for (double t : times) density.push_back(density_profile(t, m, g, p));
    ErrorSeries es = asymptotic_error(times, density, m, 0.5, 2.0, p);
    REQUIRE(es.weighted.size() == times.size());
    for (double w : es.weighted) CHECK(w < 1e-12);
    CHECK(es.pass);

    CHECK_THROWS_AS(asymptotic_error(times, density, m, 0.5, 1.0, p), AsymptoticsError);
    CHECK_THROWS_AS(asymptotic_error(times, density, m, 0.5, 3.0, p), AsymptoticsError);
    // s <= -d/p' is out of range: p = 2, d = 3 -> need s > -1.5
    CHECK_THROWS_AS(asymptotic_error(times, density, m, -1.5, 2.0, p), AsymptoticsError);
    std::vector<double> short_times{10.0};
    CHECK_THROWS_AS(asymptotic_error(short_times, density, m, 0.5, 2.0, p),
                    AsymptoticsError);
}

TEST_CASE("decay fit") {
    std::vector<double> times, values;
    for (int i = 0; i < 40; ++i) {
        double t = 10.0 * std::pow(10.0, i / 39.0);
        times.push_back(t);
        values.push_back(3.0 * std::pow(t, -0.75));
    }
    DecayFit fit = decay_fit(times, values, 10.0, 100.0);
    CHECK(fit.slope == doctest::Approx(-0.75).epsilon(1e-6));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.residual < 1e-10);
    CHECK(fit.points == 40);

    // too few points in window
    CHECK_THROWS_AS(decay_fit(times, values, 99.0, 100.0), AsymptoticsError);
    // less than a decade
    std::vector<double> narrow_t, narrow_v;
    for (int i = 0; i < 12; ++i) {
        narrow_t.push_back(10.0 + i);
        narrow_v.push_back(1.0);
    }
    CHECK_THROWS_AS(decay_fit(narrow_t, narrow_v, 10.0, 25.0), AsymptoticsError);
    // nonpositive value inside the window
    values[20] = 0.0;
    CHECK_THROWS_AS(decay_fit(times, values, 10.0, 100.0), AsymptoticsError);
}
