#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nsk/grid.hpp"
#include "nsk/random.hpp"

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grid geometry") {
    Grid g(1, {8, 1, 1}, {8.0, 0.0, 0.0});
    CHECK(g.mode_count() == 8);
    CHECK(g.cell_volume() == doctest::Approx(1.0));
    CHECK(g.dxi(0) == doctest::Approx(2.0 * kPi / 8.0));
    // FFT ordering: index 5 carries signed index -3
    CHECK(g.signed_index(0, 5) == -3);
    CHECK(g.signed_index(0, 4) == 4);
    CHECK(g.wavevector(5)[0] == doctest::Approx(-3.0 * g.dxi(0)));
    // Nyquist mode is its own conjugate
    CHECK(g.conjugate_index(4) == 4);
    CHECK(g.conjugate_index(3) == 5);
    CHECK(g.xi_min() == doctest::Approx(g.dxi(0)));
    CHECK(g.xi_max() == doctest::Approx(4.0 * g.dxi(0)));

    CHECK_THROWS_AS(Grid(1, {7, 1, 1}, {8.0, 0.0, 0.0}), nsk::GridError);
    CHECK_THROWS_AS(Grid(1, {6, 1, 1}, {8.0, 0.0, 0.0}), nsk::GridError);
    CHECK_THROWS_AS(Grid(1, {8, 1, 1}, {0.0, 0.0, 0.0}), nsk::GridError);
    CHECK_THROWS_AS(Grid(4, {8, 8, 8}, {8.0, 8.0, 8.0}), nsk::GridError);
}

TEST_CASE("cosine transform and round trip") {
    Grid g(1, {16, 1, 1}, {16.0, 0.0, 0.0});
    std::vector<double> samples(16);
    for (std::size_t i = 0; i < 16; ++i)
        samples[i] = std::cos(2.0 * kPi * static_cast<double>(i) / 16.0);
    SpectralField f = nsk::transform_forward(g, samples);
    CHECK(std::abs(f.c[1] - cplx{8.0, 0.0}) < 1e-12);
    CHECK(std::abs(f.c[15] - cplx{8.0, 0.0}) < 1e-12);
    CHECK(std::abs(f.c[0]) < 1e-12);

    std::vector<double> back = nsk::transform_inverse(f);
    for (std::size_t i = 0; i < 16; ++i) CHECK(back[i] == doctest::Approx(samples[i]).epsilon(1e-12));
}

TEST_CASE("moment equals Riemann sum") {
    Grid g(2, {16, 16, 1}, {5.0, 7.0, 0.0});
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    std::vector<double> samples(g.mode_count());
    double riemann = 0.0;
    for (auto& v : samples) {
        v = gauss(rng);
        riemann += v;
    }
    riemann *= g.cell_volume();
    SpectralField f = nsk::transform_forward(g, samples);
    CHECK(nsk::moment(f) == doctest::Approx(riemann).epsilon(1e-12));
}

TEST_CASE("spectral calculus") {
    Grid g(2, {16, 16, 1}, {16.0, 16.0, 0.0});
    std::mt19937_64 rng(5);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 2.0);

    auto grad = nsk::gradient(f);
    SpectralField div = nsk::divergence(std::span<const SpectralField>(grad.data(), 2));
    SpectralField lap = nsk::laplacian(f);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(std::abs(div.c[i] - lap.c[i]) < 1e-12);

    // gradient of cos(k x) is -k sin(k x)
    std::vector<double> cosx(g.mode_count());
    double k = g.dxi(0);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        cosx[i] = std::cos(k * g.coordinate(i)[0]);
    auto dcos = nsk::gradient(nsk::transform_forward(g, cosx));
    std::vector<double> dphys = nsk::transform_inverse(dcos[0]);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(dphys[i] == doctest::Approx(-k * std::sin(k * g.coordinate(i)[0])).epsilon(1e-10));
}

TEST_CASE("helmholtz projection") {
    Grid g(3, {8, 8, 8}, {8.0, 8.0, 8.0});
    std::mt19937_64 rng(7);
    std::array<SpectralField, 3> v;
    for (int j = 0; j < 3; ++j) v[j] = nsk::random_band_field(g, rng, 0.3, 2.5);
    v[0].c[0] = cplx{1.0, 0.0};  // DC goes to the solenoidal part

    auto parts = nsk::helmholtz_project(std::span<const SpectralField>(v.data(), 3));
    double tot = 0.0, sol = 0.0, pot = 0.0;
    for (int j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < g.mode_count(); ++i) {
            CHECK(std::abs(parts.solenoidal[j].c[i] + parts.potential[j].c[i] - v[j].c[i]) <
                  1e-13);
            tot += std::norm(v[j].c[i]);
            sol += std::norm(parts.solenoidal[j].c[i]);
            pot += std::norm(parts.potential[j].c[i]);
        }
    // the two parts are orthogonal mode by mode
    CHECK(tot == doctest::Approx(sol + pot).epsilon(1e-12));
    SpectralField div =
        nsk::divergence(std::span<const SpectralField>(parts.solenoidal.data(), 3));
    for (std::size_t i = 1; i < g.mode_count(); ++i) CHECK(std::abs(div.c[i]) < 1e-11);
}

TEST_CASE("lame operator") {
    Grid g(3, {8, 8, 8}, {8.0, 8.0, 8.0});
    std::mt19937_64 rng(9);
    // longitudinal input: Lame acts as -(lambda + 2 mu)|xi|^2
    SpectralField phi = nsk::random_band_field(g, rng, 0.3, 2.5);
    auto v = nsk::gradient(phi);
    double mu = 1.0, lambda = 0.5;
    auto lam = nsk::lame_apply(std::span<const SpectralField>(v.data(), 3), mu, lambda);
    for (int j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            CHECK(std::abs(lam[j].c[i] + (lambda + 2.0 * mu) * g.xi_abs2(i) * v[j].c[i]) <
                  1e-10);
    CHECK_THROWS_AS(
        nsk::lame_apply(std::span<const SpectralField>(v.data(), 3), -1.0, 0.0),
        nsk::GridError);
}

TEST_CASE("hermitian utilities and dealiasing") {
    Grid g(2, {16, 16, 1}, {16.0, 16.0, 0.0});
    std::mt19937_64 rng(11);
    SpectralField f(g);
    std::normal_distribution<double> gauss;
    for (auto& z : f.c) z = cplx{gauss(rng), gauss(rng)};
    CHECK(nsk::hermitian_defect(f) > 0.1);
    nsk::hermitian_symmetrize(f);
    CHECK(nsk::hermitian_defect(f) < 1e-14);
    // a symmetrized field inverts to a real signal whose forward transform
    // matches
    std::vector<double> phys = nsk::transform_inverse(f);
    SpectralField back = nsk::transform_forward(g, phys);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(std::abs(back.c[i] - f.c[i]) < 1e-10);

    SpectralField h(g);
    for (auto& z : h.c) z = cplx{1.0, 0.0};
    nsk::dealias(h);
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        bool high = false;
        for (int a = 0; a < 2; ++a)
            if (3 * std::abs(g.signed_index(a, i)) > 16) high = true;
        CHECK(h.c[i] == (high ? cplx{0.0, 0.0} : cplx{1.0, 0.0}));
    }
}

TEST_CASE("boundary shell fraction") {
    Grid g(2, {16, 16, 1}, {16.0, 16.0, 0.0});
    // centered bump: almost nothing on the seam
    std::vector<double> bump(g.mode_count());
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        auto x = g.coordinate(i);
        double r2 = (x[0] - 8.0) * (x[0] - 8.0) + (x[1] - 8.0) * (x[1] - 8.0);
        bump[i] = std::exp(-r2 / 4.0);
    }
    CHECK(nsk::boundary_shell_fraction(nsk::transform_forward(g, bump)) < 1e-6);

    // constant field: fraction equals the shell share of the lattice
    std::vector<double> flat(g.mode_count(), 1.0);
    double expected = 1.0 - (14.0 * 14.0) / (16.0 * 16.0);
    CHECK(nsk::boundary_shell_fraction(nsk::transform_forward(g, flat)) ==
          doctest::Approx(expected).epsilon(1e-12));
}
