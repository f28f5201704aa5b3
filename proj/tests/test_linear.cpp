#include <doctest.h>

#include <cmath>

#include "nsk/grid.hpp"
#include "nsk/linear.hpp"

using nsk::cplx;
using namespace nsk::linear;

namespace {

LinearParams underdamped() { return {0.5, 0.0, 1.0, 1e-6}; }  // nu = 1, kappa = 1
LinearParams critical() { return {1.0, 0.0, 1.0, 1e-6}; }     // nu = 2, kappa = 1
LinearParams overdamped() { return {1.5, 0.0, 2.0, 1e-6}; }   // nu = 3, kappa = 2

double max_entry_diff(const GreenMatrix& a, const GreenMatrix& b, int dim) {
    double m = std::abs(a.g11 - b.g11);
    for (int j = 0; j < dim; ++j) {
        m = std::max(m, std::abs(a.g12[j] - b.g12[j]));
        m = std::max(m, std::abs(a.g21[j] - b.g21[j]));
        for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(a.g22[j][k] - b.g22[j][k]));
    }
    return m;
}

// determinant of the (1+d) x (1+d) solution operator by Gaussian elimination
cplx green_det(const GreenMatrix& g, int dim) {
    int n = dim + 1;
    cplx a[4][4] = {};
    a[0][0] = g.g11;
    for (int j = 0; j < dim; ++j) {
        a[0][1 + j] = g.g12[j];
        a[1 + j][0] = g.g21[j];
        for (int k = 0; k < dim; ++k) a[1 + j][1 + k] = g.g22[j][k];
    }
    cplx det{1.0, 0.0};
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
        if (pivot != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c][k], a[pivot][k]);
            det = -det;
        }
        det *= a[c][c];
        if (a[c][c] == cplx{0.0, 0.0}) return det;
        for (int r = c + 1; r < n; ++r) {
            cplx f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

}  // namespace

TEST_CASE("parameter validation and regimes") {
    CHECK(underdamped().regime() == Regime::underdamped);
    CHECK(critical().regime() == Regime::critical);
    CHECK(overdamped().regime() == Regime::overdamped);
    CHECK(overdamped().nu() == doctest::Approx(3.0));
    LinearParams bad = critical();
    bad.mu = 0.0;
    CHECK_THROWS_AS(bad.validate(), LinearError);
    bad = critical();
    bad.kappa = -1.0;
    CHECK_THROWS_AS(bad.validate(), LinearError);
}

TEST_CASE("characteristic roots") {
    // underdamped: complex pair -1/2 (1 +- i sqrt(3))
    auto [lp, lm] = characteristic_roots(1.0, underdamped());
    CHECK(lp.real() == doctest::Approx(-0.5));
    CHECK(lm.real() == doctest::Approx(-0.5));
    CHECK(std::abs(lp.imag()) == doctest::Approx(0.5 * std::sqrt(3.0)));
    CHECK(lp.imag() == doctest::Approx(-lm.imag()));
    // overdamped nu = 3, kappa = 2: roots -2 and -1
    auto [op, om] = characteristic_roots(1.0, overdamped());
    CHECK(op.real() == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(om.real() == doctest::Approx(-1.0).epsilon(1e-14));
    // roots scale with |xi|^2
    auto [sp, sm] = characteristic_roots(4.0, overdamped());
    CHECK(sp.real() == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(sm.real() == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("cexpm1 accuracy") {
    for (double x : {1e-8, 1e-5, 1e-4, 0.5, 2.0})
        CHECK(cexpm1(cplx{x, 0.0}).real() == doctest::Approx(std::expm1(x)).epsilon(1e-14));
    // complex reference built without cancellation:
    // e^{x+iy} - 1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
    cplx z{1e-5, 2e-5};
    double sh = std::sin(0.5 * z.imag());
    cplx ref{std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * sh * sh,
             std::exp(z.real()) * std::sin(z.imag())};
    CHECK(std::abs(cexpm1(z) - ref) <= 1e-19);
}

TEST_CASE("green matrix spot values") {
    // critical regime, t = 1, |xi| = 1
    GreenMatrix gc = green_matrix(1.0, {1.0, 0.0, 0.0}, 3, critical());
    CHECK(std::abs(gc.g11 - cplx{2.0 * std::exp(-1.0), 0.0}) < 1e-12);
    // overdamped, t = 1, |xi| = 1: g11 = 2 e^{-1} - e^{-2}
    GreenMatrix go = green_matrix(1.0, {1.0, 0.0, 0.0}, 3, overdamped());
    CHECK(std::abs(go.g11 - cplx{2.0 * std::exp(-1.0) - std::exp(-2.0), 0.0}) < 1e-12);
    // identity at t = 0 and at xi = 0
    GreenMatrix id = green_matrix(0.0, {0.7, -0.2, 0.1}, 3, underdamped());
    CHECK(std::abs(id.g11 - cplx{1.0, 0.0}) < 1e-14);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(id.g22[j][k] - cplx{j == k ? 1.0 : 0.0, 0.0}) < 1e-14);
    GreenMatrix dc = green_matrix(5.0, {0.0, 0.0, 0.0}, 3, underdamped());
    CHECK(dc.g11 == cplx{1.0, 0.0});
    CHECK_THROWS_AS(green_matrix(-1.0, {1.0, 0.0, 0.0}, 3, critical()), LinearError);
}

TEST_CASE("semigroup law and Abel determinant") {
    std::array<double, 3> xi{0.4, -0.8, 0.3};
    double xi_sq = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (const LinearParams& p : {underdamped(), critical(), overdamped()}) {
        GreenMatrix a = green_matrix(0.7, xi, 3, p);
        GreenMatrix b = green_matrix(1.1, xi, 3, p);
        GreenMatrix ab = green_matrix(1.8, xi, 3, p);
        GreenMatrix prod{};
        prod.g11 = a.g11 * b.g11;
        for (int k = 0; k < 3; ++k) prod.g11 += a.g12[k] * b.g21[k];
        for (int j = 0; j < 3; ++j) {
            prod.g12[j] = a.g11 * b.g12[j];
            prod.g21[j] = a.g21[j] * b.g11;
            for (int k = 0; k < 3; ++k) {
                prod.g12[j] += a.g12[k] * b.g22[k][j];
                prod.g21[j] += a.g22[j][k] * b.g21[k];
            }
            for (int k = 0; k < 3; ++k) {
                prod.g22[j][k] = a.g21[j] * b.g12[k];
                for (int l = 0; l < 3; ++l) prod.g22[j][k] += a.g22[j][l] * b.g22[l][k];
            }
        }
        CHECK(max_entry_diff(ab, prod, 3) < 1e-12);

        // det G(t) = e^{-(nu + 2 mu)|xi|^2 t} in d = 3
        cplx det = green_det(ab, 3);
        double expect = std::exp(-(p.nu() + 2.0 * p.mu) * xi_sq * 1.8);
        CHECK(std::abs(det - cplx{expect, 0.0}) < 1e-10);
    }
}

TEST_CASE("symbols are continuous through the critical band") {
    // two parameter sets straddling nu^2 = 4 kappa by a relative 2e-6
    double nu = 2.0;
    LinearParams lo{1.0, 0.0, 0.25 * nu * nu * (1.0 - 2e-6), 1e-7};
    LinearParams hi{1.0, 0.0, 0.25 * nu * nu * (1.0 + 2e-6), 1e-7};
    CHECK(lo.regime() == Regime::overdamped);
    CHECK(hi.regime() == Regime::underdamped);
    GreenMatrix a = green_matrix(1.3, {0.9, 0.1, -0.4}, 3, lo);
    GreenMatrix b = green_matrix(1.3, {0.9, 0.1, -0.4}, 3, hi);
    CHECK(max_entry_diff(a, b, 3) < 1e-5);
}

TEST_CASE("pointwise bound fit") {
    std::vector<double> times, xis;
    for (double t = 0.01; t <= 100.0; t *= 2.0) times.push_back(t);
    for (double x = 0.02; x <= 10.0; x *= 1.5) xis.push_back(x);

    // heat-dominated: viscosity floor survives in the fitted rate
    LinearParams heat{0.2, 1.6, 4.0, 1e-6};  // nu = 2, kappa = 4
    PointwiseFit fh = pointwise_bound_fit(heat, times, xis, 3);
    CHECK(fh.ok);
    CHECK(fh.c0_fit >= 0.19);
    CHECK(fh.C_fit <= 3.0);
    CHECK(fh.C_fit >= 0.9);

    // critical: rate strictly inside (0, nu/2)
    PointwiseFit fc = pointwise_bound_fit(critical(), times, xis, 3);
    CHECK(fc.ok);
    CHECK(fc.c0_fit > 0.0);
    CHECK(fc.c0_fit < 1.0);

    // overdamped nu = 3, kappa = 2: slow root gives a rate near 1
    PointwiseFit fo = pointwise_bound_fit(overdamped(), times, xis, 3);
    CHECK(fo.ok);
    CHECK(fo.c0_fit >= 0.99);

    CHECK_THROWS_AS(pointwise_bound_fit(critical(), {}, xis, 3), LinearError);
}

TEST_CASE("duhamel quadrature") {
    nsk::Grid g(1, {16, 1, 1}, {16.0, 0.0, 0.0});
    nsk::State f(g);
    f.m[0] = nsk::SpectralField(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i) f.m[0].c[i] = cplx{1.0, 0.0};
    f.a = nsk::SpectralField(g);
    LinearParams p = critical();
    p.mu = 1.0;

    auto with_nodes = [&](int n) {
        std::vector<double> taus(n);
        std::vector<nsk::State> forcings(n, f);
        for (int i = 0; i < n; ++i) taus[i] = static_cast<double>(i) / (n - 1);
        return duhamel_convolve(taus, forcings, 1.0, p);
    };

    // exact value for constant forcing: int_0^1 G(s) ds applied to F
    nsk::State coarse = with_nodes(9);
    nsk::State fine = with_nodes(17);
    double err_c = 0.0, err_f = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        GreenMatrix q = green_time_integral(1.0, g.wavevector(i), 1, p);
        cplx exact_a = q.g12[0];
        cplx exact_m = q.g22[0][0];
        err_c = std::max({err_c, std::abs(coarse.a.c[i] - exact_a),
                          std::abs(coarse.m[0].c[i] - exact_m)});
        err_f = std::max({err_f, std::abs(fine.a.c[i] - exact_a),
                          std::abs(fine.m[0].c[i] - exact_m)});
    }
    CHECK(err_c < 0.1);
    CHECK(err_f < err_c);
    // trapezoid halving gains about a factor four
    CHECK(err_c / err_f == doctest::Approx(4.0).epsilon(0.35));

    std::vector<double> bad{0.0, 0.5, 0.5};
    std::vector<nsk::State> forcings(3, f);
    CHECK_THROWS_AS(duhamel_convolve(bad, forcings, 1.0, p), LinearError);
    std::vector<double> beyond{0.0, 2.0};
    std::vector<nsk::State> two(2, f);
    CHECK_THROWS_AS(duhamel_convolve(beyond, two, 1.0, p), LinearError);
}

TEST_CASE("green time integral closed forms") {
    LinearParams p = overdamped();
    // xi = 0: the operator is the identity, so the integral is dt Id
    GreenMatrix q0 = green_time_integral(2.5, {0.0, 0.0, 0.0}, 3, p);
    CHECK(std::abs(q0.g11 - cplx{2.5, 0.0}) < 1e-12);
    CHECK(std::abs(q0.g22[1][1] - cplx{2.5, 0.0}) < 1e-12);

    // transverse heat factor integrates to (1 - e^{-mu r^2 dt})/(mu r^2)
    std::array<double, 3> xi{1.2, 0.0, 0.0};
    double r2 = 1.44, dt = 0.8;
    GreenMatrix q = green_time_integral(dt, xi, 3, p);
    double expect = (1.0 - std::exp(-p.mu * r2 * dt)) / (p.mu * r2);
    CHECK(std::abs(q.g22[1][1] - cplx{expect, 0.0}) < 1e-12);
    CHECK(std::abs(q.g22[1][2]) < 1e-13);
    CHECK_THROWS_AS(green_time_integral(-0.1, xi, 3, p), LinearError);
}
