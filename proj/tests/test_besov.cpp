#include <doctest.h>

#include <cmath>
#include <random>

#include "nsk/besov.hpp"
#include "nsk/grid.hpp"
#include "nsk/random.hpp"

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;
using nsk::besov::DyadicPartition;
using nsk::besov::kInf;
using nsk::besov::NormSpec;

namespace {

Grid& ref_grid() {
    static Grid g(3, {16, 16, 16}, {16.0, 16.0, 16.0});
    return g;
}

}  // namespace

TEST_CASE("cutoff and bump") {
    CHECK(nsk::besov::chi(0.0) == 1.0);
    CHECK(nsk::besov::chi(1.1) == 1.0);
    CHECK(nsk::besov::chi(1.9) == 0.0);
    CHECK(nsk::besov::chi(1.5) == doctest::Approx(0.5));
    // bump support is the annulus (1.1, 3.8)
    CHECK(nsk::besov::phi_hat(1.05) == 0.0);
    CHECK(nsk::besov::phi_hat(3.85) == 0.0);
    CHECK(nsk::besov::phi_hat(2.0) > 0.0);
    // any ray meets at most two blocks
    for (double r : {0.17, 0.9, 1.3, 2.0, 3.1, 4.9, 7.7}) {
        int hit = 0;
        for (int j = -10; j <= 10; ++j)
            if (nsk::besov::phi_hat(std::ldexp(r, -j)) > 0.0) ++hit;
        CHECK(hit >= 1);
        CHECK(hit <= 2);
    }
}

TEST_CASE("partition of unity on the grid") {
    const Grid& g = ref_grid();
    DyadicPartition part(g);
    for (std::size_t i = 1; i < g.mode_count(); i += 37) {
        double total = 0.0;
        for (int j = part.j_min(); j <= part.j_max(); ++j)
            total += part.block_multiplier(j, i);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    // low-pass telescopes the blocks below it (plus the DC mode)
    for (std::size_t i = 1; i < g.mode_count(); i += 53) {
        double blocks = 0.0;
        int jr = part.j_max();
        for (int j = part.j_min(); j <= jr - 1; ++j) blocks += part.block_multiplier(j, i);
        CHECK(part.lowpass_multiplier(jr, i) == doctest::Approx(blocks).epsilon(1e-12));
    }
    CHECK(part.lowpass_multiplier(part.j_min(), 0) == 1.0);
}

TEST_CASE("fourier lebesgue norms") {
    const Grid& g = ref_grid();
    std::mt19937_64 rng(21);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 3.0);
    double scale = g.spectral_scale();

    double sup = 0.0, l2 = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double a = scale * std::abs(f.c[i]);
        sup = std::max(sup, a);
        l2 += a * a * g.dxi_volume();
        l1 += a * g.dxi_volume();
    }
    // conjugate-exponent convention: p = 1 is the sup, p = inf sums
    CHECK(nsk::besov::fourier_lebesgue_norm(f, 1.0) == doctest::Approx(sup).epsilon(1e-13));
    CHECK(nsk::besov::fourier_lebesgue_norm(f, 2.0) ==
          doctest::Approx(std::sqrt(l2)).epsilon(1e-13));
    CHECK(nsk::besov::fourier_lebesgue_norm(f, kInf) == doctest::Approx(l1).epsilon(1e-13));
    CHECK(nsk::besov::conjugate_exponent(1.0) == kInf);
    CHECK(nsk::besov::conjugate_exponent(kInf) == 1.0);
    CHECK(nsk::besov::conjugate_exponent(2.0) == doctest::Approx(2.0));
}

TEST_CASE("besov norm properties") {
    const Grid& g = ref_grid();
    DyadicPartition part(g);
    std::mt19937_64 rng(23);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 3.0);

    // homogeneity
    SpectralField f3 = f;
    for (auto& z : f3.c) z *= 3.0;
    NormSpec spec{0.7, 2.0, 1.0, kInf};
    CHECK(nsk::besov::besov_norm(part, f3, spec) ==
          doctest::Approx(3.0 * nsk::besov::besov_norm(part, f, spec)).epsilon(1e-12));

    // l^sigma monotonicity in sigma
    double s1 = nsk::besov::besov_norm(part, f, {0.0, 2.0, 1.0, kInf});
    double s2 = nsk::besov::besov_norm(part, f, {0.0, 2.0, 2.0, kInf});
    double si = nsk::besov::besov_norm(part, f, {0.0, 2.0, kInf, kInf});
    CHECK(s1 >= s2);
    CHECK(s2 >= si);

    // triangle over the partition: the block sum dominates the plain norm
    CHECK(s1 >= nsk::besov::fourier_lebesgue_norm(f, 2.0) * (1.0 - 1e-12));

    // dyadic_block outside the partition range is the zero field
    SpectralField far = nsk::besov::dyadic_block(part, f, part.j_max() + 3);
    for (auto& z : far.c) CHECK(z == cplx{0.0, 0.0});
}

TEST_CASE("fourier sobolev conventions") {
    const Grid& g = ref_grid();
    std::mt19937_64 rng(25);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 3.0);
    f.c[0] = cplx{0.5, 0.0};

    // s = 0 keeps the DC mode and reduces to the Lebesgue norm
    CHECK(nsk::besov::fourier_sobolev_norm(f, 0.0, 2.0) ==
          doctest::Approx(nsk::besov::fourier_lebesgue_norm(f, 2.0)).epsilon(1e-13));
    // s > 0 kills DC: equal norms with and without it
    SpectralField nodc = f;
    nodc.c[0] = cplx{0.0, 0.0};
    CHECK(nsk::besov::fourier_sobolev_norm(f, 2.0, 2.0) ==
          doctest::Approx(nsk::besov::fourier_sobolev_norm(nodc, 2.0, 2.0)).epsilon(1e-13));
    // |xi|^2 weight matches the Laplacian
    CHECK(nsk::besov::fourier_sobolev_norm(nodc, 2.0, 2.0) ==
          doctest::Approx(nsk::besov::fourier_lebesgue_norm(nsk::laplacian(nodc), 2.0))
              .epsilon(1e-13));
    // s < 0 with nonzero DC is an error
    CHECK_THROWS_AS(nsk::besov::fourier_sobolev_norm(f, -0.5, 2.0), nsk::besov::BesovError);
    CHECK(nsk::besov::fourier_sobolev_norm(nodc, -0.5, 2.0) > 0.0);
}

TEST_CASE("chemin-lerner norms") {
    const Grid& g = ref_grid();
    DyadicPartition part(g);
    std::mt19937_64 rng(27);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 3.0);
    NormSpec space{0.3, 2.0, 1.0, kInf};
    double b = nsk::besov::besov_norm(part, f, space);

    std::vector<double> times{0.0, 1.0, 2.0};
    std::vector<SpectralField> fields{f, f, f};
    // r = inf on a constant series reduces to the space norm
    CHECK(nsk::besov::chemin_lerner_norm(part, times, fields, space) ==
          doctest::Approx(b).epsilon(1e-12));
    // r = 1 integrates: constant series over [0, 2] doubles it
    NormSpec l1time{0.3, 2.0, 1.0, 1.0};
    CHECK(nsk::besov::chemin_lerner_norm(part, times, fields, l1time) ==
          doctest::Approx(2.0 * b).epsilon(1e-12));

    std::vector<double> one{0.0};
    std::vector<SpectralField> onef{f};
    CHECK_THROWS_AS(nsk::besov::chemin_lerner_norm(part, one, onef, l1time),
                    nsk::besov::BesovError);
    std::vector<double> bad{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(nsk::besov::chemin_lerner_norm(part, bad, fields, space),
                    nsk::besov::BesovError);
}

TEST_CASE("gevrey weights") {
    const Grid& g = ref_grid();
    std::mt19937_64 rng(29);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 3.0);

    SpectralField w = nsk::besov::gevrey_weight(f, 2.0, 0.5);
    SpectralField back = nsk::besov::gevrey_unweight(w, 2.0, 0.5);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(std::abs(back.c[i] - f.c[i]) <= 1e-12 * (1.0 + std::abs(f.c[i])));
    // t = 0 is the identity
    SpectralField w0 = nsk::besov::gevrey_weight(f, 0.0, 0.5);
    for (std::size_t i = 0; i < g.mode_count(); ++i) CHECK(w0.c[i] == f.c[i]);
    // overflow guard names the admissible horizon
    double t_big = 2.0 * (700.0 / g.xi_max()) * (700.0 / g.xi_max());
    CHECK_THROWS_AS(nsk::besov::gevrey_weight(f, t_big, 1.0), nsk::besov::BesovError);
    CHECK_THROWS_AS(nsk::besov::gevrey_weight(f, 1.0, 0.0), nsk::besov::BesovError);
}

TEST_CASE("pointwise product and bilinear operator") {
    const Grid& g = ref_grid();
    std::mt19937_64 rng(31);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 1.5);

    // multiplying by the constant-one field returns f (band inside the
    // dealiasing zone)
    SpectralField ones(g);
    ones.c[0] = cplx{static_cast<double>(g.mode_count()), 0.0};
    SpectralField prod = nsk::besov::pointwise_product(ones, f);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(std::abs(prod.c[i] - f.c[i]) <= 1e-10 * (1.0 + std::abs(f.c[i])));

    // B_t at t = 0 is the plain product
    SpectralField h = nsk::random_band_field(g, rng, 0.3, 1.5);
    SpectralField bt = nsk::besov::bilinear_Bt(f, h, 0.0, 0.5);
    SpectralField fh = nsk::besov::pointwise_product(f, h);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        CHECK(std::abs(bt.c[i] - fh.c[i]) <= 1e-12 * (1.0 + std::abs(fh.c[i])));
}

TEST_CASE("bony splitting") {
    const Grid& g = ref_grid();
    DyadicPartition part(g);
    std::mt19937_64 rng(33);
    SpectralField f = nsk::random_band_field(g, rng, 0.3, 1.5);
    SpectralField h = nsk::random_band_field(g, rng, 0.3, 1.5);

    nsk::besov::BonyParts parts = nsk::besov::bony_split(part, f, h);
    SpectralField fh = nsk::besov::pointwise_product(f, h);
    double amp = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) amp = std::max(amp, std::abs(fh.c[i]));
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        cplx sum = parts.low_high.c[i] + parts.high_low.c[i] + parts.diagonal.c[i];
        CHECK(std::abs(sum - fh.c[i]) <= 1e-10 * std::max(amp, 1.0));
    }

    // widely separated frequency content has an empty diagonal part
    SpectralField lowf = nsk::random_band_field(g, rng, 0.35, 0.45);
    SpectralField hih = nsk::random_band_field(g, rng, 3.0, 3.5);
    nsk::besov::BonyParts sep = nsk::besov::bony_split(part, lowf, hih);
    double diag = 0.0, low_high = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        diag = std::max(diag, std::abs(sep.diagonal.c[i]));
        low_high = std::max(low_high, std::abs(sep.low_high.c[i]));
    }
    CHECK(low_high > 0.0);
    CHECK(diag <= 1e-10 * low_high);
}

TEST_CASE("dyadic heat-kernel sum stays bounded") {
    // sup_t sum_j (sqrt(t) 2^j)^sigma e^{-t delta 4^j} is a pure exercise in
    // the block bookkeeping: finite uniformly in t
    for (double sigma : {1.0, 2.0})
        for (double delta : {0.25, 1.0}) {
            double worst = 0.0;
            for (double t = 1e-3; t < 1e3; t *= 1.7) {
                double total = 0.0;
                for (int j = -40; j <= 40; ++j) {
                    double x = std::sqrt(t) * std::ldexp(1.0, j);
                    total += std::pow(x, sigma) * std::exp(-delta * x * x);
                }
                worst = std::max(worst, total);
            }
            CHECK(worst < 50.0);
            CHECK(worst > 0.0);
        }
}
