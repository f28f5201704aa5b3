#include "nsk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "nsk/besov.hpp"
#include "nsk/grid.hpp"
#include "nsk/random.hpp"

namespace nsk::harness {

using besov::DyadicPartition;
using besov::NormSpec;
using besov::kInf;

namespace {

// One trial returns an LHS/RHS ratio, or a negative value to signal a
// skipped (0/0) trial.
using Trial = std::function<double(const Grid&, const DyadicPartition&, std::mt19937_64&)>;

double ratio_or_skip(double lhs, double rhs) {
    if (rhs == 0.0) return -1.0;
    return lhs / rhs;
}

// d = 3 reference lattice: xi spacing 2 pi / 16, about 9 active blocks
const Grid& trial_grid() {
    static Grid g(3, {16, 16, 16}, {16.0, 16.0, 16.0});
    return g;
}

double bernstein_trial(const Grid& g, const DyadicPartition& part, std::mt19937_64& rng) {
    // random single-block field; derivative norm vs 2^j block scale
    std::uniform_int_distribution<int> pick(part.j_min() + 1, part.j_max() - 1);
    int j = pick(rng);
    double lo = 1.1 * std::ldexp(1.0, j), hi = 3.8 * std::ldexp(1.0, j);
    SpectralField f = random_band_field(g, rng, lo * 0.5, hi * 2.0);
    SpectralField fj = besov::dyadic_block(part, f, j);
    double denom = std::ldexp(1.0, j) * besov::fourier_lebesgue_norm(fj, 2.0);
    double numer = 0.0;
    {
        SpectralField df(g);
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            df.c[i] = std::sqrt(g.xi_abs2(i)) * fj.c[i];
        numer = besov::fourier_lebesgue_norm(df, 2.0);
    }
    return ratio_or_skip(numer, denom);
}

double banach_ring_trial(const Grid& g, const DyadicPartition& part, std::mt19937_64& rng) {
    // |fg|_{B^{d/p}_{p,1}} <= C |f| |g| at p = 2, d = 3 (s = 1.5)
    NormSpec spec{1.5, 2.0, 1.0, kInf};
    SpectralField f = random_band_field(g, rng, 0.3, 1.9);
    SpectralField h = random_band_field(g, rng, 0.3, 1.9);
    SpectralField fh = besov::pointwise_product(f, h);
    double lhs = besov::besov_norm(part, fh, spec);
    double rhs = besov::besov_norm(part, f, spec) * besov::besov_norm(part, h, spec);
    return ratio_or_skip(lhs, rhs);
}

double bilinear_neg_trial(const Grid& g, const DyadicPartition& part, std::mt19937_64& rng) {
    // |fg|_{B^{-2+d/p}_{p,s}} <= C(|f|_{-2+d/p,s}|g|_{d/p,inf} + swap),
    // p = 2, d = 3, sigma = 1
    NormSpec neg{-0.5, 2.0, 1.0, kInf};
    NormSpec top{1.5, 2.0, kInf, kInf};
    SpectralField f = random_band_field(g, rng, 0.3, 1.9);
    SpectralField h = random_band_field(g, rng, 0.3, 1.9);
    SpectralField fh = besov::pointwise_product(f, h);
    double lhs = besov::besov_norm(part, fh, neg);
    double rhs = besov::besov_norm(part, f, neg) * besov::besov_norm(part, h, top) +
                 besov::besov_norm(part, f, top) * besov::besov_norm(part, h, neg);
    return ratio_or_skip(lhs, rhs);
}

double bt_holder_trial(const Grid& g, const DyadicPartition&, std::mt19937_64& rng) {
    // |B_t(f,g)|_{L^1} <= C |f|_{L^2} |g|_{L^2}, worst case over a few t
    SpectralField f = random_band_field(g, rng, 0.3, 1.9);
    SpectralField h = random_band_field(g, rng, 0.3, 1.9);
    double rhs = besov::fourier_lebesgue_norm(f, 2.0) * besov::fourier_lebesgue_norm(h, 2.0);
    double lhs = 0.0;
    for (double t : {0.0, 1.0, 10.0}) {
        SpectralField bt = besov::bilinear_Bt(f, h, t, 0.1);
        lhs = std::max(lhs, besov::fourier_lebesgue_norm(bt, 1.0));
    }
    return ratio_or_skip(lhs, rhs);
}

Trial lookup(const std::string& name) {
    if (name == "bernstein") return bernstein_trial;
    if (name == "banach-ring") return banach_ring_trial;
    if (name == "bilinear-neg") return bilinear_neg_trial;
    if (name == "bt-holder") return bt_holder_trial;
    throw HarnessError("unknown inequality: " + name);
}

}  // namespace

std::vector<std::string> registered_inequalities() {
    return {"bernstein", "banach-ring", "bilinear-neg", "bt-holder"};
}

HarnessReport run_inequality(const std::string& name, int trials, std::uint64_t seed) {
    if (trials < 2) throw HarnessError("need at least 2 trials");
    Trial trial = lookup(name);
    const Grid& g = trial_grid();
    DyadicPartition part(g);
    std::mt19937_64 rng(seed);

    HarnessReport rep;
    rep.inequality = name;
    rep.trials = trials;
    int counted = 0;
    for (int i = 0; i < trials; ++i) {
        double r = trial(g, part, rng);
        if (r < 0.0) {
            ++rep.skipped;
            continue;
        }
        ++counted;
        rep.max_ratio = std::max(rep.max_ratio, r);
        if (i < trials / 2)
            rep.first_half_max = std::max(rep.first_half_max, r);
        else
            rep.second_half_max = std::max(rep.second_half_max, r);
    }
    rep.pass = counted > 0 && std::isfinite(rep.max_ratio) &&
               rep.second_half_max <= 1.05 * rep.first_half_max;
    return rep;
}

}  // namespace nsk::harness
