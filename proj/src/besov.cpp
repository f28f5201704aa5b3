#include "nsk/besov.hpp"

#include <algorithm>
#include <cmath>

#include "nsk/kernels.hpp"

namespace nsk::besov {

double chi(double r) {
    if (r <= 1.1) return 1.0;
    if (r >= 1.9) return 0.0;
    double u = (r - 1.1) / 0.8;
    double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    return 1.0 - s;
}

double phi_hat(double r) { return chi(0.5 * r) - chi(r); }

DyadicPartition::DyadicPartition(const Grid& g) : grid_(&g) {
    double lo = g.xi_min(), hi = g.xi_max();
    // one spare block on each side keeps the telescoping sum exactly 1 on
    // every resolvable shell
    j_min_ = static_cast<int>(std::floor(std::log2(lo / 1.9))) - 1;
    j_max_ = static_cast<int>(std::ceil(std::log2(hi / 1.1))) + 1;
}

double DyadicPartition::block_multiplier(int j, std::size_t flat) const {
    double r = std::sqrt(grid_->xi_abs2(flat));
    return phi_hat(std::ldexp(r, -j));
}

double DyadicPartition::lowpass_multiplier(int j, std::size_t flat) const {
    double r = std::sqrt(grid_->xi_abs2(flat));
    return chi(std::ldexp(r, -j));
}

double conjugate_exponent(double p) {
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
}

SpectralField dyadic_block(const DyadicPartition& part, const SpectralField& f, int j) {
    const Grid& g = *f.grid;
    SpectralField out(g);
    if (j < part.j_min() || j > part.j_max()) return out;  // documented: zero field
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        out.c[i] = part.block_multiplier(j, i) * f.c[i];
    return out;
}

namespace {

// (sum (amp_i * w_i)^{p'} dxi^d)^{1/p'}; w == nullptr means weight 1
double weighted_lebesgue(const SpectralField& f, double p, const double* w) {
    const Grid& g = *f.grid;
    double pp = conjugate_exponent(p);
    double scale = g.spectral_scale();
    if (pp == kInf) {
        double m = 0.0;
        for (std::size_t i = 0; i < g.mode_count(); ++i) {
            double a = std::abs(f.c[i]) * (w ? w[i] : 1.0);
            m = std::max(m, a);
        }
        return scale * m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double a = std::abs(f.c[i]) * (w ? w[i] : 1.0);
        if (a > 0.0) acc += std::pow(a, pp);
    }
    return scale * std::pow(acc * g.dxi_volume(), 1.0 / pp);
}

double lsigma(const std::vector<double>& v, double sigma) {
    if (sigma == kInf) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    double acc = 0.0;
    for (double x : v)
        if (x > 0.0) acc += std::pow(x, sigma);
    return std::pow(acc, 1.0 / sigma);
}

}  // namespace

double fourier_lebesgue_norm(const SpectralField& f, double p) {
    return weighted_lebesgue(f, p, nullptr);
}

std::vector<double> block_lebesgue_norms(const DyadicPartition& part, const SpectralField& f,
                                         double p) {
    const Grid& g = *f.grid;
    std::vector<double> w(g.mode_count());
    std::vector<double> out(part.block_count());
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        for (std::size_t i = 0; i < g.mode_count(); ++i) w[i] = part.block_multiplier(j, i);
        out[j - part.j_min()] = weighted_lebesgue(f, p, w.data());
    }
    return out;
}

double besov_norm(const DyadicPartition& part, const SpectralField& f, const NormSpec& spec) {
    std::vector<double> blocks = block_lebesgue_norms(part, f, spec.p);
    for (int b = 0; b < part.block_count(); ++b)
        blocks[b] *= std::exp2(spec.s * (part.j_min() + b));
    return lsigma(blocks, spec.sigma);
}

double fourier_sobolev_norm(const SpectralField& f, double s, double p) {
    const Grid& g = *f.grid;
    if (s < 0.0) {
        double dc = std::abs(f.c[0]);
        double amp = kernels::max_abs(f.c.data(), g.mode_count());
        if (dc > 1e-13 * amp)
            throw BesovError("homogeneous norm undefined at xi=0: nonzero DC with s < 0");
    }
    std::vector<double> w(g.mode_count());
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double xi2 = g.xi_abs2(i);
        if (xi2 == 0.0)
            w[i] = (s == 0.0) ? 1.0 : 0.0;
        else
            w[i] = std::pow(xi2, 0.5 * s);
    }
    return weighted_lebesgue(f, p, w.data());
}

namespace {

double time_norm(std::span<const double> t, const std::vector<double>& v, double r) {
    if (r == kInf) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        acc += 0.5 * (t[i + 1] - t[i]) * (std::pow(v[i], r) + std::pow(v[i + 1], r));
    return std::pow(acc, 1.0 / r);
}

}  // namespace

double chemin_lerner_from_blocks(const DyadicPartition& part, std::span<const double> times,
                                 const std::vector<std::vector<double>>& series,
                                 const NormSpec& spec) {
    if (spec.r != kInf && times.size() < 2)
        throw BesovError("Chemin-Lerner norm with r < inf needs at least 2 time samples");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1])) throw BesovError("time samples must increase");
    if (static_cast<int>(series.size()) != part.block_count())
        throw BesovError("block series count mismatch");
    std::vector<double> per_block(part.block_count());
    for (int b = 0; b < part.block_count(); ++b) {
        if (series[b].size() != times.size()) throw BesovError("series length mismatch");
        per_block[b] =
            std::exp2(spec.s * (part.j_min() + b)) * time_norm(times, series[b], spec.r);
    }
    return lsigma(per_block, spec.sigma);
}

double chemin_lerner_norm(const DyadicPartition& part, std::span<const double> times,
                          std::span<const SpectralField> fields, const NormSpec& spec) {
    if (times.size() != fields.size()) throw BesovError("times/fields size mismatch");
    std::vector<std::vector<double>> series(part.block_count(),
                                            std::vector<double>(times.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        std::vector<double> blocks = block_lebesgue_norms(part, fields[i], spec.p);
        for (int b = 0; b < part.block_count(); ++b) series[b][i] = blocks[b];
    }
    return chemin_lerner_from_blocks(part, times, series, spec);
}

namespace {

SpectralField gevrey_apply(const SpectralField& f, double t, double c0, double sign) {
    if (t < 0.0 || !(c0 > 0.0)) throw BesovError("gevrey weight requires t >= 0, c0 > 0");
    const Grid& g = *f.grid;
    double radius = std::sqrt(c0 * t);
    if (radius * g.xi_max() > 700.0) {
        double tmax = (700.0 / g.xi_max()) * (700.0 / g.xi_max()) / c0;
        throw BesovError("gevrey weight overflow: max admissible t is " +
                         std::to_string(tmax));
    }
    SpectralField out(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        out.c[i] = f.c[i] * std::exp(sign * radius * std::sqrt(g.xi_abs2(i)));
    return out;
}

}  // namespace

SpectralField gevrey_weight(const SpectralField& f, double t, double c0) {
    return gevrey_apply(f, t, c0, +1.0);
}

SpectralField gevrey_unweight(const SpectralField& f, double t, double c0) {
    return gevrey_apply(f, t, c0, -1.0);
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g,
                                bool do_dealias) {
    const Grid& grid = *f.grid;
    std::vector<double> pf = transform_inverse(f);
    std::vector<double> pg = transform_inverse(g);
    std::vector<double> prod(grid.mode_count());
    kernels::multiply_real(prod.data(), pf.data(), pg.data(), grid.mode_count());
    SpectralField out = transform_forward(grid, prod);
    if (do_dealias) dealias(out);
    return out;
}

SpectralField bilinear_Bt(const SpectralField& f, const SpectralField& g, double t,
                          double c0) {
    SpectralField fd = gevrey_unweight(f, t, c0);
    SpectralField gd = gevrey_unweight(g, t, c0);
    SpectralField prod = pointwise_product(fd, gd, true);
    return gevrey_weight(prod, t, c0);
}

BonyParts bony_split(const DyadicPartition& part, const SpectralField& f,
                     const SpectralField& g) {
    const Grid& grid = *f.grid;
    if (!(grid == *g.grid)) throw BesovError("bony_split: grid mismatch");
    BonyParts parts{SpectralField(grid), SpectralField(grid), SpectralField(grid)};

    auto lowpass = [&](const SpectralField& h, int j) {
        SpectralField out(grid);
        for (std::size_t i = 0; i < grid.mode_count(); ++i)
            out.c[i] = part.lowpass_multiplier(j, i) * h.c[i];
        return out;
    };
    auto accumulate = [&](SpectralField& dst, const SpectralField& prod) {
        kernels::axpy(dst.c.data(), cplx{1.0, 0.0}, prod.c.data(), grid.mode_count());
    };

    for (int k = part.j_min(); k <= part.j_max(); ++k) {
        SpectralField fk = dyadic_block(part, f, k);
        SpectralField gk = dyadic_block(part, g, k);
        accumulate(parts.low_high, pointwise_product(lowpass(f, k - 1), gk));
        accumulate(parts.high_low, pointwise_product(fk, lowpass(g, k - 1)));
        SpectralField gtilde(grid);
        for (int l = k - 1; l <= k + 1; ++l) {
            SpectralField gl = dyadic_block(part, g, l);
            accumulate(gtilde, gl);
        }
        accumulate(parts.diagonal, pointwise_product(fk, gtilde));
    }
    return parts;
}

}  // namespace nsk::besov
