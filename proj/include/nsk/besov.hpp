#pragma once

#include <limits>
#include <span>
#include <vector>

#include "nsk/grid.hpp"

namespace nsk::besov {

using nsk::cplx;
using nsk::Grid;
using nsk::SpectralField;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial cutoff: 1 for r <= 1.1, 0 for r >= 1.9, quintic smoothstep between.
double chi(double r);
// Dyadic bump chi(r/2) - chi(r); support is the annulus 1.1 < r < 3.8, so a
// ray meets at most two consecutive blocks and the shell sums telescope.
double phi_hat(double r);

// Active block range for a grid: every nonzero mode is fully covered by the
// telescoping sum over j_min..j_max.
class DyadicPartition {
  public:
    explicit DyadicPartition(const Grid& g);

    const Grid& grid() const { return *grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int block_count() const { return j_max_ - j_min_ + 1; }

    // phi_hat(2^{-j} |xi|) at one mode
    double block_multiplier(int j, std::size_t flat) const;
    // chi(2^{-j} |xi|): the low-pass S_j multiplier (includes the DC mode)
    double lowpass_multiplier(int j, std::size_t flat) const;

  private:
    const Grid* grid_;
    int j_min_, j_max_;
};

struct NormSpec {
    double s = 0.0;
    double p = 2.0;
    double sigma = 1.0;
    double r = kInf;  // Chemin-Lerner time index
};

// conjugate exponent p/(p-1) with 1' = inf, inf' = 1
double conjugate_exponent(double p);

SpectralField dyadic_block(const DyadicPartition& part, const SpectralField& f, int j);

// (sum_xi |f_cont(xi)|^{p'} dxi^d)^{1/p'}; p = 1 gives sup_xi |f_cont|.
// Coefficients are read in the continuous normalization (spectral_scale).
double fourier_lebesgue_norm(const SpectralField& f, double p);

// l^sigma over blocks of 2^{s j} * block Lebesgue norms. Blocks vanish at
// DC, so the homogeneous norm never sees the zero mode.
double besov_norm(const DyadicPartition& part, const SpectralField& f, const NormSpec& spec);

// |xi|^s-weighted Lebesgue norm. s = 0 includes DC (weight 1); s > 0 kills
// DC; s < 0 with a nonzero DC coefficient is an error.
double fourier_sobolev_norm(const SpectralField& f, double s, double p);

// Chemin-Lerner norm of a sampled time series: per block, an L^r trapezoid
// (or running max) in time of the block Lebesgue norms, then 2^{s j} and
// l^sigma over blocks.
double chemin_lerner_norm(const DyadicPartition& part, std::span<const double> times,
                          std::span<const SpectralField> fields, const NormSpec& spec);

// Same norm from precomputed block Lebesgue norms: series[b][i] is the block
// (j_min + b) norm at times[i]. Lets the solver avoid storing snapshots.
double chemin_lerner_from_blocks(const DyadicPartition& part, std::span<const double> times,
                                 const std::vector<std::vector<double>>& series,
                                 const NormSpec& spec);
// the per-snapshot ingredient for the above
std::vector<double> block_lebesgue_norms(const DyadicPartition& part, const SpectralField& f,
                                         double p);

// multiply coefficients by e^{sqrt(c0 t) |xi|}; guard sqrt(c0 t)|xi|_max <= 700
SpectralField gevrey_weight(const SpectralField& f, double t, double c0);
SpectralField gevrey_unweight(const SpectralField& f, double t, double c0);

// physical-space pointwise product, optionally 2/3-rule dealiased
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g,
                                bool do_dealias = true);

// e^{sqrt(c0 t)|nabla|} ( e^{-sqrt(c0 t)|nabla|} f * e^{-sqrt(c0 t)|nabla|} g )
SpectralField bilinear_Bt(const SpectralField& f, const SpectralField& g, double t, double c0);

struct BonyParts {
    SpectralField low_high;  // sum_k S_{k-1} f * g_k
    SpectralField high_low;  // sum_k f_k * S_{k-1} g
    SpectralField diagonal;  // sum_k f_k * (g_{k-1} + g_k + g_{k+1})
};
BonyParts bony_split(const DyadicPartition& part, const SpectralField& f,
                     const SpectralField& g);

struct BesovError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk::besov
