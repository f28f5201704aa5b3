#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk {

using cplx = std::complex<double>;

// Periodic lattice with per-axis mode count n[a] (even, >= 8) and physical
// period length[a]. Mode storage is row-major over axes in standard FFT
// ordering: per axis 0, 1, ..., n/2, -n/2+1, ..., -1.
class Grid {
  public:
    Grid(int dim, std::array<int, 3> n, std::array<double, 3> length);

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double length(int axis) const { return length_[axis]; }
    std::size_t mode_count() const { return modes_; }
    double cell_volume() const { return cell_volume_; }
    // fundamental wavenumber 2*pi/L
    double dxi(int axis) const { return dxi_[axis]; }
    // product of fundamental wavenumbers: the d-dimensional quadrature weight
    double dxi_volume() const { return dxi_volume_; }
    // maps a stored DFT coefficient to the continuous Fourier coefficient
    // (unitary convention): cell_volume * (2*pi)^{-d/2}
    double spectral_scale() const { return spectral_scale_; }

    // signed index along an axis for a flat mode index
    int signed_index(int axis, std::size_t flat) const;
    std::array<double, 3> wavevector(std::size_t flat) const;
    double xi_abs2(std::size_t flat) const { return xi_abs2_[flat]; }
    double xi_component(int axis, std::size_t flat) const { return xi_[axis][flat]; }
    // flat index of the mode with all signed indices negated
    std::size_t conjugate_index(std::size_t flat) const { return conj_[flat]; }
    double xi_max() const { return xi_max_; }
    // smallest nonzero |xi| on the grid
    double xi_min() const { return xi_min_; }
    // physical coordinate of a sample (cell-centered at origin corner: x = i*L/n)
    std::array<double, 3> coordinate(std::size_t flat) const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
    }

  private:
    int dim_;
    std::array<int, 3> n_;
    std::array<double, 3> length_;
    std::array<double, 3> dxi_;
    std::size_t modes_;
    double cell_volume_;
    double dxi_volume_;
    double spectral_scale_;
    double xi_max_, xi_min_;
    std::array<std::vector<double>, 3> xi_;
    std::vector<double> xi_abs2_;
    std::vector<std::size_t> conj_;
};

// Complex Fourier coefficients of one scalar field.
struct SpectralField {
    const Grid* grid = nullptr;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(&g), c(g.mode_count(), cplx{0.0, 0.0}) {}

    cplx& operator[](std::size_t i) { return c[i]; }
    const cplx& operator[](std::size_t i) const { return c[i]; }
    std::size_t size() const { return c.size(); }
};

// (a, m): density perturbation plus d momentum components, all on one grid.
struct State {
    SpectralField a;
    std::array<SpectralField, 3> m;
    double t = 0.0;

    State() = default;
    explicit State(const Grid& g) : a(g), t(0.0) {
        for (int j = 0; j < g.dim(); ++j) m[j] = SpectralField(g);
    }
    const Grid& grid() const { return *a.grid; }
};

// --- transforms -----------------------------------------------------------

// Unnormalized forward DFT of real samples (sample count must equal mode count).
SpectralField transform_forward(const Grid& g, std::span<const double> samples);
// Inverse of transform_forward (applies the 1/N normalization); returns the
// real part of the backward transform.
std::vector<double> transform_inverse(const SpectralField& f);

// complex-to-complex, used internally and by the bilinear operators
void fft_forward_inplace(const Grid& g, cplx* data);
void fft_backward_inplace(const Grid& g, cplx* data);  // includes 1/N

// --- spectral calculus ----------------------------------------------------

std::array<SpectralField, 3> gradient(const SpectralField& f);
SpectralField divergence(std::span<const SpectralField> v);
SpectralField laplacian(const SpectralField& f);

struct HelmholtzParts {
    std::array<SpectralField, 3> solenoidal;
    std::array<SpectralField, 3> potential;
};
// Id - (-Laplace)^{-1} grad div and its complement; the zero mode goes to the
// solenoidal part so the two parts always sum to the input exactly.
HelmholtzParts helmholtz_project(std::span<const SpectralField> v);

// Lame operator mu*Laplace + (lambda+mu) grad div (Fourier side).
std::array<SpectralField, 3> lame_apply(std::span<const SpectralField> v, double mu,
                                        double lambda_visc);

// integral of f over one period cell: cell_volume * Re(DC coefficient)
double moment(const SpectralField& f);

// max_xi |f(xi) - conj(f(-xi))| / max_xi |f(xi)| (0 for the zero field)
double hermitian_defect(const SpectralField& f);
void hermitian_symmetrize(SpectralField& f);

// zero every mode with any |signed axis index| > n/3 (2/3-rule dealiasing)
void dealias(SpectralField& f);

// fraction of physical-space mass sum(f^2) carried by the outermost cell
// layer; the wrap-around monitor for torus truncation of whole-space data
double boundary_shell_fraction(const SpectralField& f);

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsk
