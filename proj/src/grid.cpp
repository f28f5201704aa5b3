#include "nsk/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "nsk/kernels.hpp"

namespace nsk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid::Grid(int dim, std::array<int, 3> n, std::array<double, 3> length)
    : dim_(dim), n_(n), length_(length) {
    if (dim < 1 || dim > 3) throw GridError("grid dimension must be 1, 2 or 3");
    modes_ = 1;
    cell_volume_ = 1.0;
    dxi_volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) {
        if (n_[a] < 8 || n_[a] % 2 != 0)
            throw GridError("mode count must be even and >= 8 on axis " + std::to_string(a));
        if (!(length_[a] > 0)) throw GridError("period must be positive");
        modes_ *= static_cast<std::size_t>(n_[a]);
        cell_volume_ *= length_[a] / n_[a];
        dxi_[a] = kTwoPi / length_[a];
        dxi_volume_ *= dxi_[a];
    }
    for (int a = dim_; a < 3; ++a) {
        n_[a] = 1;
        length_[a] = 0.0;
        dxi_[a] = 0.0;
    }
    spectral_scale_ = cell_volume_ * std::pow(kTwoPi, -0.5 * dim_);

    xi_abs2_.resize(modes_);
    conj_.resize(modes_);
    for (int a = 0; a < dim_; ++a) xi_[a].resize(modes_);

    xi_max_ = 0.0;
    xi_min_ = 0.0;
    for (std::size_t i = 0; i < modes_; ++i) {
        double s = 0.0;
        std::size_t rem = i, cidx = 0;
        // row-major: axis 0 slowest
        std::array<std::size_t, 3> idx{};
        for (int a = dim_ - 1; a >= 0; --a) {
            idx[a] = rem % n_[a];
            rem /= n_[a];
        }
        for (int a = 0; a < dim_; ++a) {
            int k = static_cast<int>(idx[a]);
            if (k > n_[a] / 2) k -= n_[a];
            double x = k * dxi_[a];
            xi_[a][i] = x;
            s += x * x;
            // conjugate mode: negate the signed index (n/2 maps to itself)
            int kneg = -k;
            std::size_t uneg = kneg >= 0 ? static_cast<std::size_t>(kneg)
                                         : static_cast<std::size_t>(kneg + n_[a]);
            if (k == n_[a] / 2) uneg = idx[a];
            cidx = cidx * n_[a] + uneg;
        }
        xi_abs2_[i] = s;
        conj_[i] = cidx;
        double r = std::sqrt(s);
        xi_max_ = std::max(xi_max_, r);
        if (r > 0 && (xi_min_ == 0.0 || r < xi_min_)) xi_min_ = r;
    }
}

int Grid::signed_index(int axis, std::size_t flat) const {
    std::size_t rem = flat;
    std::array<std::size_t, 3> idx{};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = rem % n_[a];
        rem /= n_[a];
    }
    int k = static_cast<int>(idx[axis]);
    if (k > n_[axis] / 2) k -= n_[axis];
    return k;
}

std::array<double, 3> Grid::wavevector(std::size_t flat) const {
    if (flat >= modes_) throw GridError("mode index out of range");
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) xi[a] = xi_[a][flat];
    return xi;
}

std::array<double, 3> Grid::coordinate(std::size_t flat) const {
    std::size_t rem = flat;
    std::array<std::size_t, 3> idx{};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = rem % n_[a];
        rem /= n_[a];
    }
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = length_[a] * static_cast<double>(idx[a]) / n_[a];
    return x;
}

// --- FFT plan cache -------------------------------------------------------

namespace {

struct PlanKey {
    int dim;
    std::array<int, 3> n;
    bool operator<(const PlanKey& o) const {
        if (dim != o.dim) return dim < o.dim;
        return n < o.n;
    }
};

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::map<PlanKey, PlanPair>& plan_cache() {
    static std::map<PlanKey, PlanPair> cache;
    return cache;
}
std::mutex plan_mutex;

PlanPair& plans_for(const Grid& g) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    PlanKey key{g.dim(), {g.n(0), g.dim() > 1 ? g.n(1) : 1, g.dim() > 2 ? g.n(2) : 1}};
    auto it = plan_cache().find(key);
    if (it != plan_cache().end()) return it->second;

    std::vector<cplx> buf(g.mode_count());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    int rank = g.dim();
    int dims[3] = {g.n(0), g.n(1), g.n(2)};
    PlanPair pp;
    // FFTW_ESTIMATE keeps planning deterministic and leaves buf untouched
    pp.fwd = fftw_plan_dft(rank, dims, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.bwd = fftw_plan_dft(rank, dims, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    return plan_cache().emplace(key, pp).first->second;
}

}  // namespace

void fft_forward_inplace(const Grid& g, cplx* data) {
    auto& pp = plans_for(g);
    fftw_execute_dft(pp.fwd, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void fft_backward_inplace(const Grid& g, cplx* data) {
    auto& pp = plans_for(g);
    fftw_execute_dft(pp.bwd, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    kernels::scale(data, 1.0 / static_cast<double>(g.mode_count()), g.mode_count());
}

SpectralField transform_forward(const Grid& g, std::span<const double> samples) {
    if (samples.size() != g.mode_count()) throw GridError("sample count != mode count");
    SpectralField f(g);
    for (std::size_t i = 0; i < samples.size(); ++i) f.c[i] = cplx{samples[i], 0.0};
    fft_forward_inplace(g, f.c.data());
    return f;
}

std::vector<double> transform_inverse(const SpectralField& f) {
    std::vector<cplx> buf = f.c;
    fft_backward_inplace(*f.grid, buf.data());
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

// --- spectral calculus ----------------------------------------------------

std::array<SpectralField, 3> gradient(const SpectralField& f) {
    const Grid& g = *f.grid;
    std::array<SpectralField, 3> out;
    for (int a = 0; a < g.dim(); ++a) {
        out[a] = SpectralField(g);
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            out[a].c[i] = cplx{0.0, g.xi_component(a, i)} * f.c[i];
    }
    return out;
}

SpectralField divergence(std::span<const SpectralField> v) {
    const Grid& g = *v[0].grid;
    SpectralField out(g);
    for (int a = 0; a < g.dim(); ++a) {
        if (v[a].size() != g.mode_count()) throw GridError("component size mismatch");
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            out.c[i] += cplx{0.0, g.xi_component(a, i)} * v[a].c[i];
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const Grid& g = *f.grid;
    SpectralField out(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i) out.c[i] = -g.xi_abs2(i) * f.c[i];
    return out;
}

HelmholtzParts helmholtz_project(std::span<const SpectralField> v) {
    const Grid& g = *v[0].grid;
    HelmholtzParts parts;
    for (int a = 0; a < g.dim(); ++a) {
        parts.solenoidal[a] = SpectralField(g);
        parts.potential[a] = SpectralField(g);
    }
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double xi2 = g.xi_abs2(i);
        if (xi2 == 0.0) {
            for (int a = 0; a < g.dim(); ++a) parts.solenoidal[a].c[i] = v[a].c[i];
            continue;
        }
        cplx dot{0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) dot += g.xi_component(a, i) * v[a].c[i];
        for (int a = 0; a < g.dim(); ++a) {
            cplx longi = g.xi_component(a, i) * dot / xi2;
            parts.potential[a].c[i] = longi;
            parts.solenoidal[a].c[i] = v[a].c[i] - longi;
        }
    }
    return parts;
}

std::array<SpectralField, 3> lame_apply(std::span<const SpectralField> v, double mu,
                                        double lambda_visc) {
    const Grid& g = *v[0].grid;
    if (!(mu > 0) || !(lambda_visc + 2.0 * mu > 0))
        throw GridError("Lame operator requires mu > 0 and lambda + 2 mu > 0");
    std::array<SpectralField, 3> out;
    for (int a = 0; a < g.dim(); ++a) out[a] = SpectralField(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double xi2 = g.xi_abs2(i);
        cplx dot{0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) dot += g.xi_component(a, i) * v[a].c[i];
        for (int a = 0; a < g.dim(); ++a)
            out[a].c[i] =
                -mu * xi2 * v[a].c[i] - (lambda_visc + mu) * g.xi_component(a, i) * dot;
    }
    return out;
}

double moment(const SpectralField& f) { return f.grid->cell_volume() * f.c[0].real(); }

double hermitian_defect(const SpectralField& f) {
    const Grid& g = *f.grid;
    double worst = 0.0, amp = 0.0;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        amp = std::max(amp, std::abs(f.c[i]));
        worst = std::max(worst, std::abs(f.c[i] - std::conj(f.c[g.conjugate_index(i)])));
    }
    return amp > 0 ? worst / amp : 0.0;
}

void hermitian_symmetrize(SpectralField& f) {
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        std::size_t j = g.conjugate_index(i);
        if (j < i) continue;
        cplx avg = 0.5 * (f.c[i] + std::conj(f.c[j]));
        f.c[i] = avg;
        f.c[j] = std::conj(avg);
    }
}

void dealias(SpectralField& f) {
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < g.mode_count(); ++i)
        for (int a = 0; a < g.dim(); ++a)
            if (3 * std::abs(g.signed_index(a, i)) > g.n(a)) {
                f.c[i] = cplx{0.0, 0.0};
                break;
            }
}

double boundary_shell_fraction(const SpectralField& f) {
    const Grid& g = *f.grid;
    std::vector<double> phys = transform_inverse(f);
    double total = 0.0, shell = 0.0;
    for (std::size_t i = 0; i < phys.size(); ++i) {
        double e = phys[i] * phys[i];
        total += e;
        std::size_t rem = i;
        bool onshell = false;
        for (int a = g.dim() - 1; a >= 0; --a) {
            std::size_t idx = rem % g.n(a);
            rem /= g.n(a);
            // data is centered at the box center; the seam is at index 0
            if (idx == 0 || idx == static_cast<std::size_t>(g.n(a)) - 1) onshell = true;
        }
        if (onshell) shell += e;
    }
    return total > 0 ? shell / total : 0.0;
}

}  // namespace nsk
