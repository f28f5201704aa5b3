#pragma once

#include <complex>
#include <cstddef>

// Runtime-dispatched arithmetic kernels for the per-mode inner loops.
// Every kernel has a scalar reference implementation and, on x86 with
// AVX2+FMA, a vectorized variant selected once at startup. The two are
// equivalence-tested against each other; reductions use a fixed lane
// order so results are deterministic for a given build.
namespace nsk::kernels {

using cplx = std::complex<double>;

// Which implementation the dispatcher picked ("scalar" or "avx2").
const char* active_backend();

// Force a backend by name; used by the equivalence tests. Returns false
// if the backend is not available on this machine.
bool select_backend(const char* name);

// z[i] *= w[i] (real multiplier applied to complex data).
void apply_real_multiplier(cplx* z, const double* w, std::size_t n);

// z[i] *= s
void scale(cplx* z, double s, std::size_t n);

// y[i] += alpha * x[i]
void axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n);

// c[i] = a[i] * b[i] for real arrays (physical-space products).
void multiply_real(double* c, const double* a, const double* b, std::size_t n);

// sum_i |z_i|^2
double sum_abs2(const cplx* z, std::size_t n);

// max_i |z_i|
double max_abs(const cplx* z, std::size_t n);

}  // namespace nsk::kernels
