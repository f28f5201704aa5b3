#include "nsk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#if defined(__x86_64__) || defined(_M_X64)
#define NSK_X86 1
#include <immintrin.h>
#else
#define NSK_X86 0
#endif

namespace nsk::kernels {

namespace scalar {

void apply_real_multiplier(cplx* z, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= w[i];
}

void scale(cplx* z, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= s;
}

void axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_real(double* c, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) c[i] = a[i] * b[i];
}

double sum_abs2(const cplx* z, std::size_t n) {
    // 4 independent accumulators; the AVX2 variant reduces in the same order.
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (int l = 0; l < 4; ++l) acc[l] += std::norm(z[i + l]);
    for (; i < n; ++i) acc[i % 4] += std::norm(z[i]);
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double max_abs(const cplx* z, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(z[i]));
    return std::sqrt(m);
}

}  // namespace scalar

#if NSK_X86

namespace avx2 {

__attribute__((target("avx2,fma"))) void apply_real_multiplier(cplx* z, const double* w,
                                                               std::size_t n) {
    auto* zr = reinterpret_cast<double*>(z);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m128d wlo = _mm_loadu_pd(w + i);
        __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wlo), 0b01010000);
        __m256d zz = _mm256_loadu_pd(zr + 2 * i);
        _mm256_storeu_pd(zr + 2 * i, _mm256_mul_pd(zz, ww));
    }
    for (; i < n; ++i) z[i] *= w[i];
}

__attribute__((target("avx2,fma"))) void scale(cplx* z, double s, std::size_t n) {
    auto* zr = reinterpret_cast<double*>(z);
    __m256d ss = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(zr + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(zr + 2 * i), ss));
    for (; i < n; ++i) z[i] *= s;
}

__attribute__((target("avx2,fma"))) void axpy(cplx* y, cplx alpha, const cplx* x,
                                              std::size_t n) {
    auto* yr = reinterpret_cast<double*>(y);
    const auto* xr = reinterpret_cast<const double*>(x);
    __m256d ar = _mm256_set1_pd(alpha.real());
    __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xr + 2 * i);
        __m256d yv = _mm256_loadu_pd(yr + 2 * i);
        // (xr,xi) -> (xi,xr) for the imaginary cross terms
        __m256d xsw = _mm256_permute_pd(xv, 0b0101);
        __m256d t = _mm256_fmadd_pd(ar, xv, yv);
        __m256d cross = _mm256_mul_pd(ai, xsw);
        // subtract on real lanes, add on imaginary lanes
        t = _mm256_addsub_pd(t, cross);
        _mm256_storeu_pd(yr + 2 * i, t);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void multiply_real(double* c, const double* a,
                                                       const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(c + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) c[i] = a[i] * b[i];
}

__attribute__((target("avx2,fma"))) double sum_abs2(const cplx* z, std::size_t n) {
    const auto* zr = reinterpret_cast<const double*>(z);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d lo = _mm256_loadu_pd(zr + 2 * i);      // z_i, z_{i+1}
        __m256d hi = _mm256_loadu_pd(zr + 2 * i + 4);  // z_{i+2}, z_{i+3}
        // |z_i|^2+|z_{i+2}|^2 etc. land in the same lanes as the scalar acc[]
        __m256d a = _mm256_mul_pd(lo, lo);
        __m256d b = _mm256_mul_pd(hi, hi);
        __m256d re = _mm256_unpacklo_pd(a, b);
        __m256d im = _mm256_unpackhi_pd(a, b);
        acc = _mm256_add_pd(acc, _mm256_add_pd(re, im));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    // lanes hold (i%4==0)+(i%4==1) interleavings; match scalar pairwise order
    double partial[4] = {lane[0], lane[2], lane[1], lane[3]};
    for (; i < n; ++i) partial[i % 4] += std::norm(z[i]);
    return (partial[0] + partial[1]) + (partial[2] + partial[3]);
}

__attribute__((target("avx2,fma"))) double max_abs(const cplx* z, std::size_t n) {
    const auto* zr = reinterpret_cast<const double*>(z);
    __m256d mx = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(zr + 2 * i);
        __m256d sq = _mm256_mul_pd(v, v);
        __m256d sw = _mm256_permute_pd(sq, 0b0101);
        mx = _mm256_max_pd(mx, _mm256_add_pd(sq, sw));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, mx);
    double m = std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
    for (; i < n; ++i) m = std::max(m, std::norm(z[i]));
    return std::sqrt(m);
}

}  // namespace avx2

#endif  // NSK_X86

namespace {

struct Backend {
    const char* name;
    void (*apply_real_multiplier)(cplx*, const double*, std::size_t);
    void (*scale)(cplx*, double, std::size_t);
    void (*axpy)(cplx*, cplx, const cplx*, std::size_t);
    void (*multiply_real)(double*, const double*, const double*, std::size_t);
    double (*sum_abs2)(const cplx*, std::size_t);
    double (*max_abs)(const cplx*, std::size_t);
};

constexpr Backend kScalar{"scalar",
                          scalar::apply_real_multiplier,
                          scalar::scale,
                          scalar::axpy,
                          scalar::multiply_real,
                          scalar::sum_abs2,
                          scalar::max_abs};

#if NSK_X86
constexpr Backend kAvx2{"avx2",
                        avx2::apply_real_multiplier,
                        avx2::scale,
                        avx2::axpy,
                        avx2::multiply_real,
                        avx2::sum_abs2,
                        avx2::max_abs};
#endif

const Backend* detect() {
#if NSK_X86
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2;
#endif
    return &kScalar;
}

const Backend* g_backend = detect();

}  // namespace

const char* active_backend() { return g_backend->name; }

bool select_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        g_backend = &kScalar;
        return true;
    }
#if NSK_X86
    if (std::strcmp(name, "avx2") == 0 && __builtin_cpu_supports("avx2") &&
        __builtin_cpu_supports("fma")) {
        g_backend = &kAvx2;
        return true;
    }
#endif
    return false;
}

void apply_real_multiplier(cplx* z, const double* w, std::size_t n) {
    g_backend->apply_real_multiplier(z, w, n);
}
void scale(cplx* z, double s, std::size_t n) { g_backend->scale(z, s, n); }
void axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) { g_backend->axpy(y, alpha, x, n); }
void multiply_real(double* c, const double* a, const double* b, std::size_t n) {
    g_backend->multiply_real(c, a, b, n);
}
double sum_abs2(const cplx* z, std::size_t n) { return g_backend->sum_abs2(z, n); }
double max_abs(const cplx* z, std::size_t n) { return g_backend->max_abs(z, n); }

}  // namespace nsk::kernels
