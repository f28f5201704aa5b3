#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "nsk/kernels.hpp"

using nsk::kernels::cplx;

namespace {

std::vector<cplx> random_cplx(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> gauss;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx{gauss(rng), gauss(rng)};
    return v;
}

}  // namespace

TEST_CASE("kernel backends agree") {
    const std::string original = nsk::kernels::active_backend();
    if (!nsk::kernels::select_backend("avx2")) {
        // machine without AVX2: only the scalar backend to test
        CHECK(nsk::kernels::select_backend("scalar"));
        return;
    }

    std::mt19937_64 rng(42);
    const std::size_t n = 1037;  // odd length exercises the scalar tail
    std::vector<cplx> x = random_cplx(rng, n), y = random_cplx(rng, n);
    std::vector<double> w(n), a(n), b(n);
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = gauss(rng);
        a[i] = gauss(rng);
        b[i] = gauss(rng);
    }
    cplx alpha{0.7, -0.3};

    struct Result {
        std::vector<cplx> mul, scl, axpy;
        std::vector<double> prod;
        double sum2, mabs;
    };
    auto run = [&](const char* backend) {
        REQUIRE(nsk::kernels::select_backend(backend));
        Result r;
        r.mul = x;
        nsk::kernels::apply_real_multiplier(r.mul.data(), w.data(), n);
        r.scl = x;
        nsk::kernels::scale(r.scl.data(), 1.7, n);
        r.axpy = y;
        nsk::kernels::axpy(r.axpy.data(), alpha, x.data(), n);
        r.prod.resize(n);
        nsk::kernels::multiply_real(r.prod.data(), a.data(), b.data(), n);
        r.sum2 = nsk::kernels::sum_abs2(x.data(), n);
        r.mabs = nsk::kernels::max_abs(x.data(), n);
        return r;
    };

    Result s = run("scalar");
    Result v = run("avx2");
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(s.mul[i] == v.mul[i]);
        CHECK(s.scl[i] == v.scl[i]);
        CHECK(s.prod[i] == v.prod[i]);
        // the vector axpy contracts with FMA, so allow one-ulp-scale slack
        CHECK(std::abs(s.axpy[i] - v.axpy[i]) <= 1e-14 * (1.0 + std::abs(s.axpy[i])));
    }
    CHECK(s.sum2 == doctest::Approx(v.sum2).epsilon(1e-13));
    CHECK(s.mabs == v.mabs);

    nsk::kernels::select_backend(original.c_str());
}

TEST_CASE("backend selection") {
    const std::string original = nsk::kernels::active_backend();
    CHECK(nsk::kernels::select_backend("scalar"));
    CHECK(std::string(nsk::kernels::active_backend()) == "scalar");
    CHECK_FALSE(nsk::kernels::select_backend("not-a-backend"));
    nsk::kernels::select_backend(original.c_str());
}
