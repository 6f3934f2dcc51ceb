#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "rollsim/errors.hpp"
#include "rollsim/kernels.hpp"

using rollsim::kernels::avx2_backend;
using rollsim::kernels::Backend;
using rollsim::kernels::scalar_backend;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = lo + u * (hi - lo);
    }
    return v;
}

// Reduction results may differ between backends by reassociation only; scale
// the tolerance with the magnitude actually accumulated.
void check_close_sum(double a, double b, double magnitude) {
    CHECK(std::abs(a - b) <= 1e-13 * (magnitude + 1.0));
}

}  // namespace

TEST_CASE("scalar kernels match straightforward definitions") {
    const Backend& k = scalar_backend();
    std::mt19937_64 rng(7);
    const auto x = random_vec(rng, 257);
    const auto y = random_vec(rng, 257);

    double dot = 0.0, ssd = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        ssd += (x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(k.dot(x.data(), y.data(), x.size()) == doctest::Approx(dot).epsilon(1e-14));
    CHECK(k.sum_sq_diff(x.data(), y.data(), x.size()) == doctest::Approx(ssd).epsilon(1e-14));

    // trapezoid of f(x)=x over [0,1] is 1/2 exactly at any resolution
    std::vector<double> xs(101), ys(101);
    for (int i = 0; i <= 100; ++i) xs[i] = ys[i] = i / 100.0;
    CHECK(k.trapezoid(xs.data(), ys.data(), xs.size()) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k.trapezoid(xs.data(), ys.data(), 1) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const Backend* v = avx2_backend();
    if (v == nullptr) return;  // host without AVX2: dispatch covers this case
    const Backend& s = scalar_backend();
    std::mt19937_64 rng(99);

    for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 9ul, 15ul, 64ul, 1001ul}) {
        auto x = random_vec(rng, n, -2.0, 2.0);
        auto y = random_vec(rng, n, -2.0, 2.0);

        double mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
        check_close_sum(s.dot(x.data(), y.data(), n), v->dot(x.data(), y.data(), n), mag);
        check_close_sum(s.sum_sq_diff(x.data(), y.data(), n),
                        v->sum_sq_diff(x.data(), y.data(), n), 4.0 * n);

        auto ys = y, yv = y;
        s.axpy(0.37, x.data(), ys.data(), n);
        v->axpy(0.37, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-14));

        if (n >= 2) {
            auto xs = random_vec(rng, n, 0.0, 1.0);
            std::sort(xs.begin(), xs.end());
            check_close_sum(s.trapezoid(xs.data(), y.data(), n),
                            v->trapezoid(xs.data(), y.data(), n), 4.0 * n);
        }
    }

    for (std::size_t n : {1ul, 3ul, 5ul, 41ul}) {
        auto x = random_vec(rng, n);
        std::vector<double> as(n * n, 0.5), av(n * n, 0.5);
        s.rank1_upper(as.data(), x.data(), n, n);
        v->rank1_upper(av.data(), x.data(), n, n);
        for (std::size_t i = 0; i < n * n; ++i)
            CHECK(as[i] == doctest::Approx(av[i]).epsilon(1e-14));
        // strictly upper-triangular accumulation: below-diagonal untouched
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0; c < r; ++c) CHECK(as[r * n + c] == 0.5);
    }
}

TEST_CASE("backend forcing") {
    CHECK_THROWS_AS(rollsim::kernels::force_backend("neon"), rollsim::ValidationError);
    rollsim::kernels::force_backend("scalar");
    CHECK(std::string(rollsim::kernels::active().name) == "scalar");
    if (avx2_backend() != nullptr) {
        rollsim::kernels::force_backend("avx2");
        CHECK(std::string(rollsim::kernels::active().name) == "avx2");
    } else {
        CHECK_THROWS_AS(rollsim::kernels::force_backend("avx2"), rollsim::ValidationError);
    }
}
