// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must check avx2_backend() != nullptr before use.

#include "rollsim/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace rollsim::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void rank1_upper_avx2(double* a, const double* x, std::size_t n, std::size_t stride) {
    for (std::size_t r = 0; r < n; ++r) {
        double* row = a + r * stride;
        const __m256d xr = _mm256_set1_pd(x[r]);
        std::size_t c = r;
        for (; c + 4 <= n; c += 4) {
            __m256d vr = _mm256_loadu_pd(row + c);
            vr = _mm256_fmadd_pd(xr, _mm256_loadu_pd(x + c), vr);
            _mm256_storeu_pd(row + c, vr);
        }
        const double xs = x[r];
        for (; c < n; ++c) row[c] += xs * x[c];
    }
}

double trapezoid_avx2(const double* x, const double* y, std::size_t n) {
    if (n < 2) return 0.0;
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 5 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
        __m256d sy = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(y + i + 1));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(half, dx), sy, acc);
    }
    double s = hsum(acc);
    for (; i + 1 < n; ++i) s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

}  // namespace

const Backend* avx2_backend() {
    static const Backend backend{
        "avx2", dot_avx2, axpy_avx2, sum_sq_diff_avx2,
        rank1_upper_avx2, trapezoid_avx2,
    };
    const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &backend : nullptr;
}

}  // namespace rollsim::kernels

#else  // non-x86 or AVX2 disabled at compile time

namespace rollsim::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace rollsim::kernels

#endif
