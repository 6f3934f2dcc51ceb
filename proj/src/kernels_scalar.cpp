#include "rollsim/kernels.hpp"

namespace rollsim::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void rank1_upper_scalar(double* a, const double* x, std::size_t n, std::size_t stride) {
    for (std::size_t r = 0; r < n; ++r) {
        double* row = a + r * stride;
        const double xr = x[r];
        for (std::size_t c = r; c < n; ++c) row[c] += xr * x[c];
    }
}

double trapezoid_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return acc;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend backend{
        "scalar", dot_scalar, axpy_scalar, sum_sq_diff_scalar,
        rank1_upper_scalar, trapezoid_scalar,
    };
    return backend;
}

}  // namespace rollsim::kernels
