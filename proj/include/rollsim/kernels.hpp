#pragma once

#include <cstddef>
#include <string>

namespace rollsim::kernels {

// Data-parallel inner loops used by the trainer, the integrator and the
// linear solver. Every kernel exists as a portable scalar reference and,
// where the CPU supports it, an AVX2/FMA variant. The active backend is
// chosen once at startup (override with ROLLSIM_KERNELS=scalar|avx2 or
// force_backend()). Backends agree to floating-point rounding differences
// (the SIMD variants fuse multiplies and reassociate reductions), so results
// are bit-stable per backend, not across backends.
struct Backend {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // sum_i (a[i]-b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
    // Upper-triangular rank-1 update of a row-major n x n matrix:
    // A[r][c] += x[r]*x[c] for all r <= c.
    void (*rank1_upper)(double* a, const double* x, std::size_t n, std::size_t stride);
    // Composite trapezoid rule over samples (x[i], y[i]); x need not be uniform.
    double (*trapezoid)(const double* x, const double* y, std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when the CPU lacks AVX2+FMA

// The backend selected at startup (env override applied).
const Backend& active();

// Force a backend by name ("scalar", "avx2"); throws ValidationError for an
// unknown or unsupported name. Intended for tests and benchmarking.
void force_backend(const std::string& name);

}  // namespace rollsim::kernels
