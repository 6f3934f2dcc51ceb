#include "rollsim/linalg.hpp"

#include <cmath>

#include "rollsim/kernels.hpp"

namespace rollsim::linalg {

void Matrix::mirror_upper() {
    for (std::size_t r = 1; r < n_; ++r)
        for (std::size_t c = 0; c < r; ++c) a_[r * n_ + c] = a_[c * n_ + r];
}

bool cholesky_factor(Matrix& a) {
    const auto& k = kernels::active();
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        double* ri = a.row(i);
        for (std::size_t j = 0; j < i; ++j) {
            const double* rj = a.row(j);
            ri[j] = (ri[j] - k.dot(ri, rj, j)) / rj[j];
        }
        const double d = ri[i] - k.dot(ri, ri, i);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        ri[i] = std::sqrt(d);
    }
    return true;
}

void cholesky_solve(const Matrix& l, std::vector<double>& b) {
    const auto& k = kernels::active();
    const std::size_t n = l.size();
    for (std::size_t i = 0; i < n; ++i)
        b[i] = (b[i] - k.dot(l.row(i), b.data(), i)) / l(i, i);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= l(j, i) * b[j];
        b[i] = s / l(i, i);
    }
}

std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
    const auto& k = kernels::active();
    const std::size_t n = a.size();
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = k.dot(a.row(r), x.data(), n);
    return y;
}

}  // namespace rollsim::linalg
