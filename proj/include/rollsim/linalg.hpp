#pragma once

#include <cstddef>
#include <vector>

namespace rollsim::linalg {

// Dense row-major square matrix. Small systems only (the trainer's normal
// equations and the beam stiffness, a few hundred rows at most).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
    double* row(std::size_t r) { return a_.data() + r * n_; }
    const double* row(std::size_t r) const { return a_.data() + r * n_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    void set_zero() { a_.assign(a_.size(), 0.0); }
    // Copy the upper triangle onto the lower one.
    void mirror_upper();

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// In-place Cholesky factorization A = L L^T reading the lower triangle.
// Returns false when A is not positive definite.
bool cholesky_factor(Matrix& a);

// Solves L L^T x = b given the factor from cholesky_factor; b is overwritten
// with the solution.
void cholesky_solve(const Matrix& l, std::vector<double>& b);

// Convenience: y = A x for the full dense matrix.
std::vector<double> multiply(const Matrix& a, const std::vector<double>& x);

}  // namespace rollsim::linalg
