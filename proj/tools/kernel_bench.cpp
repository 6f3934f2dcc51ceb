// Micro-benchmark for the kernel backends: rates the inner loops the trainer
// leans on. Not a test; numbers are for eyeballing the dispatch payoff.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "rollsim/kernels.hpp"

using rollsim::kernels::Backend;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    return v;
}

template <typename F>
double time_ms(F&& body, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) body();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void run(const Backend& k) {
    const std::size_t n = 1 << 16;
    const auto x = random_vec(n, 1);
    auto y = random_vec(n, 2);
    double sink = 0.0;

    const int reps = 2000;
    const double t_dot = time_ms([&] { sink += k.dot(x.data(), y.data(), n); }, reps);
    const double t_ssd = time_ms([&] { sink += k.sum_sq_diff(x.data(), y.data(), n); }, reps);
    asm volatile("" : "+m"(sink));
    const double t_axpy = time_ms([&] { k.axpy(1e-9, x.data(), y.data(), n); }, reps);

    // trainer-shaped rank-1 update: 41 parameters
    const std::size_t p = 41;
    std::vector<double> a(p * p, 0.0);
    const auto row = random_vec(p, 3);
    const int reps_r1 = 200000;
    const double t_r1 =
        time_ms([&] { k.rank1_upper(a.data(), row.data(), p, p); }, reps_r1);

    const double gflop = 2.0 * n * reps / 1e6;  // MACs counted as 2 flops, ms basis
    std::printf("%-6s  dot %7.2f GF/s  sum_sq_diff %7.2f GF/s  axpy %7.2f GF/s  "
                "rank1(41) %7.2f GF/s\n",
                k.name, gflop / t_dot, gflop / t_ssd, gflop / t_axpy,
                2.0 * (p * (p + 1) / 2.0) * reps_r1 / 1e6 / t_r1);
    if (sink == 42.0) std::printf("\n");  // keep the accumulator alive
}

}  // namespace

int main() {
    run(rollsim::kernels::scalar_backend());
    if (const Backend* v = rollsim::kernels::avx2_backend()) run(*v);
    else std::printf("avx2 backend unavailable on this CPU\n");
    return 0;
}
