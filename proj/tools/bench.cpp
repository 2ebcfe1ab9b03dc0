// Timing comparison of the serial reference kernels against the OpenMP ones.

#include "cslab/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace cslab;
using namespace cslab::kernels;
using clk = std::chrono::steady_clock;

namespace {

Mat random_mat(int r, int c, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n;
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

template <typename F>
double time_ms(F&& f, int reps) {
    f();  // warm up
    const auto t0 = clk::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main() {
    std::printf("threads: %d\n\n", thread_count());
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

    {
        const int M = 512, K = 2048;
        Mat kets = random_mat(M, K, 1), bras = random_mat(M, K, 2);
        Vec w = random_mat(K, 1, 3).col(0);
        Mat acc = Mat::Zero(M, M);
        const double ts = time_ms([&] { acc.setZero(); outer_accumulate_serial(acc, kets, bras, w); }, 3);
        const double tp = time_ms([&] { acc.setZero(); outer_accumulate_omp(acc, kets, bras, w); }, 3);
        std::printf("%-28s %10.2f %10.2f %8.2f\n", "outer_accumulate 512x2048", ts, tp, ts / tp);
    }
    {
        GridSpec g(8.0, 1024, 0.1);
        Mat out;
        const double ts = time_ms([&] {
            quadratic_phase_fill_serial(out, g, cplx(0.8, 0.1), cplx(1.0, -0.2), cplx(1.2, 0), 1.0);
        }, 3);
        const double tp = time_ms([&] {
            quadratic_phase_fill_omp(out, g, cplx(0.8, 0.1), cplx(1.0, -0.2), cplx(1.2, 0), 1.0);
        }, 3);
        std::printf("%-28s %10.2f %10.2f %8.2f\n", "quadratic_phase_fill 1024", ts, tp, ts / tp);
    }
    {
        const int M = 768, K = 256;
        Mat rho = random_mat(M, M, 4);
        Mat st = random_mat(M, K, 5);
        Vec vals;
        const double ts = time_ms([&] { sandwich_serial(vals, rho, st); }, 3);
        const double tp = time_ms([&] { sandwich_omp(vals, rho, st); }, 3);
        std::printf("%-28s %10.2f %10.2f %8.2f\n", "sandwich 768x256", ts, tp, ts / tp);
    }
    {
        const int M = 40;
        Mat rho = random_mat(M * M, M * M, 6);
        Mat out;
        const double ts = time_ms([&] { exchange_swap_bra_serial(out, rho, M); }, 5);
        const double tp = time_ms([&] { exchange_swap_bra_omp(out, rho, M); }, 5);
        std::printf("%-28s %10.2f %10.2f %8.2f\n", "exchange_swap 1600^2", ts, tp, ts / tp);
    }
    return 0;
}
