#include "doctest.h"
#include "cslab/kernels.hpp"

#include <random>

using namespace cslab;
using namespace cslab::kernels;

namespace {
Mat random_mat(int r, int c, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n;
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}
} // namespace

TEST_SUITE("kernels") {

TEST_CASE("outer accumulate: omp matches serial") {
    const int M = 40, K = 23;
    Mat kets = random_mat(M, K, 1), bras = random_mat(M, K, 2);
    Vec w = random_mat(K, 1, 3).col(0);
    Mat a = Mat::Zero(M, M), b = Mat::Zero(M, M);
    outer_accumulate_serial(a, kets, bras, w);
    outer_accumulate_omp(b, kets, bras, w);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
    // and against the straightforward dense expression
    Mat ref = kets * w.asDiagonal() * bras.adjoint();
    CHECK((a - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quadratic phase fill: omp matches serial") {
    GridSpec g(5.0, 64, 0.5);
    Mat a, b;
    quadratic_phase_fill_serial(a, g, cplx(0.8, 0.1), cplx(1.0, -0.2), cplx(1.2, 0.0), 1.0);
    quadratic_phase_fill_omp(b, g, cplx(0.8, 0.1), cplx(1.0, -0.2), cplx(1.2, 0.0), 1.0);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sandwich: omp matches serial") {
    const int M = 30, K = 9;
    Mat rho = random_mat(M, M, 4);
    Mat st = random_mat(M, K, 5);
    Vec a, b;
    sandwich_serial(a, rho, st);
    sandwich_omp(b, rho, st);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("exchange swaps: omp matches serial, involutive, commuting") {
    const int M = 8;
    Mat rho = random_mat(M * M, M * M, 6);
    Mat a, b, c, d;
    exchange_swap_bra_serial(a, rho, M);
    exchange_swap_bra_omp(b, rho, M);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    exchange_swap_ket_serial(c, rho, M);
    exchange_swap_ket_omp(d, rho, M);
    CHECK((c - d).cwiseAbs().maxCoeff() == 0.0);
    // U^2 = V^2 = 1 and UV = VU
    Mat t1, t2;
    exchange_swap_bra(t1, a, M);
    CHECK((t1 - rho).cwiseAbs().maxCoeff() == 0.0);
    exchange_swap_ket(t1, a, M);   // V U rho
    exchange_swap_bra(t2, c, M);   // U V rho
    CHECK((t1 - t2).cwiseAbs().maxCoeff() == 0.0);
}

} // TEST_SUITE
