#pragma once

// Hot inner loops, each in a serial reference version and an OpenMP version.
// The serial versions are kept as oracles for the parallel ones; the bench
// tool compares the two. Production code calls the *_auto dispatchers.

#include "cslab/types.hpp"

namespace cslab::kernels {

// acc += kets * diag(w) * bras^H        (kets, bras are M x K, w length K)
void outer_accumulate_serial(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w);
void outer_accumulate_omp(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w);
void outer_accumulate(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w);

// out(i,j) = amp / sqrt(b) * exp(-i (d x_i^2 - 2 x_i y_j + a y_j^2) / (2 b hbar)) * dx
void quadratic_phase_fill_serial(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp);
void quadratic_phase_fill_omp(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp);
void quadratic_phase_fill(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp);

// vals[k] = v_k^H rho v_k for columns v_k of states
void sandwich_serial(Vec& vals, const Mat& rho, const Mat& states);
void sandwich_omp(Vec& vals, const Mat& rho, const Mat& states);
void sandwich(Vec& vals, const Mat& rho, const Mat& states);

// Two-body kernel slot swaps; rho is (M*M) x (M*M), index (x1*M+x2, y1*M+y2).
// swap_bra exchanges y1<->y2, swap_ket exchanges x1<->x2.
void exchange_swap_bra_serial(Mat& out, const Mat& rho, int M);
void exchange_swap_bra_omp(Mat& out, const Mat& rho, int M);
void exchange_swap_bra(Mat& out, const Mat& rho, int M);
void exchange_swap_ket_serial(Mat& out, const Mat& rho, int M);
void exchange_swap_ket_omp(Mat& out, const Mat& rho, int M);
void exchange_swap_ket(Mat& out, const Mat& rho, int M);

int thread_count();

} // namespace cslab::kernels
