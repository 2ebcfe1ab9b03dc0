#pragma once

#include "cslab/types.hpp"
#include <functional>

namespace cslab::numcore {

/// Gamma(s) for complex s, Lanczos approximation plus reflection.
/// >= 12 significant digits on |Re s| <= 2, |Im s| <= 50.
cplx complex_gamma(cplx s);

/// log Gamma(s), analytic branch on Re s > 0 (no mod-2pi jumps in Im part).
cplx log_gamma(cplx s);

/// Continuous arg Gamma(1/2 + i omega) along the imaginary direction.
double arg_gamma_half_line(double omega);

struct GaussRule {
    RVec x, w;
};
/// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Regularized one-sided power Fourier transform
///   int x_{sign}^lambda e^{i x sigma / hbar} dx / sqrt(2 pi hbar),
/// computed with Gaussian damping exp(-eps x^2) and Richardson extrapolation
/// in eps. `residual` (optional) receives the extrapolation defect.
cplx regularized_power_ft(cplx lambda, double sigma, double hbar, int sign,
                          double* residual = nullptr);

/// Closed form of the same transform, built from complex_gamma.
cplx power_ft_closed_form(cplx lambda, double sigma, double hbar, int sign);

struct HermiteBasis {
    GridSpec grid;
    int D;
    Mat vectors;   // M x D, column j = h_j sampled on the grid (unit L2 norm)
};

/// First D harmonic-oscillator eigenfunctions sampled on the grid.
/// Throws when the tail of h_{D-1} at the grid edge exceeds 1e-12.
HermiteBasis hermite_basis(const GridSpec& grid, int D);

/// Suggested half width so that all Gaussian tails are below ~1e-16.
double suggest_half_width(double q_span, double hbar, cplx alpha = cplx(0, 1));

/// Dense grid Hamiltonian (-hbar^2 d^2/dx^2 + x^2)/2 with spectral momentum
/// (Fourier differentiation). Returned in GridOperator convention.
GridOperator oscillator_hamiltonian(const GridSpec& grid);

/// Band-limited interpolant of grid samples; construction does one DFT,
/// evaluation is mode summation. Safe to evaluate from several threads.
class FourierInterpolator {
  public:
    FourierInterpolator(const GridSpec& grid, const Vec& values);
    cplx operator()(double x) const;
  private:
    GridSpec g;
    std::vector<cplx> coef;
};

/// Evaluate the band-limited interpolant of values at points xs.
Vec fourier_interpolate(const GridSpec& grid, const Vec& values, const RVec& xs);

/// Thread-safe forward DFT (plan creation serialized).
std::vector<cplx> dft_forward(const std::vector<cplx>& in);

} // namespace cslab::numcore
