#pragma once

#include "cslab/types.hpp"
#include <functional>
#include <map>

namespace cslab::spherequant {

// Level-N quantization of the sphere: polynomials of degree < N in z with the
// weighted Bergman product; tau = |z|^2/(1+|z|^2) in [0,1) and hbar = 1/N.
// Basis phi_n = sqrt(c_n) z^n with c_n = N!/(n!(N-1-n)!); states are
// coefficient vectors in this basis.

struct SpherePoly {
    int N;
    Vec coeffs;  // length N
};

double hbar_of(int N);

/// Exact coefficient-space inner product  <P,Q> = sum p_n conj(q_n).
cplx sphere_inner(const SpherePoly& P, const SpherePoly& Q);

/// The same product evaluated by radial Gauss x angular trapezoid quadrature
/// of the defining integral (independent route, used as the oracle).
cplx sphere_inner_quadrature(const SpherePoly& P, const SpherePoly& Q, int radial_nodes = 0);

/// Coherent state rho_z0, reproducing for the inner product.
SpherePoly sphere_coherent(cplx z0, int N);
/// Evaluate a polynomial at a point.
cplx sphere_eval(const SpherePoly& P, cplx z);

/// Stable radial basis magnitude  sqrt(c_n) tau^{n/2} (1-tau)^{(N-1-n)/2}
/// (the measure weight split into the factors).
double radial_basis(int N, int n, double tau);

/// Toeplitz quantization of f(tau, theta): matrix of the multiply-and-project
/// operator in the phi basis.
Mat sphere_toeplitz(const std::function<cplx(double, double)>& f, int N,
                    int radial_nodes = 0);

/// Husimi function <T rho_z, rho_z>/<rho_z, rho_z> at tau, theta.
cplx sphere_husimi(const Mat& T, int N, double tau, double theta);

/// Envelope data: the window atilde (Fourier transform of the circle-average
/// profile) evaluated on slot offsets, plus the induced weights C_n^N.
struct ACoeffs {
    int N;
    std::function<double(double)> atilde;
    RVec CnN;  // length N, all positive
};

/// Default window: smoothed indicator, ~1 on the bulk of [-W, W].
std::function<double(double)> default_window(int N);

/// C_n^N = c_n Int |atilde(tau N - n)|^2 tau^n (1-tau)^{N-1-n} dtau, by
/// adaptive Gauss quadrature (node count doubled until stable).
ACoeffs compute_CnN(const std::function<double(double)>& atilde, int N);

/// Coefficients of the a-coherent state at z (phi basis).
SpherePoly a_coherent(cplx z, const ACoeffs& a);

/// Resolution check: quadrature of Int |psi_z^a><psi_z^a| dmu against
/// diag(C_n^N); returns the max entrywise deviation.
double a_resolution_residual(const ACoeffs& a, int radial_nodes = 0, int angular_nodes = 0);

/// Operator-valued trigonometric symbol of order K, realized on the auxiliary
/// Fourier basis: mode k carries e^{ikx}/zbar^k times a diagonal function of
/// the slot index. The diagonal values are stored in the normalization where
/// the binomial dressing of the quantization has been absorbed, so bands[k][n]
/// is exactly the matrix entry (n, n+k) the quantization must reproduce; the
/// operator composition of two symbols is then the shifted band product.
struct OperatorSymbol {
    int N = 0;
    std::map<int, Vec> bands;    // mode k -> values beta_k(n), n = 0..N-1
    cplx at(int k, int n) const; // beta_k(n), 0 when n or n+k leave the level
};

/// Operator composition: (A B)_k(n) = sum_{k1+k2=k} A_{k1}(n) B_{k2}(n+k1).
OperatorSymbol symbol_product(const OperatorSymbol& A, const OperatorSymbol& B);

/// Banded trigonometric matrix: entry (i, i+k) = gamma_k((i + ceil(k/2)) hbar).
struct TrigCoeffs {
    // mode k -> coefficient function gamma_k(tau)
    std::map<int, std::function<cplx(double)>> gamma;
};
Mat trig_matrix(const TrigCoeffs& g, int N);

/// Exact symbol of a trigonometric matrix (the inverse of Op_a^T on bands).
OperatorSymbol symbol_of_trig(const TrigCoeffs& g, const ACoeffs& a);
/// Identity symbol.
OperatorSymbol identity_symbol(const ACoeffs& a);

/// a-Toeplitz quantization by quadrature over the sphere:
/// Op = Int |psi_z^{(Sigma * C)(z) a}>_a <psi_z^a| dmu_N(z).
Mat a_toeplitz(const OperatorSymbol& Sigma, const ACoeffs& a,
               int radial_nodes = 0, int angular_nodes = 0);

struct Theorem5Residuals {
    double roundtrip_1, roundtrip_2, product;
};
Theorem5Residuals theorem5_verify(const TrigCoeffs& g1, const TrigCoeffs& g2,
                                  const ACoeffs& a);

// --- noncommutative blow-up product (formal series, exact rationals) -------

/// Gaussian-rational coefficient.
struct GRat {
    long long re_n = 0, re_d = 1, im_n = 0, im_d = 1;
    static GRat integer(long long v) { return GRat{v, 1, 0, 1}; }
    bool is_zero() const { return re_n == 0 && im_n == 0; }
};
GRat gr_add(const GRat& x, const GRat& y);
GRat gr_mul(const GRat& x, const GRat& y);
GRat gr_scale(const GRat& x, long long num, long long den);
GRat gr_mul_i(const GRat& x);  // multiply by the imaginary unit
bool gr_eq(const GRat& x, const GRat& y);

/// Polynomial in four slots (u, v, tau, h0) with Gaussian-rational
/// coefficients; used for the shifted-argument product
///   (S # S')(u,v,tau,h0) = sum_j (1/j!) d_v^j S . (-i h0 d_u)^j S'.
struct BlowupPoly {
    std::map<std::array<int, 4>, GRat> terms;
    void add(std::array<int, 4> mono, const GRat& c);
};
BlowupPoly blowup_product(const BlowupPoly& S, const BlowupPoly& Sp, int max_degree);
bool blowup_equal(const BlowupPoly& A, const BlowupPoly& B);
BlowupPoly blowup_pointwise(const BlowupPoly& S, const BlowupPoly& Sp, int max_degree);

} // namespace cslab::spherequant
