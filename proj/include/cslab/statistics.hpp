#pragma once

#include "cslab/types.hpp"
#include "cslab/flatstates.hpp"

namespace cslab::statistics {

using flatstates::SymbolField;
using flatstates::QuadBox;

/// Two-particle kernel rho(x1,x2;y1,y2) as a dense (M^2 x M^2) matrix in the
/// same include-the-dx-weights convention as GridOperator (here dx^2).
struct TwoBodyDensity {
    GridSpec grid;
    Mat m;
};

TwoBodyDensity tensor_product(const DensityOp& a, const DensityOp& b);
TwoBodyDensity dyad2(const GridState& u1, const GridState& u2,
                     const GridState& v1, const GridState& v2);
double trace2(const TwoBodyDensity& rho);

/// Exchange maps: U swaps the bra slots (y1<->y2), V the ket slots (x1<->x2).
TwoBodyDensity exchange_U(const TwoBodyDensity& rho);
TwoBodyDensity exchange_V(const TwoBodyDensity& rho);

/// Two-body Husimi at a real phase point.
cplx husimi2(const TwoBodyDensity& rho, PhasePoint z1, PhasePoint z2);
/// Sesquiholomorphic continuation with independent holomorphic and
/// antiholomorphic slot values (a1,a2 | b1,b2).
cplx husimi2_analytic(const TwoBodyDensity& rho, cplx a1, cplx a2, cplx b1, cplx b2);

struct ExchangeResidual {
    double u_residual;
    double v_residual;
    double uv_residual;
};

/// Husimi exchange law: Husimi(U rho) against the exchange factor times the
/// holomorphic-slot swap of Husimi(rho) (and the V / UV variants), max over a
/// fixed sample of phase-space pairs.
ExchangeResidual husimi_exchange_check(const TwoBodyDensity& rho, double hbar);

/// Wigner exchange law in the +/- rotated coordinates, reduced to the minus
/// slot: exchanging the bra slot flips the minus coordinate of y, and the
/// Wigner function of the flipped kernel is the semiclassical symplectic
/// Fourier transform of the original, with swapped evaluation slots.
/// u, v are the rotated minus-slot factors of a product state.
double wigner_exchange_check(const GridState& u, const GridState& v);

/// Cross-Wigner  (2 pi hbar)^-1-normalized, W_{u,v}(q,p), evaluated anywhere
/// via band-limited interpolation of the states.
cplx cross_wigner(const GridState& u, const GridState& v, double q, double p);
cplx cross_wigner(const numcore::FourierInterpolator& fu,
                  const numcore::FourierInterpolator& fv,
                  const GridSpec& g, double q, double p);

enum class ExchangeKind { U, V };

/// Diagonal-Toeplitz rewriting of the exchanged operator in the minus slot:
/// h'(q,p) = h(-s ip, s iq) exp(-(q^2+p^2)/(2 hbar)), s = +1 for U, -1 for V.
/// Requires an entire symbol.
SymbolField toeplitz_exchange(const SymbolField& h, ExchangeKind which, double hbar);

/// Symmetric / antisymmetric projections of a two-body Toeplitz operator
/// built from a product symbol f(z1) g(z2).
struct BoseFermi {
    TwoBodyDensity HB, HF;
    double eigmin_B, eigmin_F;
    double trace_B, trace_F;
};
BoseFermi bose_fermi_project(const SymbolField& f, const SymbolField& g,
                             const QuadBox& box, const GridSpec& grid);

/// Exchange of a 1-body (minus-slot) Toeplitz operator via the composition
/// operator route versus the exact kernel flip; returns both pair residuals
/// so the (12)/(14) assignment can be asserted.
struct Prop3Result {
    double res_B_vs_U;   // C(antidiag -i) against the bra flip
    double res_A_vs_V;   // C(antidiag +i) against the ket flip
};
Prop3Result prop3_check(const SymbolField& h, const QuadBox& box, const GridSpec& grid);

} // namespace cslab::statistics
