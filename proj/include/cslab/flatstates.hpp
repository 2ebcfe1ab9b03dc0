#pragma once

#include "cslab/types.hpp"
#include "cslab/numcore.hpp"
#include <functional>
#include <optional>

namespace cslab::flatstates {

// Phase conventions used throughout:
//   psi_z^alpha(x) = (Im a / (pi hbar |a|^2))^{1/4}
//                    * exp(-i (x-q)^2 / (2 hbar a)) * exp(i p x / hbar) * exp(-i p q / (2 hbar))
// For alpha = i this is the standard Gaussian packet with Bargmann expansion
//   psi_z^i = e^{-|z|^2/(4 hbar)} sum_j zeta^j/sqrt(j!) h_j,  zeta = (q+ip)/sqrt(2 hbar).

/// Coherent state sampled on the grid. Throws when the tail mass at the grid
/// edge exceeds 1e-12.
GridState coherent(PhasePoint z, WidthParam alpha, const GridSpec& grid);
GridState coherent_unchecked(PhasePoint z, WidthParam alpha, const GridSpec& grid);

/// <psi^i_{z1} | psi^i_{z2}> closed form: e^{-|z1-z2|^2/(4h)} e^{i (p2 q1 - p1 q2)/(2h)}.
cplx coherent_overlap_std(PhasePoint z1, PhasePoint z2, double hbar);

/// Complex Gaussian symbol with a possible q-p cross term,
///   h(q,p) = amp exp(-[uq dq^2 + 2 uc dq dp + up dp^2]/2),  dq = q-q0, dp = p-p0.
struct Gaussian2 {
    cplx amp = 1.0;
    cplx q0 = 0.0, p0 = 0.0;   // complex centers appear under exchange maps
    cplx uq = 1.0, up = 1.0, uc = 0.0;
    cplx operator()(cplx q, cplx p) const {
        const cplx dq = q - q0, dp = p - p0;
        return amp * std::exp(-0.5 * (uq * dq * dq + 2.0 * uc * dq * dp + up * dp * dp));
    }
    /// exp((1/2) grad^T B grad) applied exactly (B complex symmetric 2x2).
    Gaussian2 heat_matrix(const Eigen::Matrix2cd& B) const;
    /// exp(sq d^2/dq^2 + sp d^2/dp^2) applied exactly.
    Gaussian2 heat(cplx sq, cplx sp) const;
};

struct SymbolField {
    std::function<cplx(double, double)> eval;
    std::function<cplx(cplx, cplx)> eval_entire;  // optional analytic extension
    std::optional<Gaussian2> gauss;               // set when the symbol is exactly Gaussian
};

SymbolField make_gaussian_symbol(const Gaussian2& g);
SymbolField make_constant_symbol(cplx c);
/// g times exp(-w (q^2 + p^2)/2), squares completed per axis.
Gaussian2 gauss_multiply(const Gaussian2& g, cplx w);

/// Tensor quadrature box for phase-space integrals.
struct QuadBox {
    numcore::GaussRule qr, pr;
    double qlo = 0, qhi = 0, plo = 0, phi = 0;
    static QuadBox make(double qlo, double qhi, double plo, double phi, int nq, int np);
    int size() const { return (int)(qr.x.size() * pr.x.size()); }
};
/// Box centered at the origin sized to cover radius R with spacing ~ c sqrt(hbar).
QuadBox default_box(double R, double hbar, double nodes_per_sqrt_hbar = 3.0);

enum class Scheme { ToeplitzAW, Weyl, KN };

struct QuantizeOptions {
    Scheme scheme = Scheme::ToeplitzAW;
    cplx alpha = cplx(0, 1);       // Toeplitz width
    bool convergence_check = false; // re-run with doubled nodes, throw if drift > 1e-8
};

/// Quantize a symbol on the grid. Toeplitz uses dq dp/(2 pi hbar) with
/// |psi_z^alpha><psi_z^alpha| dyads; Weyl/KN build the integral kernel row by row.
DensityOp quantize(const SymbolField& h, const QuadBox& box, const GridSpec& grid,
                   const QuantizeOptions& opt = {});

/// Matrix of coherent states, column k = psi at box node k (Toeplitz helpers).
Mat coherent_matrix(const QuadBox& box, cplx alpha, const GridSpec& grid);

/// Husimi function  (2 pi hbar)^{-1} <phi_z | rho | phi_z>  as a SymbolField.
SymbolField husimi(const DensityOp& rho);
/// Husimi evaluated with independent holomorphic/antiholomorphic arguments
/// through the sesquiholomorphic coherent-state kernel (1-body).
cplx husimi_analytic(const DensityOp& rho, cplx z_hol, cplx z_anti);

/// Wigner function, normalized so that its phase-space integral equals trace rho.
/// (Equivalently the Weyl symbol of rho divided by 2 pi hbar.)
SymbolField wigner(const DensityOp& rho);

/// Weyl symbol of a grid operator at (x on grid, any p).
cplx weyl_symbol(const GridOperator& op, double x_on_grid, double p);
/// Same on the full (grid x, p list) rectangle.
Mat weyl_symbol_table(const GridOperator& op, const RVec& ps);

struct M1Report {
    double product_residual;     // || M1+ M1- - (I - |h0><h0|) ||
    double commutator_residual;  // || [M1+, M1-] + |h0><h0| || on the first D-1 vectors
    double factorization_residual; // || (M1+ - a+ N^{-1/2}) h_j || over j < D-1
};
/// Shift-matrix demonstration in the truncated oscillator eigenbasis.
M1Report m1_commutator_demo(int D, double hbar);

} // namespace cslab::flatstates
