#pragma once

#include "cslab/types.hpp"
#include "cslab/flatstates.hpp"
#include "cslab/metaplectic.hpp"

namespace cslab::toeplitz {

using flatstates::SymbolField;
using flatstates::QuadBox;
using metaplectic::Mat2c;
using metaplectic::Label;

/// Width reweighting: returns g with  Op_alpha[g] = Op_alpha_p[h]  through the
/// Fourier multiplier exp(-i(h/4)(a-a')D_p + i(h/4)(1/a-1/a')D_q).
/// Gaussian symbols are reweighted in closed form; sampled symbols go through
/// an FFT multiplier and require both factors to be damping (domain error
/// otherwise).
SymbolField reweight_symbol(const SymbolField& h, cplx alpha, cplx alpha_p,
                            double hbar);

/// Off-diagonal symbol: weight base(z) on dyads |psi^{map(z)}><psi^{alpha}_z|,
/// the target label given analytically by `map`. The normalizing overlap is
/// either the plain bra-ket one or the parity-corrected one <ket|I psi_z>
/// used by anticanonical compositions.
enum class DenomRule { Overlap, ParityOverlap };
struct OffDiagSymbol {
    SymbolField base;
    cplx alpha;                                  // bra width
    std::function<Label(PhasePoint)> map;        // ket label rule
    DenomRule denom = DenomRule::Overlap;
};

/// T_off[sigma] = Int base(z) |psi_map(z)><psi^alpha_z| / <psi^alpha_z|psi_map(z)>^* ...
/// dyads normalized by the bra-ket overlap; denominators below 1e-10 raise.
DensityOp offdiag_quantize(const OffDiagSymbol& sigma, const QuadBox& box,
                           const GridSpec& grid);

/// Everything Theorem-1 shaped in one bundle: the label data entering the
/// off-diagonal representation of U(S)^-1 H U(S) for a Toeplitz H of width alpha.
struct ConjugationData {
    cplx alpha_mid;   // width the symbol is reweighted to (S^c . alpha)
    cplx alpha_ket;   // ket width (S^-1 S^c . alpha)
    std::function<Label(PhasePoint)> ket;   // ket label at integration point z
    std::function<Label(PhasePoint)> bra;   // bra label at integration point z
};
ConjugationData conjugation_data(const Mat2c& S, cplx alpha);

struct Residual {
    double value;
    double reference_norm;
};

/// U(S)^-1 H U(S) built densely, with the global constant between U(S^-1)
/// and U(S)^-1 normalized away on the ground Gaussian.
DensityOp conjugate_by(const Mat2c& S, const DensityOp& H);

/// Relative Frobenius distance of A to Ref compressed to the first D
/// oscillator states.
double hermite_block_relnorm(const Mat& A, const Mat& Ref, const GridSpec& grid, int D);

/// || U^-1 Op[h] U - T_off[assembled sigma] ||_F / || U^-1 Op[h] U ||_F,
/// compared on the span of the first D/2 oscillator states.
Residual theorem1_verify(const SymbolField& h, cplx alpha, const Mat2c& S,
                         const QuadBox& box, const GridSpec& grid, int D);

/// sup over a real test box of | weyl(U^-1 H U) - heat_extended(h) o S |.
Residual theorem2_verify(const SymbolField& h, const Mat2c& S,
                         const QuadBox& box, const GridSpec& grid,
                         double test_radius);

/// Composition operator C(S) acting on a Toeplitz operator of symbol h:
/// det S = +1 conjugates by U(S); det S = -1 applies the parity-corrected
/// off-diagonal formula (sign-flipped argument, parity-normalized overlap).
DensityOp c_compose(const Mat2c& S, const SymbolField& h, cplx alpha,
                    const QuadBox& box, const GridSpec& grid);

/// Projector check: rel. deviation of U^-1 |psi><psi| U from idempotency, and
/// of its scale factor from 1/<bra|ket>.
struct ProjectorCheck {
    double idempotency;
    double lfactor_dev;
};
ProjectorCheck projector_trick_check(const Mat2c& S, cplx alpha, PhasePoint z,
                                     const GridSpec& grid);

} // namespace cslab::toeplitz
