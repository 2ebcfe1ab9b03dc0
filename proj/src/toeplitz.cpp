#include "cslab/toeplitz.hpp"
#include "cslab/kernels.hpp"
#include "cslab/numcore.hpp"

#include <cmath>
#include <memory>

namespace cslab::toeplitz {

using metaplectic::conj_matrix;
using metaplectic::moebius;
using metaplectic::metaplectic_operator;
using metaplectic::conj_label_ket;
using metaplectic::conj_label_bra;
using flatstates::coherent_unchecked;
using flatstates::Gaussian2;

// dyad covariance: the Wigner of |psi^a><psi^a| is the gaussian with
// Sigma(a) = (hbar/(2 Im a)) [[|a|^2, -Re a], [-Re a, 1]], so the symbol
// passing from width a' to width a is filtered by exp(k^T (Sigma(a)-Sigma(a')) k / 2).
static Eigen::Matrix2d dyad_covariance(cplx alpha, double hbar) {
    Eigen::Matrix2d S;
    const double f = hbar / (2.0 * alpha.imag());
    S << f * std::norm(alpha), -f * alpha.real(), -f * alpha.real(), f;
    return S;
}

SymbolField reweight_symbol(const SymbolField& h, cplx alpha, cplx alpha_p, double hbar) {
    if (std::abs(alpha - alpha_p) < 1e-15) return h;
    if (!(alpha.imag() > 0) || !(alpha_p.imag() > 0))
        throw std::domain_error("reweight_symbol: widths need Im > 0");
    if (!h.gauss)
        throw std::domain_error("reweight_symbol: the multiplier grows in some Fourier "
                                "direction for any genuine width change (the dyad "
                                "covariances share their determinant), so only "
                                "Gaussian-class symbols reweight");
    // operator form exp((1/2) grad^T B grad) with B = Sigma(alpha_p) - Sigma(alpha)
    Eigen::Matrix2cd B = (dyad_covariance(alpha_p, hbar) - dyad_covariance(alpha, hbar))
                             .cast<cplx>();
    return flatstates::make_gaussian_symbol(h.gauss->heat_matrix(B));
}

DensityOp offdiag_quantize(const OffDiagSymbol& sigma, const QuadBox& box,
                           const GridSpec& grid) {
    const int nq = (int)box.qr.x.size(), np = (int)box.pr.x.size();
    const int K = nq * np;
    Mat kets(grid.M, K), bras(grid.M, K);
    Vec w(K);
    const double tiny = 1e-10;
    bool underflow = false;
    #pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < np; ++b) {
            const int k = a * np + b;
            const PhasePoint z{box.qr.x[a], box.pr.x[b]};
            const Label kl = sigma.map(z);
            GridState ket = coherent_unchecked(kl.z, WidthParam(kl.alpha), grid);
            GridState bra = coherent_unchecked(z, WidthParam(sigma.alpha), grid);
            kets.col(k) = ket.values;
            bras.col(k) = bra.values;
            GridState nrm = (sigma.denom == DenomRule::ParityOverlap)
                ? coherent_unchecked({-z.q, -z.p}, WidthParam(sigma.alpha), grid)
                : bra;
            const cplx den = inner(nrm, ket);
            if (std::abs(den) < tiny) {
                #pragma omp atomic write
                underflow = true;
                w[k] = 0.0;
            } else {
                w[k] = sigma.base.eval(z.q, z.p) * box.qr.w[a] * box.pr.w[b]
                       / (2.0 * pi * grid.hbar) / den * grid.dx();
            }
        }
    if (underflow) throw std::runtime_error("offdiag_quantize: near-orthogonal dyad");
    DensityOp op{grid, Mat::Zero(grid.M, grid.M)};
    kernels::outer_accumulate(op.m, kets, bras, w);
    return op;
}

ConjugationData conjugation_data(const Mat2c& S, cplx alpha) {
    ConjugationData d;
    d.alpha_mid = moebius(conj_matrix(S), alpha);
    if (!(d.alpha_mid.imag() > 0))
        throw std::domain_error("conjugation_data: inadmissible S (mid width)");
    d.alpha_ket = moebius(S.inv().mul(conj_matrix(S)), alpha);
    if (!(d.alpha_ket.imag() > 0))
        throw std::domain_error("conjugation_data: inadmissible S (ket width)");
    const cplx am = d.alpha_mid;
    d.ket = [S, am](PhasePoint z) { return conj_label_ket(S, am, z); };
    d.bra = [S, am](PhasePoint z) { return conj_label_bra(S, am, z); };
    // sanity: the bra width must come back to alpha
    const cplx back = conj_label_bra(S, am, {0.3, -0.7}).alpha;
    if (std::abs(back - alpha) > 1e-10)
        throw std::logic_error("conjugation_data: width bookkeeping broke");
    return d;
}

DensityOp conjugate_by(const Mat2c& S, const DensityOp& H) {
    GridOperator U = metaplectic_operator(S, H.grid);
    GridOperator Ui = metaplectic_operator(S.inv(), H.grid);
    // U(S^-1) and U(S)^-1 agree modulo a global constant; fix it on the
    // ground Gaussian.
    GridState g0 = coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), H.grid);
    const cplx c = inner(g0, GridState{H.grid, Ui.m * (U.m * g0.values)});
    if (std::abs(c) < 1e-8)
        throw std::runtime_error("conjugate_by: could not normalize U(S^-1) U(S)");
    DensityOp out{H.grid, Mat()};
    out.m.noalias() = (Ui.m * H.m * U.m) / c;
    return out;
}

static DensityOp offdiag_from_conjugation(const SymbolField& h, cplx alpha, const Mat2c& S,
                                          const QuadBox& box, const GridSpec& grid) {
    ConjugationData cd = conjugation_data(S, alpha);
    SymbolField hmid = reweight_symbol(h, cd.alpha_mid, alpha, grid.hbar);
    // Int h''(z) |ket(z)><bra(z)| / <bra|ket> dq dp/(2 pi hbar), bra width = alpha
    const int nq = (int)box.qr.x.size(), np = (int)box.pr.x.size();
    const int K = nq * np;
    Mat kets(grid.M, K), bras(grid.M, K);
    Vec w(K);
    bool underflow = false;
    #pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < np; ++b) {
            const int k = a * np + b;
            const PhasePoint z{box.qr.x[a], box.pr.x[b]};
            const Label kl = cd.ket(z);
            const Label bl = cd.bra(z);
            GridState ket = coherent_unchecked(kl.z, WidthParam(kl.alpha), grid);
            GridState bra = coherent_unchecked(bl.z, WidthParam(bl.alpha), grid);
            kets.col(k) = ket.values;
            bras.col(k) = bra.values;
            const cplx den = inner(bra, ket);
            if (std::abs(den) < 1e-10) {
                #pragma omp atomic write
                underflow = true;
                w[k] = 0.0;
            } else {
                w[k] = hmid.eval(z.q, z.p) * box.qr.w[a] * box.pr.w[b]
                       / (2.0 * pi * grid.hbar) / den * grid.dx();
            }
        }
    if (underflow) throw std::runtime_error("offdiag_from_conjugation: near-orthogonal dyad");
    DensityOp op{grid, Mat::Zero(grid.M, grid.M)};
    kernels::outer_accumulate(op.m, kets, bras, w);
    return op;
}

double hermite_block_relnorm(const Mat& A, const Mat& Ref, const GridSpec& grid, int D) {
    auto basis = numcore::hermite_basis(grid, D);
    const double dx = grid.dx();
    Mat a = dx * dx * (basis.vectors.adjoint() * A * basis.vectors);
    Mat r = dx * dx * (basis.vectors.adjoint() * Ref * basis.vectors);
    return (a - r).norm() / r.norm();
}

Residual theorem1_verify(const SymbolField& h, cplx alpha, const Mat2c& S,
                         const QuadBox& box, const GridSpec& grid, int D) {
    flatstates::QuantizeOptions qo;
    qo.scheme = flatstates::Scheme::ToeplitzAW;
    qo.alpha = alpha;
    DensityOp H = flatstates::quantize(h, box, grid, qo);
    DensityOp lhs = conjugate_by(S, H);
    // independent quadrature for the off-diagonal side, so the two routes do
    // not share their discretization error
    QuadBox rbox = QuadBox::make(box.qlo - 0.3, box.qhi + 0.3, box.plo - 0.3, box.phi + 0.3,
                                 (int)(box.qr.x.size() * 1.23) + 7,
                                 (int)(box.pr.x.size() * 1.23) + 7);
    DensityOp rhs = offdiag_from_conjugation(h, alpha, S, rbox, grid);
    auto basis = numcore::hermite_basis(grid, D / 2 + 1);
    const double dx = grid.dx();
    Mat a = dx * dx * (basis.vectors.adjoint() * lhs.m * basis.vectors);
    Mat b = dx * dx * (basis.vectors.adjoint() * rhs.m * basis.vectors);
    return Residual{(a - b).norm() / a.norm(), a.norm()};
}

Residual theorem2_verify(const SymbolField& h, const Mat2c& S,
                         const QuadBox& box, const GridSpec& grid,
                         double test_radius) {
    if (!h.gauss) throw std::invalid_argument("theorem2_verify: needs a Gaussian-class symbol");
    flatstates::QuantizeOptions qo;  // alpha = i
    DensityOp H = flatstates::quantize(h, box, grid, qo);
    DensityOp lhs = conjugate_by(S, H);
    const Gaussian2 heat = h.gauss->heat(grid.hbar / 4.0, grid.hbar / 4.0);
    flatstates::SymbolField w = flatstates::wigner(lhs);
    double sup = 0.0, ref = 0.0;
    const int n = 17;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double q = -test_radius + 2.0 * test_radius * a / (n - 1);
            const double p = -test_radius + 2.0 * test_radius * b / (n - 1);
            // snap q to the grid so the Wigner transform stays exact
            const double qs = std::round(q / grid.dx()) * grid.dx();
            const cplx grid_sym = w.eval(qs, p) * (2.0 * pi * grid.hbar);
            // compose with the linear map the conjugation implements:
            // U^-1 (X;P) U = (a X - b P; -c X + d P)
            const cplx Q = S.a * qs - S.b * p;
            const cplx P = -S.c * qs + S.d * p;
            const cplx ana = heat(Q, P);
            sup = std::max(sup, std::abs(grid_sym - ana));
            ref = std::max(ref, std::abs(ana));
        }
    return Residual{sup / ref, ref};
}

DensityOp c_compose(const Mat2c& S, const SymbolField& h, cplx alpha,
                    const QuadBox& box, const GridSpec& grid) {
    const cplx dt = S.det();
    flatstates::QuantizeOptions qo;
    qo.alpha = alpha;
    if (std::abs(dt - 1.0) < 1e-12) {
        DensityOp H = flatstates::quantize(h, box, grid, qo);
        return conjugate_by(S, H);
    }
    // det = -1: sign-flipped argument, parity-corrected overlap
    const Mat2c Sc = conj_matrix(S);
    const cplx amid = moebius(Sc, alpha);
    if (!(amid.imag() > 0)) throw std::domain_error("c_compose: inadmissible S");
    SymbolField hm = reweight_symbol(h, amid, alpha, grid.hbar);
    const RMat Tsc = metaplectic::transport_matrix(Sc, alpha);
    const RMat Tsci = Tsc.inverse();
    const Mat2c V = S.inv().mul(Sc);
    const cplx aket = moebius(V, alpha);
    if (!(aket.imag() > 0)) throw std::domain_error("c_compose: inadmissible S (ket width)");

    const int nq = (int)box.qr.x.size(), np = (int)box.pr.x.size();
    const int K = nq * np;
    Mat kets(grid.M, K), bras(grid.M, K);
    Vec w(K);
    bool underflow = false;
    #pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < np; ++b) {
            const int k = a * np + b;
            const PhasePoint z{box.qr.x[a], box.pr.x[b]};
            const PhasePoint kz = metaplectic::alpha_transport(V, alpha, z);
            GridState ket = coherent_unchecked(kz, WidthParam(aket), grid);
            GridState bra = coherent_unchecked(z, WidthParam(alpha), grid);
            kets.col(k) = ket.values;
            bras.col(k) = bra.values;
            // parity in the normalizing overlap: <ket | I psi_z> = <ket | psi_{-z}>
            GridState braP = coherent_unchecked({-z.q, -z.p}, WidthParam(alpha), grid);
            const cplx den = inner(braP, ket);
            if (std::abs(den) < 1e-10) {
                #pragma omp atomic write
                underflow = true;
                w[k] = 0.0;
            } else {
                // pushforward of the symbol by T_{S^c}, then the argument flip
                const Eigen::Vector2d arg = Tsci * Eigen::Vector2d(-z.q, -z.p);
                w[k] = hm.eval(arg[0], arg[1]) * box.qr.w[a] * box.pr.w[b]
                       / (2.0 * pi * grid.hbar) / den * grid.dx();
            }
        }
    if (underflow) throw std::runtime_error("c_compose: near-orthogonal parity dyad");
    DensityOp op{grid, Mat::Zero(grid.M, grid.M)};
    kernels::outer_accumulate(op.m, kets, bras, w);
    return op;
}

ProjectorCheck projector_trick_check(const Mat2c& S, cplx alpha, PhasePoint z,
                                     const GridSpec& grid) {
    GridState psi = coherent_unchecked(z, WidthParam(alpha), grid);
    DensityOp P0 = dyad(psi, psi);
    DensityOp P = conjugate_by(S, P0);
    const double idem = (P.m * P.m - P.m).norm() / P.m.norm();
    ConjugationData cd = conjugation_data(S, alpha);
    // U(S)^-1 |psi^amid_z><psi^amid_z| U(S) has the predicted ket/bra labels;
    // here the base dyad has width alpha, so the labels are taken at the point
    // pulled back through the bra map.
    GridState mid = coherent_unchecked(z, WidthParam(cd.alpha_mid), grid);
    DensityOp Pm = conjugate_by(S, dyad(mid, mid));
    Pm.m /= inner(mid, mid).real();
    const Label kl = cd.ket(z);
    GridState kpred = coherent_unchecked(kl.z, WidthParam(kl.alpha), grid);
    kpred.values /= norm(kpred);
    const cplx diag = inner(kpred, apply(Pm, kpred));
    return ProjectorCheck{idem, std::abs(diag - 1.0)};
}

} // namespace cslab::toeplitz
