#include "cslab/statistics.hpp"
#include "cslab/kernels.hpp"
#include "cslab/numcore.hpp"
#include "cslab/metaplectic.hpp"
#include "cslab/toeplitz.hpp"

#include <Eigen/Eigenvalues>

namespace cslab::statistics {

using flatstates::coherent_unchecked;

TwoBodyDensity tensor_product(const DensityOp& a, const DensityOp& b) {
    const int M = a.grid.M;
    TwoBodyDensity rho{a.grid, Mat(M * M, M * M)};
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k)
            for (int j = 0; j < M; ++j)
                for (int l = 0; l < M; ++l)
                    rho.m(i * M + k, j * M + l) = a.m(i, j) * b.m(k, l);
    return rho;
}

TwoBodyDensity dyad2(const GridState& u1, const GridState& u2,
                     const GridState& v1, const GridState& v2) {
    const int M = u1.grid.M;
    const double dx2 = u1.grid.dx() * u1.grid.dx();
    Vec ket(M * M), bra(M * M);
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k) {
            ket[i * M + k] = u1.values[i] * u2.values[k];
            bra[i * M + k] = v1.values[i] * v2.values[k];
        }
    TwoBodyDensity rho{u1.grid, Mat()};
    rho.m.noalias() = (dx2 * ket) * bra.adjoint();
    return rho;
}

double trace2(const TwoBodyDensity& rho) { return rho.m.trace().real(); }

TwoBodyDensity exchange_U(const TwoBodyDensity& rho) {
    TwoBodyDensity out{rho.grid, Mat()};
    kernels::exchange_swap_bra(out.m, rho.m, rho.grid.M);
    return out;
}

TwoBodyDensity exchange_V(const TwoBodyDensity& rho) {
    TwoBodyDensity out{rho.grid, Mat()};
    kernels::exchange_swap_ket(out.m, rho.m, rho.grid.M);
    return out;
}

static Vec coherent2(const GridSpec& g, cplx z1, cplx z2) {
    GridState a = coherent_unchecked({z1.real(), z1.imag()}, WidthParam(cplx(0, 1)), g);
    GridState b = coherent_unchecked({z2.real(), z2.imag()}, WidthParam(cplx(0, 1)), g);
    const int M = g.M;
    Vec v(M * M);
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k) v[i * M + k] = a.values[i] * b.values[k];
    return v;
}

cplx husimi2(const TwoBodyDensity& rho, PhasePoint z1, PhasePoint z2) {
    const double dx2 = rho.grid.dx() * rho.grid.dx();
    Vec phi = coherent2(rho.grid, z1.as_complex(), z2.as_complex());
    const cplx v = dx2 * phi.dot(rho.m * phi);
    const double hb = rho.grid.hbar;
    return v / ((2.0 * pi * hb) * (2.0 * pi * hb));
}

cplx husimi2_analytic(const TwoBodyDensity& rho, cplx a1, cplx a2, cplx b1, cplx b2) {
    const double hb = rho.grid.hbar;
    const double dx2 = rho.grid.dx() * rho.grid.dx();
    Vec ket = coherent2(rho.grid, a1, a2);
    Vec bra = coherent2(rho.grid, std::conj(b1), std::conj(b2));
    const cplx mat = dx2 * bra.dot(rho.m * ket);
    const cplx corr = std::exp((std::norm(a1) + std::norm(b1)) / (4.0 * hb) - a1 * b1 / (2.0 * hb))
                    * std::exp((std::norm(a2) + std::norm(b2)) / (4.0 * hb) - a2 * b2 / (2.0 * hb));
    return mat * corr / ((2.0 * pi * hb) * (2.0 * pi * hb));
}

ExchangeResidual husimi_exchange_check(const TwoBodyDensity& rho, double hbar) {
    TwoBodyDensity Ur = exchange_U(rho);
    TwoBodyDensity Vr = exchange_V(rho);
    TwoBodyDensity UVr = exchange_U(Vr);
    const double pts[4] = {-0.9, -0.3, 0.4, 1.1};
    double ru = 0, rv = 0, ruv = 0, scale = 0;
    for (double q1 : pts)
        for (double p1 : {-0.5, 0.7})
            for (double q2 : {-0.8, 0.25})
                for (double p2 : {0.1, 0.9}) {
                    const cplx z1{q1, p1}, z2{q2, p2};
                    const cplx fac = std::exp(-std::norm(z1 - z2) / (2.0 * hbar));
                    const cplx lhsU = husimi2(Ur, {q1, p1}, {q2, p2});
                    const cplx rhsU = fac * husimi2_analytic(rho, z2, z1, std::conj(z1), std::conj(z2));
                    const cplx lhsV = husimi2(Vr, {q1, p1}, {q2, p2});
                    const cplx rhsV = fac * husimi2_analytic(rho, z1, z2, std::conj(z2), std::conj(z1));
                    const cplx lhsUV = husimi2(UVr, {q1, p1}, {q2, p2});
                    const cplx rhsUV = husimi2(rho, {q2, p2}, {q1, p1});
                    ru = std::max(ru, std::abs(lhsU - rhsU));
                    rv = std::max(rv, std::abs(lhsV - rhsV));
                    ruv = std::max(ruv, std::abs(lhsUV - rhsUV));
                    scale = std::max(scale, std::abs(husimi2(rho, {q1, p1}, {q2, p2})));
                }
    return ExchangeResidual{ru / scale, rv / scale, ruv / scale};
}

cplx cross_wigner(const GridState& u, const GridState& v, double q, double p) {
    numcore::FourierInterpolator fu(u.grid, u.values), fv(v.grid, v.values);
    return cross_wigner(fu, fv, u.grid, q, p);
}

cplx cross_wigner(const numcore::FourierInterpolator& fu, const numcore::FourierInterpolator& fv,
                  const GridSpec& g, double q, double p) {
    // (2 pi hbar)^-1 Int u(q + t/2) conj(v(q - t/2)) e^{-i p t / hbar} dt,
    // trapezoid in t: the integrand decays like the state tails at the ends.
    const double hb = g.hbar;
    const double T = 2.0 * std::max(0.2, g.L - std::abs(q));
    const int n = std::max(512, (int)(3.0 * T * std::max(1.0, std::abs(p)) / hb) | 1);
    const double dt = 2.0 * T / (n - 1);
    cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        const double t = -T + k * dt;
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        acc += w * fu(q + 0.5 * t) * std::conj(fv(q - 0.5 * t)) * std::exp(-iu * p * t / hb);
    }
    return acc * dt / (2.0 * pi * hb);
}

double wigner_exchange_check(const GridState& u, const GridState& v) {
    const GridSpec g = u.grid;
    const double hb = g.hbar;
    // minus-slot bra flip: kernel u(x) conj(v(-y))
    GridState vflip{g, Vec(g.M)};
    for (int j = 0; j < g.M; ++j) vflip.values[j] = v.values[(g.M - j) % g.M];
    numcore::FourierInterpolator fu(g, u.values), fv(g, v.values), fvf(g, vflip.values);

    // symplectic transform table of W_{u,v} over a centered box
    const double R = 0.6 * g.L;
    const int nn = 72;
    numcore::GaussRule rq = numcore::gauss_legendre(nn, -R, R);
    numcore::GaussRule rp = numcore::gauss_legendre(nn, -R, R);
    Mat table(nn, nn);
    #pragma omp parallel for collapse(2) schedule(dynamic)
    for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b)
            table(a, b) = cross_wigner(fu, fv, g, rq.x[a], rp.x[b]);

    // flipping the bra slot turns the Wigner function into its own
    // symplectic transform at doubled phase:
    //   W_flip(q,p) = (1/pi hbar) Int W(s,xi) e^{2 i (q xi - p s)/hbar} ds dxi
    double worst = 0, scale = 0;
    for (double qq : {-0.45, 0.2, 0.75})
        for (double pp : {-0.6, 0.15, 0.5}) {
            const cplx lhs = cross_wigner(fu, fvf, g, qq, pp);
            cplx rhs = 0;
            for (int a = 0; a < nn; ++a)
                for (int b = 0; b < nn; ++b)
                    rhs += rq.w[a] * rp.w[b] * table(a, b)
                           * std::exp(2.0 * iu * (qq * rp.x[b] - pp * rq.x[a]) / hb);
            rhs /= (pi * hb);
            worst = std::max(worst, std::abs(lhs - rhs));
            scale = std::max(scale, std::abs(lhs));
        }
    return worst / scale;
}

SymbolField toeplitz_exchange(const SymbolField& h, ExchangeKind which, double hbar) {
    // Diagonal rewriting of the flipped operator, derived in the holomorphic
    // representation: with the normal-ordering dressing E := exp((hbar/2) Lap),
    //   g = E^-1 [ e^{-(q^2+p^2)/hbar} (E h)(-s i p, s i q) ],  s = +1 for the
    // bra flip, -1 for the ket flip. Closed under axis-aligned Gaussians.
    if (!h.gauss)
        throw std::invalid_argument("toeplitz_exchange: needs a Gaussian-class symbol");
    if (h.gauss->uc != 0.0)
        throw std::invalid_argument("toeplitz_exchange: cross terms not supported");
    const double s = (which == ExchangeKind::U) ? 1.0 : -1.0;
    flatstates::Gaussian2 g = h.gauss->heat(hbar / 2.0, hbar / 2.0);
    // substitute (q,p) -> (-s i p, s i q): axis-aligned goes to axis-aligned
    // with swapped, negated widths and rotated complex centers
    flatstates::Gaussian2 sub;
    sub.amp = g.amp;
    sub.uq = -g.up;
    sub.up = -g.uq;
    sub.q0 = iu * s * g.p0;    // (s i q - p0)^2 = -(q + s i p0)^2 ... centers rotate
    sub.p0 = -iu * s * g.q0;
    // fix the center map: h's q-slot receives -s i p, so
    //   (-s i p - q0)^2 = -(p - s i q0)^2  -> up' = -uq, p0' = s i q0
    //   ( s i q - p0)^2 = -(q + s i p0)^2  -> uq' = -up, q0' = -s i p0
    sub.uq = -g.up;
    sub.q0 = -s * iu * g.p0;
    sub.up = -g.uq;
    sub.p0 = s * iu * g.q0;
    // multiply by the gaussian weight e^{-(q^2+p^2)/hbar}
    // (completing squares keeps the quadratic-exponential class; do it through
    // the generic product of exponents)
    flatstates::Gaussian2 out = flatstates::gauss_multiply(sub, 2.0 / hbar);
    out = out.heat(-hbar / 2.0, -hbar / 2.0);
    return flatstates::make_gaussian_symbol(out);
}

BoseFermi bose_fermi_project(const SymbolField& f, const SymbolField& g,
                             const QuadBox& box, const GridSpec& grid) {
    flatstates::QuantizeOptions qo;
    DensityOp A = flatstates::quantize(f, box, grid, qo);
    DensityOp B = flatstates::quantize(g, box, grid, qo);
    TwoBodyDensity H = tensor_product(A, B);
    TwoBodyDensity VH = exchange_V(H);
    TwoBodyDensity UH = exchange_U(H);
    TwoBodyDensity UVH = exchange_U(VH);
    BoseFermi r{TwoBodyDensity{grid, Mat()}, TwoBodyDensity{grid, Mat()}, 0, 0, 0, 0};
    r.HB.m = 0.25 * (H.m + VH.m + UH.m + UVH.m);
    r.HF.m = 0.25 * (H.m - VH.m - UH.m + UVH.m);
    Eigen::SelfAdjointEigenSolver<Mat> eb(0.5 * (r.HB.m + r.HB.m.adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat> ef(0.5 * (r.HF.m + r.HF.m.adjoint()));
    r.eigmin_B = eb.eigenvalues().minCoeff();
    r.eigmin_F = ef.eigenvalues().minCoeff();
    r.trace_B = trace2(r.HB);
    r.trace_F = trace2(r.HF);
    return r;
}

Prop3Result prop3_check(const SymbolField& h, const QuadBox& box, const GridSpec& grid) {
    using metaplectic::Mat2c;
    flatstates::QuantizeOptions qo;
    DensityOp H = flatstates::quantize(h, box, grid, qo);
    // exact kernel flips (the one-body reductions of U and V)
    const int M = grid.M;
    Mat P = Mat::Zero(M, M);
    for (int j = 0; j < M; ++j) P((M - j) % M, j) = 1.0;
    Mat Uh = H.m * P;   // kernel H(x,-y)
    Mat Vh = P * H.m;   // kernel H(-x,y)
    const Mat2c A(0, iu, -iu, 0);
    const Mat2c B(0, -iu, iu, 0);
    DensityOp CA = toeplitz::c_compose(A, h, cplx(0, 1), box, grid);
    DensityOp CB = toeplitz::c_compose(B, h, cplx(0, 1), box, grid);
    return Prop3Result{(CB.m - Uh).norm() / Uh.norm(), (CA.m - Vh).norm() / Vh.norm()};
}

} // namespace cslab::statistics
