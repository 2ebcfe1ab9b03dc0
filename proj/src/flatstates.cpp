#include "cslab/flatstates.hpp"
#include "cslab/kernels.hpp"

#include <cmath>

namespace cslab::flatstates {

GridState coherent_unchecked(PhasePoint z, WidthParam alpha, const GridSpec& grid) {
    const cplx a = alpha.alpha;
    const double hb = grid.hbar;
    const double norm4 = a.imag() / (pi * hb * std::norm(a));
    const cplx amp = std::pow(norm4, 0.25);
    GridState s{grid, Vec(grid.M)};
    for (int j = 0; j < grid.M; ++j) {
        const double x = grid.x(j);
        const cplx ph = -iu * (x - z.q) * (x - z.q) / (2.0 * hb * a)
                        + iu * z.p * x / hb - iu * z.p * z.q / (2.0 * hb);
        s.values[j] = amp * std::exp(ph);
    }
    return s;
}

GridState coherent(PhasePoint z, WidthParam alpha, const GridSpec& grid) {
    GridState s = coherent_unchecked(z, alpha, grid);
    const double tail = (std::norm(s.values[0]) + std::norm(s.values[grid.M - 1])) * grid.dx();
    if (tail > 1e-12) throw std::runtime_error("coherent: state not covered by grid");
    return s;
}

cplx coherent_overlap_std(PhasePoint z1, PhasePoint z2, double hbar) {
    const double d2 = (z1.q - z2.q) * (z1.q - z2.q) + (z1.p - z2.p) * (z1.p - z2.p);
    return std::exp(-d2 / (4.0 * hbar)) *
           std::exp(iu * (z2.p * z1.q - z1.p * z2.q) / (2.0 * hbar));
}

Gaussian2 Gaussian2::heat_matrix(const Eigen::Matrix2cd& B) const {
    // exp((1/2) grad^T B grad) e^{-w^T U w / 2} =
    //   det(I + B U)^{-1/2} e^{-w^T U (I + B U)^{-1} w / 2}
    Eigen::Matrix2cd U;
    U << uq, uc, uc, up;
    const Eigen::Matrix2cd F = Eigen::Matrix2cd::Identity() + B * U;
    const Eigen::Matrix2cd Un = U * F.inverse();
    Gaussian2 g = *this;
    g.amp = amp / std::sqrt(F.determinant());
    g.uq = Un(0, 0);
    g.up = Un(1, 1);
    g.uc = 0.5 * (Un(0, 1) + Un(1, 0));
    return g;
}

Gaussian2 Gaussian2::heat(cplx sq, cplx sp) const {
    Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
    B(0, 0) = 2.0 * sq;
    B(1, 1) = 2.0 * sp;
    return heat_matrix(B);
}

Gaussian2 gauss_multiply(const Gaussian2& g, cplx w) {
    if (g.uc != 0.0) throw std::invalid_argument("gauss_multiply: cross terms not supported");
    auto axis = [w](cplx u, cplx x0, cplx& u_out, cplx& x0_out, cplx& extra) {
        u_out = u + w;
        x0_out = (std::abs(u_out) < 1e-300) ? x0 : u * x0 / u_out;
        extra = std::exp(-0.5 * u * w * x0 * x0 / u_out);
    };
    Gaussian2 out = g;
    cplx e1, e2;
    axis(g.uq, g.q0, out.uq, out.q0, e1);
    axis(g.up, g.p0, out.up, out.p0, e2);
    out.amp = g.amp * e1 * e2;
    return out;
}

SymbolField make_gaussian_symbol(const Gaussian2& g) {
    SymbolField f;
    f.gauss = g;
    f.eval = [g](double q, double p) { return g(cplx(q, 0), cplx(p, 0)); };
    f.eval_entire = [g](cplx q, cplx p) { return g(q, p); };
    return f;
}

SymbolField make_constant_symbol(cplx c) {
    Gaussian2 g;
    g.amp = c;
    g.uq = 0.0;
    g.up = 0.0;
    return make_gaussian_symbol(g);
}

QuadBox QuadBox::make(double qlo, double qhi, double plo, double phi, int nq, int np) {
    return QuadBox{numcore::gauss_legendre(nq, qlo, qhi), numcore::gauss_legendre(np, plo, phi),
                   qlo, qhi, plo, phi};
}

QuadBox default_box(double R, double hbar, double nodes_per_sqrt_hbar) {
    const int n = std::max(24, (int)std::ceil(2.0 * R / std::sqrt(hbar) * nodes_per_sqrt_hbar));
    return QuadBox::make(-R, R, -R, R, n, n);
}

Mat coherent_matrix(const QuadBox& box, cplx alpha, const GridSpec& grid) {
    const int nq = (int)box.qr.x.size(), np = (int)box.pr.x.size();
    Mat kets(grid.M, nq * np);
    WidthParam w(alpha);
    #pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < np; ++b) {
            GridState s = coherent_unchecked({box.qr.x[a], box.pr.x[b]}, w, grid);
            kets.col(a * np + b) = s.values;
        }
    return kets;
}

static DensityOp quantize_toeplitz(const SymbolField& h, const QuadBox& box,
                                   const GridSpec& grid, cplx alpha) {
    const int nq = (int)box.qr.x.size(), np = (int)box.pr.x.size();
    Mat kets = coherent_matrix(box, alpha, grid);
    Vec wts(nq * np);
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < np; ++b)
            wts[a * np + b] = h.eval(box.qr.x[a], box.pr.x[b]) * box.qr.w[a] * box.pr.w[b]
                              / (2.0 * pi * grid.hbar);
    DensityOp op{grid, Mat::Zero(grid.M, grid.M)};
    // dyads carry one dx factor (operator convention)
    Vec w2 = wts * grid.dx();
    kernels::outer_accumulate(op.m, kets, kets, w2);
    return op;
}

static DensityOp quantize_kernel_scheme(const SymbolField& h, const QuadBox& box,
                                        const GridSpec& grid, bool weyl) {
    // Weyl kernel:  K(x,y) = (2 pi hbar)^-1 Int h((x+y)/2, p) e^{i p (x-y)/hbar} dp
    // KN kernel:    same with h(x, p)
    const int M = grid.M;
    DensityOp op{grid, Mat(M, M)};
    const auto& pr = box.pr;
    const int np = (int)pr.x.size();
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        const double x = grid.x(i);
        for (int j = 0; j < M; ++j) {
            const double y = grid.x(j);
            const double mid = weyl ? 0.5 * (x + y) : x;
            cplx acc = 0.0;
            for (int k = 0; k < np; ++k)
                acc += pr.w[k] * h.eval(mid, pr.x[k]) * std::exp(iu * pr.x[k] * (x - y) / grid.hbar);
            op.m(i, j) = acc / (2.0 * pi * grid.hbar) * grid.dx();
        }
    }
    return op;
}

DensityOp quantize(const SymbolField& h, const QuadBox& box, const GridSpec& grid,
                   const QuantizeOptions& opt) {
    auto run = [&](const QuadBox& b) {
        switch (opt.scheme) {
            case Scheme::ToeplitzAW: return quantize_toeplitz(h, b, grid, opt.alpha);
            case Scheme::Weyl:       return quantize_kernel_scheme(h, b, grid, true);
            case Scheme::KN:         return quantize_kernel_scheme(h, b, grid, false);
        }
        throw std::logic_error("quantize: unknown scheme");
    };
    DensityOp op = run(box);
    if (opt.convergence_check) {
        QuadBox fine = QuadBox::make(box.qlo, box.qhi, box.plo, box.phi,
                                     2 * (int)box.qr.x.size(), 2 * (int)box.pr.x.size());
        DensityOp op2 = run(fine);
        if ((op.m - op2.m).norm() > 1e-8 * std::max(1.0, op2.m.norm()))
            throw std::runtime_error("quantize: quadrature not converged (node doubling drift)");
    }
    return op;
}

SymbolField husimi(const DensityOp& rho) {
    const GridSpec grid = rho.grid;
    const Mat m = rho.m;
    SymbolField f;
    f.eval = [grid, m](double q, double p) {
        GridState phi = coherent_unchecked({q, p}, WidthParam(cplx(0, 1)), grid);
        const cplx v = grid.dx() * phi.values.dot(m * phi.values);
        return v / (2.0 * pi * grid.hbar);
    };
    return f;
}

cplx husimi_analytic(const DensityOp& rho, cplx z_hol, cplx z_anti) {
    // W(a, b) = (2 pi h)^-1 e^{(|a|^2+|b|^2)/(4h)} e^{-ab/(2h)} <phi_{conj(b)}| rho |phi_a>
    // where a, b are the holomorphic / antiholomorphic slot values; b = conj(a)
    // recovers the real Husimi function.
    const GridSpec g = rho.grid;
    const double hb = g.hbar;
    GridState ket = coherent_unchecked({z_hol.real(), z_hol.imag()}, WidthParam(cplx(0, 1)), g);
    const cplx zb = std::conj(z_anti);
    GridState bra = coherent_unchecked({zb.real(), zb.imag()}, WidthParam(cplx(0, 1)), g);
    const cplx mat = g.dx() * bra.values.dot(rho.m * ket.values);
    const cplx corr = std::exp((std::norm(z_hol) + std::norm(z_anti)) / (4.0 * hb))
                      * std::exp(-z_hol * z_anti / (2.0 * hb));
    return mat * corr / (2.0 * pi * hb);
}

SymbolField wigner(const DensityOp& rho) {
    const GridSpec grid = rho.grid;
    const Mat K = rho.m / grid.dx();  // back to kernel samples
    SymbolField f;
    f.eval = [grid, K](double q, double p) {
        // W(q,p) = (2 pi hbar)^-1 Int K(q + u/2, q - u/2) e^{-i p u / hbar} du
        // u runs over even multiples of dx so both arguments stay on the grid.
        const int M = grid.M;
        const double dx = grid.dx();
        const int j0 = (int)std::llround(q / dx) + M / 2;
        if (j0 < 0 || j0 >= M) return cplx(0.0);
        cplx acc = 0.0;
        const int kmax = std::min(j0, M - 1 - j0);
        for (int k = -kmax; k <= kmax; ++k) {
            const double u = 2.0 * k * dx;
            acc += K(j0 + k, j0 - k) * std::exp(-iu * p * u / grid.hbar);
        }
        return acc * (2.0 * dx) / (2.0 * pi * grid.hbar);
    };
    return f;
}

cplx weyl_symbol(const GridOperator& op, double x, double p) {
    SymbolField w = wigner(op);
    return w.eval(x, p) * (2.0 * pi * op.grid.hbar);
}

Mat weyl_symbol_table(const GridOperator& op, const RVec& ps) {
    const int M = op.grid.M;
    Mat out(M, ps.size());
    SymbolField w = wigner(op);
    #pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < ps.size(); ++k)
            out(i, k) = w.eval(op.grid.x(i), ps[k]) * (2.0 * pi * op.grid.hbar);
    return out;
}

M1Report m1_commutator_demo(int D, double hbar) {
    if (D < 4) throw std::invalid_argument("m1_commutator_demo: D >= 4");
    Mat up = Mat::Zero(D, D);
    for (int j = 0; j + 1 < D; ++j) up(j + 1, j) = 1.0;
    Mat dn = up.adjoint();
    Mat e00 = Mat::Zero(D, D);
    e00(0, 0) = 1.0;
    const Mat prod = up * dn - (Mat::Identity(D, D) - e00);
    const Mat comm = up * dn - dn * up + e00;
    // commutator restricted to the first D-1 basis vectors (drop the truncation edge)
    const Mat comm_int = comm.topLeftCorner(D - 1, D - 1);

    // Factorization of the shift through the ladder built on the grid:
    // up = a+ * N^{-1/2}, a+ = (X - iP)/sqrt(2), N = (X^2+P^2)/2 + hbar/2,
    // all matrices taken numerically in the sampled eigenbasis.
    GridSpec g(numcore::suggest_half_width(std::sqrt(2.0 * D * hbar), hbar), 512, hbar);
    auto basis = numcore::hermite_basis(g, D);
    GridOperator ham = numcore::oscillator_hamiltonian(g);
    Mat X = Mat::Zero(D, D), P(D, D), N(D, D);
    const double dx = g.dx();
    Mat Hcols = ham.m * basis.vectors;
    for (int m = 0; m < D; ++m)
        for (int j = 0; j < D; ++j)
            N(m, j) = dx * basis.vectors.col(m).dot(Hcols.col(j));
    N += 0.5 * hbar * Mat::Identity(D, D);
    Mat Xcols = basis.vectors;
    for (int i = 0; i < g.M; ++i) Xcols.row(i) *= g.x(i);
    for (int m = 0; m < D; ++m)
        for (int j = 0; j < D; ++j)
            X(m, j) = dx * basis.vectors.col(m).dot(Xcols.col(j));
    // P from the ham: P^2/2 = H - X^2/2, but we want P itself, so use i[H, X]/hbar = -P...
    // Heisenberg: [H, X] = -i hbar P  =>  P = i [H, X] / hbar
    P = iu * (N - 0.5 * hbar * Mat::Identity(D, D)) * X;
    P -= iu * X * (N - 0.5 * hbar * Mat::Identity(D, D));
    P /= hbar;
    Mat ap = (X - iu * P) / std::sqrt(2.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (N + N.adjoint()));
    Mat Ninvh = es.eigenvectors()
                * es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal()
                * es.eigenvectors().adjoint();
    // drop the top column, where the commutator [H, X] loses the out-of-basis piece
    Mat fac = (ap * Ninvh - up).topLeftCorner(D - 1, D - 1);
    return M1Report{prod.norm(), comm_int.norm(), fac.norm()};
}

} // namespace cslab::flatstates
