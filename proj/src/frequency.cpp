#include "cslab/frequency.hpp"
#include "cslab/flatstates.hpp"

#include <cmath>
#include <algorithm>

namespace cslab::frequency {

using numcore::complex_gamma;
using numcore::arg_gamma_half_line;
using flatstates::coherent_unchecked;

double coherent_hermite_expansion_check(PhasePoint z, const GridSpec& grid, int D) {
    GridState psi = coherent_unchecked(z, WidthParam(cplx(0, 1)), grid);
    auto basis = numcore::hermite_basis(grid, D);
    const double hb = grid.hbar;
    const cplx zeta = cplx(z.q, z.p) / std::sqrt(2.0 * hb);
    Vec series = Vec::Zero(grid.M);
    cplx coef = std::exp(-std::norm(cplx(z.q, z.p)) / (4.0 * hb));
    for (int j = 0; j < D; ++j) {
        series += coef * basis.vectors.col(j);
        coef *= zeta / std::sqrt(j + 1.0);
    }
    return std::sqrt(grid.dx()) * (psi.values - series).norm();
}

// (1/Q) sum_t e^{-i j theta_t} psi_{r e^{i theta_t}} projected onto the basis;
// picks the j-th eigenstate with a positive constant.
static Vec angular_extract(int j, double r, const numcore::HermiteBasis& basis) {
    const GridSpec& g = basis.grid;
    const int Q = 4 * basis.D + 16;
    Vec acc = Vec::Zero(basis.D);
    for (int t = 0; t < Q; ++t) {
        const double th = 2.0 * pi * t / Q;
        GridState s = coherent_unchecked({r * std::cos(th), r * std::sin(th)},
                                         WidthParam(cplx(0, 1)), g);
        Vec proj = g.dx() * (basis.vectors.adjoint() * s.values);
        acc += std::exp(-iu * (double)j * th) * proj / (double)Q;
    }
    return acc;
}

BandOperator build_An(int n, int J, const GridSpec& grid) {
    const int D = J + std::abs(n) + 2;
    auto basis = numcore::hermite_basis(grid, D);
    BandOperator out{n, Mat::Zero(D, D), RVec::Zero(J), 0.0};
    double worst = 0.0;
    for (int j = 0; j < J; ++j) {
        if (j + n < 0 || j + n >= D) continue;
        const double r = std::sqrt(std::max(j, 1) * grid.hbar);
        Vec ket = angular_extract(j + n, r, basis);
        Vec bra = angular_extract(j, r, basis);
        Mat block = ket * bra.adjoint();
        const cplx c = block(j + n, j);
        Mat ref = Mat::Zero(D, D);
        ref(j + n, j) = c;
        worst = std::max(worst, (block - ref).norm() / std::abs(c));
        if (!(c.real() > 0) || std::abs(c.imag()) > 1e-8 * std::abs(c))
            throw std::runtime_error("build_An: block constant not positive");
        out.block_constants[j] = c.real();
        out.matrix += block / c;
    }
    out.structure_residual = worst;
    return out;
}

Band2D build_AN_2d(int n1, int n2, double omega1, double omega2, int J,
                   const GridSpec& grid) {
    // torus integral = product of two circle averages, so the operator is the
    // tensor of two one-mode band operators restricted to the J x J block
    BandOperator A1 = build_An(n1, J, grid);
    BandOperator A2 = build_An(n2, J, grid);
    Band2D out{n1, n2, Mat::Zero(J * J, J * J), 0.0};
    for (int a1 = 0; a1 < J; ++a1)
        for (int a2 = 0; a2 < J; ++a2)
            for (int b1 = 0; b1 < J; ++b1)
                for (int b2 = 0; b2 < J; ++b2)
                    out.matrix(a1 * J + a2, b1 * J + b2) =
                        A1.matrix(a1, b1) * A2.matrix(a2, b2);
    const double hb = grid.hbar;
    double res = 0;
    for (int a = 0; a < J * J; ++a)
        for (int b = 0; b < J * J; ++b) {
            const cplx v = out.matrix(a, b);
            if (std::abs(v) < 1e-6) continue;
            const double Ea = omega1 * (a / J + 0.5) * hb + omega2 * (a % J + 0.5) * hb;
            const double Eb = omega1 * (b / J + 0.5) * hb + omega2 * (b % J + 0.5) * hb;
            res = std::max(res, std::abs((Ea - Eb) / hb - (n1 * omega1 + n2 * omega2)));
        }
    out.derivation_residual = res;
    return out;
}

double frequency_set_distance(double omega1, double omega2, int J, double hbar) {
    double worst = 0;
    for (int a1 = 0; a1 < J; ++a1)
        for (int a2 = 0; a2 < J; ++a2)
            for (int b1 = 0; b1 < J; ++b1)
                for (int b2 = 0; b2 < J; ++b2) {
                    const double Ea = omega1 * (a1 + 0.5) * hbar + omega2 * (a2 + 0.5) * hbar;
                    const double Eb = omega1 * (b1 + 0.5) * hbar + omega2 * (b2 + 0.5) * hbar;
                    const double d = (Ea - Eb) / hbar;
                    double best = 1e300;
                    for (int m1 = -J; m1 <= J; ++m1)
                        for (int m2 = -J; m2 <= J; ++m2)
                            best = std::min(best, std::abs(d - (m1 * omega1 + m2 * omega2)));
                    worst = std::max(worst, best);
                }
    return worst;
}

double nc_torus_check(double theta, int modes) {
    if (modes < 4) throw std::invalid_argument("nc_torus_check: modes >= 4");
    const int dim = 2 * modes + 1;
    Mat U = Mat::Zero(dim, dim), V = Mat::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) U(n + 1, n) = 1.0;  // multiplication by e^{i angle}
    for (int n = 0; n < dim; ++n) V(n, n) = std::exp(iu * theta * (double)(n - modes));
    return (V * U - std::exp(iu * theta) * U * V).norm();
}

Bs1Result bs1_check(double loop_action, double hbar, double tol) {
    const long long k = (long long)std::llround(loop_action / (2.0 * pi * hbar));
    const double defect = std::abs(loop_action - 2.0 * pi * k * hbar) / hbar;
    return Bs1Result{defect <= tol, k, defect};
}

std::pair<cplx, cplx> transmission(const HomoclinicData& hd, double omega) {
    if (!(hd.munu_plus > 0) || !(hd.munu_minus > 0))
        throw std::invalid_argument("transmission: mu nu products must be positive");
    const cplx fp = std::exp(-iu * hd.action_plus / hd.hbar)
                    * std::exp(iu * omega * std::log(hd.munu_plus));
    const cplx fm = std::exp(iu * hd.action_minus / hd.hbar)
                    * std::exp(iu * omega * std::log(hd.munu_minus));
    return {fp, fm};
}

cplx det_condition(const HomoclinicData& hd, double omega) {
    const cplx g = complex_gamma(cplx(0.5, omega)) / std::sqrt(2.0 * pi);
    const cplx A = g * std::exp(-omega * pi / 2.0) * std::exp(iu * pi / 4.0);
    const cplx B = g * std::exp(omega * pi / 2.0) * std::exp(-iu * pi / 4.0);
    auto [fp, fm] = transmission(hd, omega);
    const cplx hpow = std::exp(-iu * omega * std::log(hd.hbar));
    return (A - hpow * fp) * (A - hpow * fm) - B * B;
}

FrequencySpectrum solve_spectrum(const HomoclinicData& hd, double lo, double hi,
                                 int scan_points) {
    if (scan_points == 0)
        scan_points = std::max(2000, (int)(80.0 * (hi - lo) * std::abs(std::log(hd.hbar))));
    FrequencySpectrum out;
    auto f = [&](double w) { return std::abs(det_condition(hd, w)); };
    const double step = (hi - lo) / scan_points;
    double prev2 = f(lo), prev1 = f(lo + step);
    for (int k = 2; k <= scan_points; ++k) {
        const double w = lo + k * step;
        const double cur = f(w);
        if (prev1 < prev2 && prev1 <= cur) {
            double a = w - 2 * step, b = w;
            for (int it = 0; it < 90; ++it) {
                const double m1 = a + 0.381966 * (b - a);
                const double m2 = b - 0.381966 * (b - a);
                if (f(m1) < f(m2)) b = m2; else a = m1;
            }
            const double wr = 0.5 * (a + b);
            const double res = f(wr);
            if (res < 1e-10) {
                out.roots.push_back(wr);
                out.residuals.push_back(res);
                out.branch.push_back(0);
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    return out;
}

FrequencySpectrum closed_form_roots(const HomoclinicData& hd, double lo, double hi) {
    if (!hd.symmetric())
        throw std::invalid_argument("closed_form_roots: symmetric data only");
    const double delta = hd.action_plus / hd.hbar;
    if (std::abs(std::remainder(2.0 * delta, 2.0 * pi)) > 1e-9)
        throw std::invalid_argument("closed_form_roots: branch phases differ; "
                                    "needs the loop action on the pi hbar lattice");
    // The determinant factorizes, (A - F)^2 = B^2, and each factor is a pure
    // phase condition: w log(munu/hbar) - delta - argGamma(1/2+iw) = xi_branch(w)
    // with xi = -beta for A - B and pi/2 + beta for A + B, beta = atan(tanh(pi w/2)).
    const double X = std::log(hd.munu_plus / hd.hbar);
    auto phase_defect = [&](double w, int br) {
        const double beta = std::atan(std::tanh(w * pi / 2.0));
        const double xi = (br > 0) ? -beta : pi / 2.0 + beta;
        return std::remainder(w * X - delta - arg_gamma_half_line(w) - xi, 2.0 * pi);
    };
    FrequencySpectrum out;
    const int n = std::max(4000, (int)(200.0 * (hi - lo) * std::abs(std::log(hd.hbar))));
    for (int br : {+1, -1}) {
        double prev = phase_defect(lo, br);
        for (int k = 1; k <= n; ++k) {
            const double w = lo + k * (hi - lo) / n;
            const double cur = phase_defect(w, br);
            if (prev * cur <= 0.0 && std::abs(prev - cur) < pi) {
                double a = lo + (k - 1) * (hi - lo) / n, b = w, fa = prev;
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fmv = phase_defect(m, br);
                    if (fa * fmv <= 0.0) b = m; else { a = m; fa = fmv; }
                }
                const double wr = 0.5 * (a + b);
                out.roots.push_back(wr);
                out.residuals.push_back(std::abs(det_condition(hd, wr)));
                out.branch.push_back(br);
            }
            prev = cur;
        }
    }
    // sort and drop duplicates (a root sitting exactly on a scan node is
    // detected by both adjacent steps)
    std::vector<size_t> idx(out.roots.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return out.roots[a] < out.roots[b]; });
    FrequencySpectrum ded;
    for (size_t i : idx) {
        if (!ded.roots.empty() && std::abs(out.roots[i] - ded.roots.back()) < 1e-9) continue;
        ded.roots.push_back(out.roots[i]);
        ded.residuals.push_back(out.residuals[i]);
        ded.branch.push_back(out.branch[i]);
    }
    return ded;
}

std::vector<int> frequency_count(HomoclinicData hd, const std::vector<double>& hbars) {
    std::vector<int> counts;
    for (double hb : hbars) {
        hd.hbar = hb;
        FrequencySpectrum s = solve_spectrum(hd, -1.0, 1.0);
        counts.push_back((int)s.roots.size());
    }
    return counts;
}

double spectrum_inclusion_distance(const std::vector<double>& omegas,
                                   double lambda, double T,
                                   const std::vector<double>& reference,
                                   int mmax) {
    double worst = 0;
    for (double w : omegas)
        for (int m = -mmax; m <= mmax; ++m) {
            const double v = lambda * w + 2.0 * pi * m / T;
            double best = 1e300;
            for (double r : reference) best = std::min(best, std::abs(v - r));
            worst = std::max(worst, best);
        }
    return worst;
}

Mat a_beta_ansatz_ho(const std::function<cplx(double, double)>& beta, int J,
                     const GridSpec& grid) {
    const int D = 2 * J + 2;
    auto basis = numcore::hermite_basis(grid, D);
    const int Q = 4 * D + 16;
    Mat out = Mat::Zero(D, D);
    for (int j = 0; j < J; ++j) {
        const double r = std::sqrt(std::max(j, 1) * grid.hbar);
        std::vector<Vec> proj(Q);
        for (int t = 0; t < Q; ++t) {
            const double th = 2.0 * pi * t / Q;
            GridState s = coherent_unchecked({r * std::cos(th), r * std::sin(th)},
                                             WidthParam(cplx(0, 1)), grid);
            proj[t] = grid.dx() * (basis.vectors.adjoint() * s.values);
        }
        // block = (1/Q^2) sum_{t',t} e^{-i j (th' - th)} beta(th', th)
        //          |psi_{th'}><psi_{th}|   (circle-action phase at BS radius)
        Mat P(D, Q);
        for (int t = 0; t < Q; ++t) P.col(t) = proj[t];
        Mat K(Q, Q);
        for (int tp = 0; tp < Q; ++tp)
            for (int t = 0; t < Q; ++t) {
                const double thp = 2.0 * pi * tp / Q;
                const double th = 2.0 * pi * t / Q;
                K(tp, t) = std::exp(-iu * (double)j * (thp - th)) * beta(thp, th)
                           / (double)(Q * Q);
            }
        Mat block = P * K * P.adjoint();
        // measured-constant normalization: scale the dominant entry to 1
        int mi = 0, mj = 0;
        block.cwiseAbs().maxCoeff(&mi, &mj);
        const cplx c = block(mi, mj);
        if (std::abs(c) > 1e-140) out += block / c;
    }
    return out;
}

} // namespace cslab::frequency
