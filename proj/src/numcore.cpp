#include "cslab/numcore.hpp"

#include <cmath>
#include <mutex>
#include <fftw3.h>
#include <Eigen/Eigenvalues>

namespace cslab::numcore {

// Lanczos, g = 7, n = 9 (Godfrey coefficients); relative error ~1e-15 on the
// right half plane after the rational sum.
static const double lanczos_g = 7.0;
static const double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

static cplx lanczos_sum(cplx z) {
    // z here is the argument shifted so the series is evaluated at z-1
    cplx s = lanczos_c[0];
    for (int k = 1; k < 9; ++k) s += lanczos_c[k] / (z - 1.0 + (double)k);
    return s;
}

cplx complex_gamma(cplx s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        throw std::domain_error("complex_gamma: pole at non-positive integer");
    if (s.real() < 0.5) {
        // reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return pi / (std::sin(pi * s) * complex_gamma(1.0 - s));
    }
    const cplx t = s - 1.0 + lanczos_g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, s - 0.5) * std::exp(-t) * lanczos_sum(s);
}

cplx log_gamma(cplx s) {
    if (s.real() < 0.5)
        throw std::domain_error("log_gamma: implemented for Re s >= 1/2");
    const cplx t = s - 1.0 + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (s - 0.5) * std::log(t) - t + std::log(lanczos_sum(s));
}

double arg_gamma_half_line(double omega) {
    // log(t) and log(lanczos_sum) stay in the right half plane for s on
    // Re = 1/2, so the imaginary part of log_gamma is already the
    // continuous branch except for the final std::log;
    // lanczos_sum(1/2 + i w) never circles zero on |w| <= ~1e3.
    return log_gamma(cplx(0.5, omega)).imag();
}

GaussRule gauss_legendre(int n, double a, double b) {
    // Golub-Welsch on the Jacobi matrix.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = beta;
        J(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int k = 0; k < n; ++k) {
        const double xi = es.eigenvalues()[k];
        const double w0 = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
        r.x[k] = 0.5 * (b - a) * xi + 0.5 * (a + b);
        r.w[k] = 0.5 * (b - a) * w0;
    }
    return r;
}

// int_0^inf u^lambda e^{i u sg} e^{-eps u^2} du  via u = v^2 substitution
// (removes the endpoint singularity for Re lambda > -1).
static cplx damped_halfline(cplx lambda, double sg, double eps) {
    // Int_0^inf u^lambda e^{i u sg - eps u^2} du.  Near u = 0 the u^{i Im l}
    // factor oscillates in log u, so that region is integrated from the
    // Taylor series of the exponential; geometric panels then track the log
    // phase, switching to linear panels once the linear phase dominates.
    const double umax = std::sqrt(42.0 / eps);
    const double delta = std::min(0.02 / std::max(1.0, std::abs(sg)), 0.1);
    cplx acc = 0.0;
    {
        // series of e^{i u sg - eps u^2} up to u^8: (i sg u)^a/a! (-eps u^2)^b/b!
        cplx coef[9] = {};
        for (int a2 = 0; a2 <= 8; ++a2)
            for (int b = 0; 2 * b + a2 <= 8; ++b) {
                cplx c = std::pow(iu * sg, a2) * std::pow(-eps, b);
                for (int k = 2; k <= a2; ++k) c /= k;
                for (int k = 2; k <= b; ++k) c /= k;
                coef[a2 + 2 * b] += c;
            }
        for (int j = 0; j <= 8; ++j)
            acc += coef[j] * std::pow(cplx(delta, 0.0), lambda + (double)(j + 1))
                   / (lambda + (double)(j + 1));
    }
    static const GaussRule unit = gauss_legendre(16, 0.0, 1.0);
    const double linw = pi / std::max(std::abs(sg), 1e-3);
    double a = delta;
    while (a < umax) {
        double b = std::min({a * 1.6 + (a > linw ? linw : 0.0), a + linw, umax});
        if (b <= a) b = std::min(a + linw, umax);
        for (int k = 0; k < unit.x.size(); ++k) {
            const double u = a + (b - a) * unit.x[k];
            acc += (b - a) * unit.w[k] * std::pow(cplx(u, 0.0), lambda)
                   * std::exp(iu * (u * sg) - eps * u * u);
        }
        a = b;
    }
    return acc;
}

cplx regularized_power_ft(cplx lambda, double sigma, double hbar, int sign,
                          double* residual) {
    if (sigma == 0.0) throw std::invalid_argument("regularized_power_ft: sigma must be nonzero");
    if (lambda.imag() == 0.0 && lambda.real() == std::floor(lambda.real()))
        throw std::domain_error("regularized_power_ft: lambda must avoid the integers");
    // x_+^lambda: integral over x>0; x_-^lambda: substitute x -> -x.
    // With x = hbar u the transform is hbar^{lambda+1} Int u^lambda e^{i u sigma} du.
    const double sg = (sign > 0 ? sigma : -sigma);
    const double e0 = 1e-2;
    cplx v[3];
    for (int k = 0; k < 3; ++k) v[k] = damped_halfline(lambda, sg, e0 * std::pow(10.0, -k));
    // Richardson in eps (first-order in eps): v(eps) ~ v0 + c eps
    const cplx r1 = (10.0 * v[1] - v[0]) / 9.0;
    const cplx r2 = (10.0 * v[2] - v[1]) / 9.0;
    const cplx ext = (10.0 * r2 - r1) / 9.0;
    const double res = std::abs(r2 - r1);
    if (residual) *residual = res;
    if (res > 1e-3 * std::max(1.0, std::abs(ext)))
        throw std::runtime_error("regularized_power_ft: extrapolation did not converge");
    const cplx hpow = std::pow(cplx(hbar, 0.0), lambda + 1.0);
    return ext * hpow / std::sqrt(2.0 * pi * hbar);
}

cplx power_ft_closed_form(cplx lambda, double sigma, double hbar, int sign) {
    // int x_+^l e^{ix s/h} dx/sqrt(2 pi h)
    //   = i Gamma(l+1) [e^{i l pi/2} s_+^{-l-1} - e^{-i l pi/2} s_-^{-l-1}] h^{l+1}/sqrt(2 pi h)
    // and the x_- version swaps s_+ <-> s_-.
    const cplx g = complex_gamma(lambda + 1.0);
    const cplx ep = std::exp(iu * lambda * pi / 2.0);
    const cplx em = std::exp(-iu * lambda * pi / 2.0);
    const double sp = sigma > 0 ? sigma : 0.0;
    const double sm = sigma < 0 ? -sigma : 0.0;
    const cplx spp = sp > 0 ? std::pow(cplx(sp, 0.0), -lambda - 1.0) : cplx(0.0);
    const cplx smp = sm > 0 ? std::pow(cplx(sm, 0.0), -lambda - 1.0) : cplx(0.0);
    cplx bracket = (sign > 0) ? (ep * spp - em * smp) : (ep * smp - em * spp);
    return iu * g * bracket * std::pow(cplx(hbar, 0.0), lambda + 1.0) / std::sqrt(2.0 * pi * hbar);
}

HermiteBasis hermite_basis(const GridSpec& grid, int D) {
    if (D < 1) throw std::invalid_argument("hermite_basis: D >= 1");
    if (D > grid.M / 4) throw std::invalid_argument("hermite_basis: D must be <= M/4");
    const double s = std::sqrt(grid.hbar);
    Mat H(grid.M, D);
    for (int i = 0; i < grid.M; ++i) {
        const double u = grid.x(i) / s;
        double h0 = std::pow(pi * grid.hbar, -0.25) * std::exp(-0.5 * u * u);
        double h1 = (D > 1) ? h0 * u * std::sqrt(2.0) : 0.0;
        H(i, 0) = h0;
        if (D > 1) H(i, 1) = h1;
        for (int j = 2; j < D; ++j) {
            const double h2 = u * std::sqrt(2.0 / j) * h1 - std::sqrt((j - 1.0) / j) * h0;
            H(i, j) = h2;
            h0 = h1;
            h1 = h2;
        }
    }
    // tail mass of the top state at the edge
    const int M = grid.M;
    double tail = std::norm(H(0, D - 1)) + std::norm(H(M - 1, D - 1));
    if (tail * grid.dx() > 1e-12)
        throw std::runtime_error("hermite_basis: grid too small for requested D");
    return HermiteBasis{grid, D, std::move(H)};
}

double suggest_half_width(double q_span, double hbar, cplx alpha) {
    const double spread = std::abs(alpha) * std::abs(alpha) / alpha.imag();
    return q_span + 10.0 * std::sqrt(hbar * std::max(1.0, spread));
}

GridOperator oscillator_hamiltonian(const GridSpec& grid) {
    const int M = grid.M;
    // momentum-squared by Fourier differentiation: P^2 = F^-1 diag(hbar k)^2 F
    Mat F(M, M);
    const double dk = 2.0 * pi / (2.0 * grid.L);
    std::vector<double> kg(M);
    for (int m = 0; m < M; ++m) kg[m] = dk * (m < M / 2 ? m : m - M);
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < M; ++j)
            F(m, j) = std::exp(-iu * kg[m] * grid.x(j)) / (double)M;
    Mat P2 = Mat::Zero(M, M);
    for (int m = 0; m < M; ++m) P2.row(m) = (grid.hbar * kg[m]) * (grid.hbar * kg[m]) * F.row(m);
    Mat Finv(M, M);
    for (int j = 0; j < M; ++j)
        for (int m = 0; m < M; ++m)
            Finv(j, m) = std::exp(iu * kg[m] * grid.x(j));
    Mat H = 0.5 * (Finv * P2);
    for (int j = 0; j < M; ++j) H(j, j) += 0.5 * grid.x(j) * grid.x(j);
    return GridOperator{grid, std::move(H)};
}

static std::mutex fftw_plan_mutex;

std::vector<cplx> dft_forward(const std::vector<cplx>& in) {
    const int M = (int)in.size();
    fftw_complex* buf = fftw_alloc_complex(M);
    for (int j = 0; j < M; ++j) {
        buf[j][0] = in[j].real();
        buf[j][1] = in[j].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(M, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    std::vector<cplx> out(M);
    for (int m = 0; m < M; ++m) out[m] = cplx(buf[m][0], buf[m][1]);
    fftw_free(buf);
    return out;
}

FourierInterpolator::FourierInterpolator(const GridSpec& grid, const Vec& values)
    : g(grid), coef(grid.M) {
    std::vector<cplx> in(grid.M);
    for (int j = 0; j < grid.M; ++j) in[j] = values[j];
    std::vector<cplx> f = dft_forward(in);
    for (int m = 0; m < grid.M; ++m) coef[m] = f[m] / (double)grid.M;
}

cplx FourierInterpolator::operator()(double x) const {
    const int M = g.M;
    const double dk = pi / g.L;
    const double x0 = x + g.L;  // grid starts at -L
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m) {
        const int km = (m < M / 2) ? m : m - M;
        // the Nyquist mode is split symmetrically so real data stays real
        if (m == M / 2) {
            acc += 0.5 * coef[m] * (std::exp(iu * (dk * km) * x0) + std::exp(-iu * (dk * km) * x0));
        } else {
            acc += coef[m] * std::exp(iu * (dk * km) * x0);
        }
    }
    return acc;
}

Vec fourier_interpolate(const GridSpec& grid, const Vec& values, const RVec& xs) {
    FourierInterpolator it(grid, values);
    Vec out(xs.size());
    for (int t = 0; t < xs.size(); ++t) out[t] = it(xs[t]);
    return out;
}

} // namespace cslab::numcore
