#include "cslab/spherequant.hpp"
#include "cslab/numcore.hpp"

#include <cmath>
#include <numeric>

namespace cslab::spherequant {

double hbar_of(int N) { return 1.0 / N; }

static double log_cn(int N, int n) {
    // c_n = N!/(n!(N-1-n)!)
    return std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 0.0);
}

cplx sphere_inner(const SpherePoly& P, const SpherePoly& Q) {
    if (P.N != Q.N) throw std::invalid_argument("sphere_inner: mixed levels");
    cplx s = 0;
    for (int n = 0; n < P.N; ++n) s += P.coeffs[n] * std::conj(Q.coeffs[n]);
    return s;
}

double radial_basis(int N, int n, double tau) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    return std::exp(0.5 * log_cn(N, n) + 0.5 * n * std::log(tau)
                    + 0.5 * (N - 1 - n) * std::log1p(-tau));
}

cplx sphere_inner_quadrature(const SpherePoly& P, const SpherePoly& Q, int radial_nodes) {
    const int N = P.N;
    if (radial_nodes == 0) radial_nodes = N / 2 + 24;
    const int ntheta = 2 * N + 8;
    numcore::GaussRule rt = numcore::gauss_legendre(radial_nodes, 0.0, 1.0);
    // <P,Q> = (1/2pi) Int P Qbar (1-tau)^{N-1} dtau dtheta, the weight split
    // into the evaluations so nothing overflows at large N.
    cplx acc = 0;
    std::vector<cplx> pw(ntheta), qw(ntheta);
    for (int r = 0; r < radial_nodes; ++r) {
        const double tau = rt.x[r];
        for (int t = 0; t < ntheta; ++t) {
            const double th = 2.0 * pi * t / ntheta;
            cplx pv = 0, qv = 0;
            for (int n = 0; n < N; ++n) {
                const double rb = radial_basis(N, n, tau);
                const cplx ph = std::exp(iu * (double)n * th);
                pv += P.coeffs[n] * rb * ph;
                qv += Q.coeffs[n] * rb * ph;
            }
            pw[t] = pv;
            qw[t] = qv;
        }
        cplx ang = 0;
        for (int t = 0; t < ntheta; ++t) ang += pw[t] * std::conj(qw[t]);
        acc += rt.w[r] * ang / (double)ntheta;
    }
    return acc;
}

SpherePoly sphere_coherent(cplx z0, int N) {
    SpherePoly s{N, Vec(N)};
    for (int n = 0; n < N; ++n)
        s.coeffs[n] = std::exp(0.5 * log_cn(N, n)) * std::pow(std::conj(z0), n);
    return s;
}

cplx sphere_eval(const SpherePoly& P, cplx z) {
    cplx acc = 0, zp = 1.0;
    for (int n = 0; n < P.N; ++n) {
        acc += P.coeffs[n] * std::exp(0.5 * log_cn(P.N, n)) * zp;
        zp *= z;
    }
    return acc;
}

Mat sphere_toeplitz(const std::function<cplx(double, double)>& f, int N, int radial_nodes) {
    if (radial_nodes == 0) radial_nodes = N + 48;
    const int ntheta = 2 * N + 16;
    numcore::GaussRule rt = numcore::gauss_legendre(radial_nodes, 0.0, 1.0);
    Mat T = Mat::Zero(N, N);
    std::vector<double> rb(N);
    for (int r = 0; r < radial_nodes; ++r) {
        const double tau = rt.x[r];
        // angular Fourier coefficients of f at this radius
        std::vector<cplx> fv(ntheta);
        for (int t = 0; t < ntheta; ++t) fv[t] = f(tau, 2.0 * pi * t / ntheta);
        std::vector<cplx> four = numcore::dft_forward(fv);
        for (int n = 0; n < N; ++n) rb[n] = radial_basis(N, n, tau);
        for (int m = 0; m < N; ++m)
            for (int n = 0; n < N; ++n) {
                // (1/2pi) Int f e^{i(n-m)theta} dtheta = DFT coefficient at m-n
                int k = ((m - n) % ntheta + ntheta) % ntheta;
                T(m, n) += rt.w[r] * rb[m] * rb[n] * four[k] / (double)ntheta;
            }
    }
    return T;
}

cplx sphere_husimi(const Mat& T, int N, double tau, double theta) {
    Vec v(N);
    for (int n = 0; n < N; ++n)
        v[n] = radial_basis(N, n, tau) * std::exp(-iu * (double)n * theta);
    const cplx num = v.dot(T * v);
    const double den = v.squaredNorm();
    return num / den;
}

std::function<double(double)> default_window(int N) {
    const double W = 0.45 * N;
    const double s = std::sqrt((double)N) / 2.0;
    return [W, s](double u) {
        return 0.5 * (std::tanh((u + W) / s) - std::tanh((u - W) / s));
    };
}

ACoeffs compute_CnN(const std::function<double(double)>& atilde, int N) {
    ACoeffs a{N, atilde, RVec(N)};
    int nodes = std::max(200, N);
    RVec prev;
    for (int pass = 0; pass < 6; ++pass) {
        numcore::GaussRule rt = numcore::gauss_legendre(nodes, 0.0, 1.0);
        RVec C = RVec::Zero(N);
        for (int r = 0; r < rt.x.size(); ++r) {
            const double tau = rt.x[r];
            for (int n = 0; n < N; ++n) {
                const double w = atilde(tau * N - n);
                const double rb = radial_basis(N, n, tau);
                C[n] += rt.w[r] * w * w * rb * rb;
            }
        }
        if (prev.size() && (C - prev).cwiseAbs().maxCoeff() < 1e-12) {
            a.CnN = C;
            break;
        }
        prev = C;
        a.CnN = C;
        nodes *= 2;
    }
    for (int n = 0; n < N; ++n)
        if (!(a.CnN[n] > 0)) throw std::runtime_error("compute_CnN: nonpositive weight");
    return a;
}

SpherePoly a_coherent(cplx z, const ACoeffs& a) {
    const int N = a.N;
    const double tau = std::norm(z) / (1.0 + std::norm(z));
    SpherePoly s{N, Vec(N)};
    for (int n = 0; n < N; ++n)
        s.coeffs[n] = a.atilde(tau * N - n) * std::exp(0.5 * log_cn(N, n))
                      * std::pow(std::conj(z), n);
    return s;
}

cplx OperatorSymbol::at(int k, int n) const {
    auto it = bands.find(k);
    if (it == bands.end()) return 0.0;
    if (n < 0 || n >= N || n + k < 0 || n + k >= N) return 0.0;
    return it->second[n];
}

OperatorSymbol symbol_product(const OperatorSymbol& A, const OperatorSymbol& B) {
    OperatorSymbol C;
    C.N = A.N;
    for (const auto& [k1, g1] : A.bands)
        for (const auto& [k2, g2] : B.bands) {
            const int k = k1 + k2;
            auto it = C.bands.find(k);
            if (it == C.bands.end()) it = C.bands.emplace(k, Vec::Zero(C.N)).first;
            for (int n = 0; n < C.N; ++n)
                it->second[n] += A.at(k1, n) * B.at(k2, n + k1);
        }
    return C;
}

static int half_shift(int k) {
    // ceil(k/2): the parity offset of the band sampling
    return (k >= 0) ? (k + 1) / 2 : -((-k) / 2);
}

Mat trig_matrix(const TrigCoeffs& g, int N) {
    Mat M = Mat::Zero(N, N);
    const double hb = hbar_of(N);
    for (const auto& [k, fn] : g.gamma)
        for (int i = 0; i < N; ++i) {
            const int j = i + k;
            if (j < 0 || j >= N) continue;
            M(i, j) = fn((i + half_shift(k)) * hb);
        }
    return M;
}

OperatorSymbol symbol_of_trig(const TrigCoeffs& g, const ACoeffs& a) {
    const int N = a.N;
    const double hb = hbar_of(N);
    OperatorSymbol S;
    S.N = N;
    for (const auto& [k, fn] : g.gamma) {
        Vec band = Vec::Zero(N);
        for (int n = 0; n < N; ++n)
            if (n + k >= 0 && n + k < N) band[n] = fn((n + half_shift(k)) * hb);
        S.bands[k] = band;
    }
    return S;
}

OperatorSymbol identity_symbol(const ACoeffs& a) {
    OperatorSymbol S;
    S.N = a.N;
    S.bands[0] = Vec::Ones(a.N);
    return S;
}

Mat a_toeplitz(const OperatorSymbol& Sigma, const ACoeffs& a,
               int radial_nodes, int angular_nodes) {
    const int N = a.N;
    int K = 0;
    for (const auto& [k, g] : Sigma.bands) K = std::max(K, std::abs(k));
    if (K >= N) throw std::invalid_argument("a_toeplitz: symbol order exceeds the level");
    if (radial_nodes == 0) radial_nodes = 2 * N + 64;
    if (angular_nodes == 0) angular_nodes = 2 * N + 4 * K + 8;
    numcore::GaussRule rt = numcore::gauss_legendre(radial_nodes, 0.0, 1.0);

    // Corrected-envelope coefficients: the symbol mode k moves the window and
    // the radial factor of ket coefficient n to slot n+k (the circle average
    // against C(z) picks exactly that Fourier component); the bra carries the
    // renormalized product's 1/C_m. Band by band the radial integral is then
    // C_{n+k}/C_{n+k}, which is why the calculus is exact.
    Mat Op = Mat::Zero(N, N);
    #pragma omp parallel
    {
        Mat local = Mat::Zero(N, N);
        Vec v(N), w(N);
        #pragma omp for schedule(static)
        for (int r = 0; r < (int)rt.x.size(); ++r) {
            const double tau = rt.x[r];
            std::vector<double> rb(N), win(N);
            for (int j = 0; j < N; ++j) {
                rb[j] = radial_basis(N, j, tau);
                win[j] = a.atilde(tau * N - j);
            }
            for (int t = 0; t < angular_nodes; ++t) {
                const double th = 2.0 * pi * t / angular_nodes;
                for (int n = 0; n < N; ++n) {
                    cplx acc = 0;
                    for (const auto& [k, band] : Sigma.bands) {
                        const int j = n + k;
                        if (j < 0 || j >= N) continue;
                        const cplx b = band[n];
                        if (b == 0.0) continue;
                        acc += b * win[j] * rb[j] * std::exp(-iu * (double)j * th);
                    }
                    v[n] = acc;
                }
                for (int m = 0; m < N; ++m)
                    w[m] = (1.0 / a.CnN[m]) * win[m] * rb[m] * std::exp(iu * (double)m * th);
                const double nodew = rt.w[r] / (double)angular_nodes;
                local.noalias() += nodew * v * w.transpose();
            }
        }
        #pragma omp critical
        Op += local;
    }
    return Op;
}

Theorem5Residuals theorem5_verify(const TrigCoeffs& g1, const TrigCoeffs& g2,
                                  const ACoeffs& a) {
    const int N = a.N;
    Mat M1 = trig_matrix(g1, N), M2 = trig_matrix(g2, N);
    OperatorSymbol S1 = symbol_of_trig(g1, a), S2 = symbol_of_trig(g2, a);
    Mat Q1 = a_toeplitz(S1, a), Q2 = a_toeplitz(S2, a);
    Mat Q12 = a_toeplitz(symbol_product(S1, S2), a);
    Mat P = M1 * M2;
    return Theorem5Residuals{(Q1 - M1).norm() / std::max(1.0, M1.norm()),
                             (Q2 - M2).norm() / std::max(1.0, M2.norm()),
                             (Q12 - P).norm() / std::max(1.0, P.norm())};
}

// --- exact rational helpers -------------------------------------------------

static void reduce(long long& n, long long& d) {
    if (d < 0) { n = -n; d = -d; }
    const long long g = std::gcd(std::llabs(n), d);
    if (g > 1) { n /= g; d /= g; }
    if (n == 0) d = 1;
}
static void frac_add(long long an, long long ad, long long bn, long long bd,
                     long long& cn, long long& cd) {
    cn = an * bd + bn * ad;
    cd = ad * bd;
    reduce(cn, cd);
}
static void frac_mul(long long an, long long ad, long long bn, long long bd,
                     long long& cn, long long& cd) {
    cn = an * bn;
    cd = ad * bd;
    reduce(cn, cd);
}

GRat gr_add(const GRat& x, const GRat& y) {
    GRat r;
    frac_add(x.re_n, x.re_d, y.re_n, y.re_d, r.re_n, r.re_d);
    frac_add(x.im_n, x.im_d, y.im_n, y.im_d, r.im_n, r.im_d);
    return r;
}
GRat gr_mul(const GRat& x, const GRat& y) {
    GRat r;
    long long t1n, t1d, t2n, t2d;
    frac_mul(x.re_n, x.re_d, y.re_n, y.re_d, t1n, t1d);
    frac_mul(x.im_n, x.im_d, y.im_n, y.im_d, t2n, t2d);
    frac_add(t1n, t1d, -t2n, t2d, r.re_n, r.re_d);
    frac_mul(x.re_n, x.re_d, y.im_n, y.im_d, t1n, t1d);
    frac_mul(x.im_n, x.im_d, y.re_n, y.re_d, t2n, t2d);
    frac_add(t1n, t1d, t2n, t2d, r.im_n, r.im_d);
    return r;
}
GRat gr_scale(const GRat& x, long long num, long long den) {
    GRat r;
    frac_mul(x.re_n, x.re_d, num, den, r.re_n, r.re_d);
    frac_mul(x.im_n, x.im_d, num, den, r.im_n, r.im_d);
    return r;
}
GRat gr_mul_i(const GRat& x) {
    return GRat{-x.im_n, x.im_d, x.re_n, x.re_d};
}
bool gr_eq(const GRat& x, const GRat& y) {
    return x.re_n == y.re_n && x.re_d == y.re_d && x.im_n == y.im_n && x.im_d == y.im_d;
}

void BlowupPoly::add(std::array<int, 4> mono, const GRat& c) {
    if (c.is_zero()) return;
    auto it = terms.find(mono);
    if (it == terms.end()) {
        terms[mono] = c;
    } else {
        it->second = gr_add(it->second, c);
        if (it->second.is_zero()) terms.erase(it);
    }
}

static BlowupPoly derivative(const BlowupPoly& P, int slot) {
    BlowupPoly out;
    for (const auto& [m, c] : P.terms) {
        if (m[slot] == 0) continue;
        auto mm = m;
        mm[slot] -= 1;
        out.add(mm, gr_scale(c, m[slot], 1));
    }
    return out;
}

static BlowupPoly mul_poly(const BlowupPoly& A, const BlowupPoly& B, int max_degree) {
    BlowupPoly out;
    for (const auto& [ma, ca] : A.terms)
        for (const auto& [mb, cb] : B.terms) {
            std::array<int, 4> m;
            int deg = 0;
            for (int s = 0; s < 4; ++s) {
                m[s] = ma[s] + mb[s];
                deg += m[s];
            }
            if (deg > max_degree) throw std::overflow_error("blowup product: degree overflow");
            out.add(m, gr_mul(ca, cb));
        }
    return out;
}

BlowupPoly blowup_pointwise(const BlowupPoly& S, const BlowupPoly& Sp, int max_degree) {
    return mul_poly(S, Sp, max_degree);
}

BlowupPoly blowup_product(const BlowupPoly& S, const BlowupPoly& Sp, int max_degree) {
    // sum_j (1/j!) (d_v^j S) (-i h0)^j (d_u^j Sp); slots: 0 = u, 1 = v, 2 = tau, 3 = h0
    BlowupPoly acc;
    BlowupPoly dS = S;
    BlowupPoly dSp = Sp;
    long long fact = 1;
    for (int j = 0;; ++j) {
        if (j > 0) fact *= j;
        BlowupPoly term = mul_poly(dS, dSp, max_degree);
        for (const auto& [m, c] : term.terms) {
            auto mm = m;
            mm[3] += j;  // h0^j
            GRat v = gr_scale(c, 1, fact);
            for (int rep = 0; rep < j; ++rep) v = gr_mul_i(gr_scale(v, -1, 1));
            if (mm[0] + mm[1] + mm[2] + mm[3] > max_degree)
                throw std::overflow_error("blowup product: degree overflow");
            acc.add(mm, v);
        }
        dS = derivative(dS, 1);
        dSp = derivative(dSp, 0);
        if (dS.terms.empty() || dSp.terms.empty()) break;
    }
    return acc;
}

bool blowup_equal(const BlowupPoly& A, const BlowupPoly& B) {
    if (A.terms.size() != B.terms.size()) return false;
    for (const auto& [m, c] : A.terms) {
        auto it = B.terms.find(m);
        if (it == B.terms.end() || !gr_eq(c, it->second)) return false;
    }
    return true;
}

double a_resolution_residual(const ACoeffs& a, int radial_nodes, int angular_nodes) {
    Mat Op = a_toeplitz(identity_symbol(a), a, radial_nodes, angular_nodes);
    return (Op - Mat::Identity(a.N, a.N)).cwiseAbs().maxCoeff();
}

} // namespace cslab::spherequant
