#include "cslab/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cslab::kernels {

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void outer_accumulate_serial(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w) {
    const int M = (int)acc.rows(), N = (int)acc.cols(), K = (int)w.size();
    for (int k = 0; k < K; ++k) {
        const cplx wk = w[k];
        for (int j = 0; j < N; ++j) {
            const cplx bj = wk * std::conj(bras(j, k));
            for (int i = 0; i < M; ++i) acc(i, j) += kets(i, k) * bj;
        }
    }
}

void outer_accumulate_omp(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w) {
#ifdef _OPENMP
    const int M = (int)acc.rows(), N = (int)acc.cols(), K = (int)w.size();
    #pragma omp parallel for schedule(static)
    for (int j = 0; j < N; ++j) {
        cplx* col = acc.col(j).data();
        for (int k = 0; k < K; ++k) {
            const cplx bj = w[k] * std::conj(bras(j, k));
            const cplx* kk = kets.col(k).data();
            for (int i = 0; i < M; ++i) col[i] += kk[i] * bj;
        }
    }
#else
    outer_accumulate_serial(acc, kets, bras, w);
#endif
}

void outer_accumulate(Mat& acc, const Mat& kets, const Mat& bras, const Vec& w) {
    outer_accumulate_omp(acc, kets, bras, w);
}

static inline cplx phase_entry(double xi, double yj, cplx a, cplx b, cplx d, double hbar) {
    const cplx q = d * xi * xi - 2.0 * xi * yj + a * yj * yj;
    return std::exp(-iu * q / (2.0 * b * hbar));
}

void quadratic_phase_fill_serial(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp) {
    out.resize(g.M, g.M);
    const cplx c = amp / std::sqrt(b) * g.dx();
    for (int j = 0; j < g.M; ++j) {
        const double yj = g.x(j);
        for (int i = 0; i < g.M; ++i) out(i, j) = c * phase_entry(g.x(i), yj, a, b, d, g.hbar);
    }
}

void quadratic_phase_fill_omp(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp) {
#ifdef _OPENMP
    out.resize(g.M, g.M);
    const cplx c = amp / std::sqrt(b) * g.dx();
    #pragma omp parallel for schedule(static)
    for (int j = 0; j < g.M; ++j) {
        const double yj = g.x(j);
        for (int i = 0; i < g.M; ++i) out(i, j) = c * phase_entry(g.x(i), yj, a, b, d, g.hbar);
    }
#else
    quadratic_phase_fill_serial(out, g, a, b, d, amp);
#endif
}

void quadratic_phase_fill(Mat& out, const GridSpec& g, cplx a, cplx b, cplx d, cplx amp) {
    quadratic_phase_fill_omp(out, g, a, b, d, amp);
}

void sandwich_serial(Vec& vals, const Mat& rho, const Mat& states) {
    const int K = (int)states.cols();
    vals.resize(K);
    for (int k = 0; k < K; ++k) vals[k] = states.col(k).dot(rho * states.col(k));
}

void sandwich_omp(Vec& vals, const Mat& rho, const Mat& states) {
#ifdef _OPENMP
    const int K = (int)states.cols();
    vals.resize(K);
    #pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < K; ++k) vals[k] = states.col(k).dot(rho * states.col(k));
#else
    sandwich_serial(vals, rho, states);
#endif
}

void sandwich(Vec& vals, const Mat& rho, const Mat& states) { sandwich_omp(vals, rho, states); }

void exchange_swap_bra_serial(Mat& out, const Mat& rho, int M) {
    out.resize(rho.rows(), rho.cols());
    for (int y1 = 0; y1 < M; ++y1)
        for (int y2 = 0; y2 < M; ++y2)
            out.col(y1 * M + y2) = rho.col(y2 * M + y1);
}

void exchange_swap_bra_omp(Mat& out, const Mat& rho, int M) {
#ifdef _OPENMP
    out.resize(rho.rows(), rho.cols());
    #pragma omp parallel for collapse(2) schedule(static)
    for (int y1 = 0; y1 < M; ++y1)
        for (int y2 = 0; y2 < M; ++y2)
            out.col(y1 * M + y2) = rho.col(y2 * M + y1);
#else
    exchange_swap_bra_serial(out, rho, M);
#endif
}

void exchange_swap_bra(Mat& out, const Mat& rho, int M) { exchange_swap_bra_omp(out, rho, M); }

void exchange_swap_ket_serial(Mat& out, const Mat& rho, int M) {
    out.resize(rho.rows(), rho.cols());
    for (int x1 = 0; x1 < M; ++x1)
        for (int x2 = 0; x2 < M; ++x2)
            out.row(x1 * M + x2) = rho.row(x2 * M + x1);
}

void exchange_swap_ket_omp(Mat& out, const Mat& rho, int M) {
#ifdef _OPENMP
    out.resize(rho.rows(), rho.cols());
    #pragma omp parallel for collapse(2) schedule(static)
    for (int x1 = 0; x1 < M; ++x1)
        for (int x2 = 0; x2 < M; ++x2)
            out.row(x1 * M + x2) = rho.row(x2 * M + x1);
#else
    exchange_swap_ket_serial(out, rho, M);
#endif
}

void exchange_swap_ket(Mat& out, const Mat& rho, int M) { exchange_swap_ket_omp(out, rho, M); }

} // namespace cslab::kernels
