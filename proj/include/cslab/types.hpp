#pragma once

#include <complex>
#include <vector>
#include <stdexcept>
#include <string>
#include <Eigen/Dense>

namespace cslab {

using cplx = std::complex<double>;
using Vec  = Eigen::VectorXcd;
using Mat  = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx   iu{0.0, 1.0};

/// Uniform 1-D position grid, x_j = (j - M/2) * dx, dx = 2L/M.
struct GridSpec {
    double L;
    int    M;
    double hbar;

    GridSpec(double half_width, int points, double hb)
        : L(half_width), M(points), hbar(hb) {
        if (L <= 0 || hbar <= 0) throw std::invalid_argument("GridSpec: L and hbar must be positive");
        if (M < 16 || M % 2 != 0) throw std::invalid_argument("GridSpec: M must be even and >= 16");
    }
    double dx() const { return 2.0 * L / M; }
    double x(int j) const { return (j - M / 2) * dx(); }
    bool operator==(const GridSpec& o) const { return L == o.L && M == o.M && hbar == o.hbar; }
};

struct PhasePoint {
    double q = 0.0, p = 0.0;
    cplx as_complex() const { return {q, p}; }
};

/// Complex squeezing parameter of a coherent state; Im alpha > 0.
struct WidthParam {
    cplx alpha;
    explicit WidthParam(cplx a) : alpha(a) {
        if (!(a.imag() > 0)) throw std::invalid_argument("WidthParam: Im alpha must be positive");
    }
};

struct GridState {
    GridSpec grid;
    Vec values;   // length grid.M
};

/// Dense operator on a grid; entries include the dx quadrature weight so that
/// composition is plain matrix multiplication and trace(A) = sum of diagonal.
struct GridOperator {
    GridSpec grid;
    Mat m;
};
using DensityOp = GridOperator;

inline cplx inner(const GridState& a, const GridState& b) {
    // <a|b> = dx * sum conj(a) b
    return a.grid.dx() * a.values.dot(b.values);
}
inline double norm(const GridState& a) { return std::sqrt(std::abs(inner(a, a).real())); }

inline GridOperator dyad(const GridState& ket, const GridState& bra) {
    GridOperator op{ket.grid, Mat()};
    op.m.noalias() = (ket.grid.dx() * ket.values) * bra.values.adjoint();
    return op;
}

inline GridState apply(const GridOperator& op, const GridState& psi) {
    return GridState{psi.grid, op.m * psi.values};
}

inline double frobenius(const Mat& a) { return a.norm(); }
inline double rel_frobenius(const Mat& a, const Mat& ref) { return a.norm() / ref.norm(); }

} // namespace cslab
