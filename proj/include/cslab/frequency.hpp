#pragma once

#include "cslab/types.hpp"
#include "cslab/numcore.hpp"
#include <functional>

namespace cslab::frequency {

/// || psi_z^i - truncated Bargmann series over the sampled eigenbasis ||.
double coherent_hermite_expansion_check(PhasePoint z, const GridSpec& grid, int D);

struct BandOperator {
    int n;       // shift index: nonzero entries sit on (j+n, j)
    Mat matrix;  // D x D in the oscillator eigenbasis
    RVec block_constants;  // measured positive constant of each rank-one block
    double structure_residual;
};

/// A_n built from same-radius double angular integrals over the circles
/// |z|^2 = j hbar (angular FFT quadrature on grid states), compared against
/// the exact shift. Block constants are measured, not assumed.
BandOperator build_An(int n, int J, const GridSpec& grid);

/// Two-mode version on Bohr-Sommerfeld tori, assembled from the one-body
/// angular extractions; eigen-relation (i/hbar)[H, A_N] = (N.omega) A_N.
struct Band2D {
    int n1, n2;
    Mat matrix;           // (J*J) x (J*J), product-basis index j1*J+j2
    double derivation_residual;
};
Band2D build_AN_2d(int n1, int n2, double omega1, double omega2, int J,
                   const GridSpec& grid);

/// Frequency lattice check: {(E_i - E_j)/hbar} against {n1 w1 + n2 w2} on the
/// truncated product spectrum; returns the Hausdorff-type set distance.
double frequency_set_distance(double omega1, double omega2, int J, double hbar);

/// || V U - e^{i theta} U V || on 2K+1 circle modes (exact representation).
double nc_torus_check(double theta, int modes);

struct Bs1Result {
    bool pass;
    long long nearest_k;
    double defect;  // |action - 2 pi k hbar| / hbar
};
Bs1Result bs1_check(double loop_action, double hbar, double tol = 1e-8);

struct HomoclinicData {
    double action_plus = 0.0, action_minus = 0.0;  // loop integrals of the potentials
    double munu_plus = 1.0, munu_minus = 1.0;      // invariant products, > 0
    double hbar = 1e-3;
    double T = 1.0;        // pseudo-period
    double lambda = 1.0;   // dilation rate
    bool symmetric() const {
        return action_plus == action_minus && munu_plus == munu_minus;
    }
};

/// Unit-modulus transmission coefficients f^+, f^-.
std::pair<cplx, cplx> transmission(const HomoclinicData& hd, double omega);

/// det U_omega of the 2x2 continuity matrix (gamma entries carry 1/sqrt(2pi),
/// the branch couplings carry hbar^{-i omega}).
cplx det_condition(const HomoclinicData& hd, double omega);

struct FrequencySpectrum {
    std::vector<double> roots;
    std::vector<double> residuals;  // |det U| at the polished roots
    std::vector<int> branch;        // 0 = scan, +1/-1 = closed-form branch
};

/// Roots of det U_omega = 0 in the window by |det| scan plus bisection polish.
FrequencySpectrum solve_spectrum(const HomoclinicData& hd, double lo, double hi,
                                 int scan_points = 0);

/// Symmetric-case phase-condition roots (the closed form derived from the
/// determinant: arg Gamma(1/2+iw) + xi_branch(w) = w log(munu/hbar) -+ action/hbar
/// mod 2pi).
FrequencySpectrum closed_form_roots(const HomoclinicData& hd, double lo, double hi);

/// #roots with |omega| <= 1 for each hbar.
std::vector<int> frequency_count(HomoclinicData hd, const std::vector<double>& hbars);

/// Lattice {lambda w_n + 2 pi m / T} against a reference frequency set;
/// returns the largest distance from a lattice point to the set.
double spectrum_inclusion_distance(const std::vector<double>& omegas,
                                   double lambda, double T,
                                   const std::vector<double>& reference,
                                   int mmax);

/// Homoclinic-style ansatz on harmonic circles: kernel beta(theta', theta)
/// integrated over same-radius pairs with the circle action phase.
Mat a_beta_ansatz_ho(const std::function<cplx(double, double)>& beta, int J,
                     const GridSpec& grid);

} // namespace cslab::frequency
