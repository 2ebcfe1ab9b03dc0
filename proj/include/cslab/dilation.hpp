#pragma once

#include "cslab/types.hpp"
#include <functional>
#include <cstdint>

namespace cslab::dilation {

/// Flow of the dilation generator: e^{-i t H / hbar} psi (x) = e^{-t/2} psi(e^{-t} x),
/// realized by band-limited resampling. Throws when the rescaled support is
/// not covered by the grid.
GridState evolve_dilation(const GridState& psi, double t);

/// Phi^t(q,p) = (e^t q, e^{-t} p).
PhasePoint classical_dilation_flow(PhasePoint z, double t);

/// Ehrenfest-type delocalization time -log(hbar)/2.
double t_hbar(double hbar);

struct MeasureResult {
    std::vector<double> samples;
    double ks_statistic;   // against the supplied reference CDF
};

/// Born-rule position sampling: inverse-CDF draws from |psi|^2 dx with a
/// piecewise-linear CDF; deterministic for a fixed seed.
MeasureResult measure_position(const GridState& psi, int count, std::uint64_t seed,
                               const std::function<double(double)>& reference_cdf);

/// Variance of |psi|^2 (position spread).
double position_variance(const GridState& psi);

} // namespace cslab::dilation
