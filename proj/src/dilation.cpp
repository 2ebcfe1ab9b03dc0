#include "cslab/dilation.hpp"
#include "cslab/numcore.hpp"

#include <cmath>
#include <random>

namespace cslab::dilation {

GridState evolve_dilation(const GridState& psi, double t) {
    const GridSpec& g = psi.grid;
    const double scale = std::exp(-t);
    if (scale > 1.0) {
        // arguments leave the grid for t < 0: require negligible tail mass in
        // the stretch the interpolant would have to extrapolate
        const int edge = (int)(g.M * (1.0 - 1.0 / scale) / 2.0) + 1;
        double tail = 0;
        for (int j = 0; j < std::min(edge, g.M); ++j)
            tail += std::norm(psi.values[j]) + std::norm(psi.values[g.M - 1 - j]);
        if (tail * g.dx() > 1e-12)
            throw std::runtime_error("evolve_dilation: rescaled support escapes the grid");
    }
    numcore::FourierInterpolator it(g, psi.values);
    GridState out{g, Vec(g.M)};
    const double amp = std::exp(-0.5 * t);
    for (int j = 0; j < g.M; ++j) out.values[j] = amp * it(scale * g.x(j));
    return out;
}

PhasePoint classical_dilation_flow(PhasePoint z, double t) {
    return {std::exp(t) * z.q, std::exp(-t) * z.p};
}

double t_hbar(double hbar) { return -0.5 * std::log(hbar); }

MeasureResult measure_position(const GridState& psi, int count, std::uint64_t seed,
                               const std::function<double(double)>& reference_cdf) {
    const GridSpec& g = psi.grid;
    const int M = g.M;
    // piecewise-linear CDF through the cell masses
    std::vector<double> cdf(M + 1, 0.0);
    for (int j = 0; j < M; ++j) cdf[j + 1] = cdf[j] + std::norm(psi.values[j]) * g.dx();
    const double total = cdf[M];
    if (total <= 0) throw std::invalid_argument("measure_position: empty state");
    for (auto& c : cdf) c /= total;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MeasureResult r;
    r.samples.resize(count);
    for (int s = 0; s < count; ++s) {
        const double u = uni(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int j = (int)std::distance(cdf.begin(), it) - 1;
        j = std::clamp(j, 0, M - 1);
        const double seg = cdf[j + 1] - cdf[j];
        const double frac = seg > 0 ? (u - cdf[j]) / seg : 0.5;
        r.samples[s] = g.x(j) - 0.5 * g.dx() + frac * g.dx();
    }
    std::vector<double> sorted = r.samples;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (int s = 0; s < count; ++s) {
        const double F = reference_cdf(sorted[s]);
        ks = std::max(ks, std::abs(F - (s + 1.0) / count));
        ks = std::max(ks, std::abs(F - (double)s / count));
    }
    r.ks_statistic = ks;
    return r;
}

double position_variance(const GridState& psi) {
    const GridSpec& g = psi.grid;
    double m0 = 0, m1 = 0, m2 = 0;
    for (int j = 0; j < g.M; ++j) {
        const double w = std::norm(psi.values[j]) * g.dx();
        m0 += w;
        m1 += w * g.x(j);
        m2 += w * g.x(j) * g.x(j);
    }
    const double mean = m1 / m0;
    return m2 / m0 - mean * mean;
}

} // namespace cslab::dilation
