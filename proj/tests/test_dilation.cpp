#include "doctest.h"
#include "cslab/dilation.hpp"
#include "cslab/flatstates.hpp"
#include "cslab/numcore.hpp"

#include <cmath>

using namespace cslab;
using namespace cslab::dilation;
using cslab::flatstates::coherent_unchecked;

TEST_SUITE("dilation") {

TEST_CASE("zero time is the identity") {
    GridSpec g(8.0, 512, 0.02);
    GridState psi = coherent_unchecked({0.4, 0.0}, WidthParam(cplx(0, 1)), g);
    GridState out = evolve_dilation(psi, 0.0);
    CHECK((out.values - psi.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("origin packet delocalizes to the unit gaussian at t_hbar") {
    const double hb = 1e-3;
    GridSpec g(9.0, 4096, hb);
    GridState psi = coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), g);
    GridState out = evolve_dilation(psi, t_hbar(hb));
    for (int j = 0; j < g.M; j += 97) {
        const double x = g.x(j);
        const double ref = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
        CHECK(std::abs(out.values[j] - ref) < 1e-10);
    }
    CHECK(std::abs(norm(out) - 1.0) < 1e-10);
}

TEST_CASE("norm is preserved along the flow") {
    const double hb = 0.05;
    GridSpec g(40.0, 2048, hb);
    GridState psi = coherent_unchecked({0.3, 0.0}, WidthParam(cplx(0, 1)), g);
    GridState out = evolve_dilation(psi, 3.0);
    CHECK(std::abs(norm(out) - 1.0) < 1e-12);
}

TEST_CASE("support escape is reported for backward flow off the grid") {
    GridSpec g(4.0, 256, 0.05);
    GridState psi = coherent_unchecked({2.0, 0.0}, WidthParam(cplx(0, 1)), g);
    CHECK_THROWS(evolve_dilation(psi, -1.5));
}

TEST_CASE("classical flow: fixed point, contraction, area") {
    PhasePoint o = classical_dilation_flow({0, 0}, 2.7);
    CHECK(o.q == 0.0);
    CHECK(o.p == 0.0);
    PhasePoint z{1.0, 0.0};
    for (double t : {1.0, 5.0, 12.0}) {
        PhasePoint b = classical_dilation_flow(z, -t);
        CHECK(std::abs(b.q) == std::exp(-t));
        CHECK(b.p == 0.0);
    }
    // area preservation: the map is diagonal with determinant one
    PhasePoint e1 = classical_dilation_flow({1, 0}, 0.8);
    PhasePoint e2 = classical_dilation_flow({0, 1}, 0.8);
    CHECK(std::abs(e1.q * e2.p - e1.p * e2.q - 1.0) < 1e-15);
}

TEST_CASE("variance law of the evolved origin packet") {
    const double hb = 0.01;
    GridSpec g(6.0, 2048, hb);
    GridState psi = coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), g);
    for (double t : {0.0, 0.7, 1.5}) {
        GridState out = evolve_dilation(psi, t);
        CHECK(std::abs(position_variance(out) - 0.5 * hb * std::exp(2 * t)) < 1e-8);
    }
    GridState at_th = evolve_dilation(psi, t_hbar(hb));
    CHECK(std::abs(position_variance(at_th) - 0.5) < 1e-8);
}

TEST_CASE("measurement sampling: seeded, reproducible, KS-consistent") {
    const double hb = 1e-3;
    GridSpec g(9.0, 4096, hb);
    GridState psi = coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), g);
    GridState out = evolve_dilation(psi, t_hbar(hb));
    auto normal_cdf = [](double x) { return 0.5 * std::erfc(-x); };
    MeasureResult a = measure_position(out, 10000, 42, normal_cdf);
    MeasureResult b = measure_position(out, 10000, 42, normal_cdf);
    CHECK(a.samples == b.samples);
    // KS acceptance at level 0.01 for n = 1e4: 1.628/sqrt(n)
    CHECK(a.ks_statistic < 1.628 / std::sqrt(10000.0));
    MeasureResult c = measure_position(out, 10000, 43, normal_cdf);
    CHECK(a.samples != c.samples);
}

TEST_CASE("ground-state law: samples match the stationary density") {
    GridSpec g(8.0, 1024, 1.0);
    GridState h0 = coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), g);
    // |h0|^2 = pi^{-1/2} e^{-x^2}: cdf through erfc with the sqrt(2)-free scaling
    auto cdf = [](double x) { return 0.5 * std::erfc(-x); };
    MeasureResult r = measure_position(h0, 10000, 7, cdf);
    CHECK(r.ks_statistic < 1.628 / std::sqrt(10000.0));
}

} // TEST_SUITE
