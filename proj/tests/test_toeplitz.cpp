#include "doctest.h"
#include "cslab/toeplitz.hpp"
#include "cslab/numcore.hpp"

#include <random>

using namespace cslab;
using namespace cslab::toeplitz;
using cslab::flatstates::Gaussian2;
using cslab::flatstates::make_gaussian_symbol;
using cslab::flatstates::make_constant_symbol;
using cslab::flatstates::coherent_unchecked;
using cslab::metaplectic::Mat2c;

namespace {
GridSpec std_grid(double hbar, int M = 256, double span = 4.0) {
    return GridSpec(numcore::suggest_half_width(span, hbar), M, hbar);
}
} // namespace

TEST_SUITE("toeplitz") {

TEST_CASE("reweight: identical widths and constants are fixed points") {
    Gaussian2 bump;
    SymbolField h = make_gaussian_symbol(bump);
    SymbolField same = reweight_symbol(h, cplx(0, 2), cplx(0, 2), 0.1);
    CHECK(std::abs(same.eval(0.3, -0.4) - h.eval(0.3, -0.4)) < 1e-14);
    SymbolField c1 = reweight_symbol(make_constant_symbol(1.0), cplx(0, 2), cplx(0, 1), 0.1);
    CHECK(std::abs(c1.eval(1.2, 0.5) - 1.0) < 1e-12);
}

TEST_CASE("reweight: quantizing with the new width matches the old operator") {
    const double hb = 0.1;
    GridSpec g = std_grid(hb, 256, 3.0);
    Gaussian2 bump;
    bump.uq = 0.9;
    bump.up = 1.1;
    bump.q0 = 0.2;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.5, hb);
    flatstates::QuantizeOptions o1;
    o1.alpha = cplx(0, 1);
    DensityOp ref = flatstates::quantize(h, box, g, o1);
    SymbolField h2 = reweight_symbol(h, cplx(0, 2), cplx(0, 1), hb);
    flatstates::QuantizeOptions o2;
    o2.alpha = cplx(0, 2);
    DensityOp via = flatstates::quantize(h2, box, g, o2);
    CHECK(hermite_block_relnorm(via.m, ref.m, g, 10) < 1e-6);
}

TEST_CASE("reweight: non-analytic symbols are rejected, gaussians round-trip") {
    SymbolField h;
    h.eval = [](double q, double p) { return std::exp(cplx(-q * q - p * p, 0)); };
    CHECK_THROWS(reweight_symbol(h, cplx(0, 2), cplx(0, 1), 0.1));
    Gaussian2 bump;
    bump.uq = 1.3;
    bump.up = 0.8;
    bump.q0 = 0.2;
    SymbolField fwd = reweight_symbol(make_gaussian_symbol(bump), cplx(0.3, 1.4), cplx(0, 1), 0.1);
    SymbolField back = reweight_symbol(fwd, cplx(0, 1), cplx(0.3, 1.4), 0.1);
    for (double q : {0.0, 0.7})
        for (double p : {0.2, -0.5})
            CHECK(std::abs(back.eval(q, p) - bump(q, p)) < 1e-12);
}

TEST_CASE("offdiag quantize: identity map reduces to plain toeplitz") {
    const double hb = 0.15;
    GridSpec g = std_grid(hb, 256, 3.0);
    Gaussian2 bump;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.0, hb);
    OffDiagSymbol sig;
    sig.base = h;
    sig.alpha = cplx(0, 1);
    sig.map = [](PhasePoint z) { return Label{cplx(0, 1), z}; };
    DensityOp off = offdiag_quantize(sig, box, g);
    DensityOp ref = flatstates::quantize(h, box, g);
    CHECK((off.m - ref.m).norm() / ref.m.norm() < 1e-12);
}

TEST_CASE("offdiag quantize: parity map gives the sign-flip operator") {
    const double hb = 0.2;
    GridSpec g = std_grid(hb, 256, 3.0);
    Gaussian2 bump;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.0, hb);
    OffDiagSymbol sig;
    sig.base = h;
    sig.alpha = cplx(0, 1);
    sig.map = [](PhasePoint z) { return Label{cplx(0, 1), PhasePoint{-z.q, -z.p}}; };
    sig.denom = DenomRule::ParityOverlap;  // the anticanonical normalization
    DensityOp off = offdiag_quantize(sig, box, g);
    // oracle: Int h |psi_-z><psi_z| = P * Op[h(-.)], P the parity matrix
    Gaussian2 flip = bump;  // symmetric bump, h(-z) = h(z)
    DensityOp base = flatstates::quantize(make_gaussian_symbol(flip), box, g);
    Mat P = Mat::Zero(g.M, g.M);
    for (int j = 0; j < g.M; ++j) P((g.M - j) % g.M, j) = 1.0;
    Mat ref = P * base.m;
    CHECK((off.m - ref).norm() / ref.norm() < 1e-10);
}

TEST_CASE("projector trick: conjugated dyad stays idempotent with unit factor") {
    const double hb = 0.15;
    GridSpec g = std_grid(hb, 320, 3.5);
    for (auto S : {Mat2c(std::cos(0.6), std::sin(0.6), -std::sin(0.6), std::cos(0.6)),
                   Mat2c(1, 0, iu * 0.08, 1)}) {
        ProjectorCheck pc = projector_trick_check(S, cplx(0, 1), {0.5, -0.3}, g);
        CHECK(pc.idempotency < 1e-8);
        CHECK(pc.lfactor_dev < 1e-6);
    }
}

TEST_CASE("theorem 1: identity matrix gives a vanishing residual") {
    const double hb = 0.2;
    GridSpec g = std_grid(hb, 192, 2.5);
    Gaussian2 bump;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(4.5, hb);
    Residual r = theorem1_verify(h, cplx(0, 1), Mat2c::identity(), box, g, 12);
    CHECK(r.value < 1e-10);
}

TEST_CASE("theorem 1: rotation, shear, complex chirp at moderate resolution") {
    const double hb = 0.1;
    GridSpec g = std_grid(hb, 512, 3.0);
    Gaussian2 bump;
    bump.uq = 1.4;
    bump.up = 1.1;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.0, hb);
    std::vector<Mat2c> fams;
    fams.push_back(Mat2c(std::cos(0.7), std::sin(0.7), -std::sin(0.7), std::cos(0.7)));
    fams.push_back(Mat2c(1, 1.2, 0, 1));
    fams.push_back(Mat2c(1, 0, -iu * 0.06, 1));
    for (const auto& S : fams) {
        Residual r = theorem1_verify(h, cplx(0, 1), S, box, g, 12);
        CHECK(r.value < 1e-4);
    }
}

TEST_CASE("theorem 1: heat-like families are rejected as inadmissible") {
    const double hb = 0.1;
    GridSpec g = std_grid(hb, 192, 3.0);
    Gaussian2 bump;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(4.0, hb);
    const double t = 0.1;
    Mat2c Sh(std::cosh(t), iu * std::sinh(t), -iu * std::sinh(t), std::cosh(t));
    CHECK_THROWS(theorem1_verify(h, cplx(0, 1), Sh, box, g, 10));
}

TEST_CASE("theorem 2: weyl symbol of the conjugated operator composes with S") {
    const double hb = 0.1;
    GridSpec g = std_grid(hb, 512, 3.0);
    Gaussian2 bump;
    bump.uq = 1.2;
    bump.up = 0.9;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.0, hb);
    Residual rid = theorem2_verify(h, Mat2c::identity(), box, g, 1.2);
    CHECK(rid.value < 1e-6);
    Mat2c shear(1, 1.2, 0, 1);
    Residual rsh = theorem2_verify(h, shear, box, g, 1.2);
    CHECK(rsh.value < 1e-5);
    Mat2c chirp(1, 0, -iu * 0.05, 1);
    Residual rch = theorem2_verify(h, chirp, box, g, 1.2);
    CHECK(rch.value < 1e-4);
}

TEST_CASE("composition operator: antidiagonal pair reproduce the parity forms") {
    const double hb = 0.2;
    GridSpec g = std_grid(hb, 256, 3.0);
    Gaussian2 bump;
    bump.q0 = 0.3;  // break symmetry so the argument flip is visible
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.5, hb);
    Mat P = Mat::Zero(g.M, g.M);
    for (int j = 0; j < g.M; ++j) P((g.M - j) % g.M, j) = 1.0;
    DensityOp H = flatstates::quantize(h, box, g);

    Mat2c A(0, iu, -iu, 0);   // ket-slot flip: C(A) H = P H
    DensityOp CA = c_compose(A, h, cplx(0, 1), box, g);
    CHECK((CA.m - P * H.m).norm() / H.m.norm() < 1e-8);

    Mat2c B(0, -iu, iu, 0);   // bra-slot flip: C(B) H = H P
    DensityOp CB = c_compose(B, h, cplx(0, 1), box, g);
    CHECK((CB.m - H.m * P).norm() / H.m.norm() < 1e-8);
}

TEST_CASE("theorem 4 on the antidiagonal family") {
    const double hb = 0.2;
    GridSpec g = std_grid(hb, 256, 3.0);
    Gaussian2 bump;
    bump.q0 = 0.25;
    bump.p0 = -0.15;
    SymbolField h = make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.5, hb);
    Mat2c A(0, iu, -iu, 0), B(0, -iu, iu, 0);
    Mat P = Mat::Zero(g.M, g.M);
    for (int j = 0; j < g.M; ++j) P((g.M - j) % g.M, j) = 1.0;
    DensityOp H = flatstates::quantize(h, box, g);
    // pairwise products: C(S') C(S) = C(S' S); the antidiagonals square to
    // +-identity so the targets are H and the parity conjugation
    DensityOp CA = c_compose(A, h, cplx(0, 1), box, g);
    DensityOp CB = c_compose(B, h, cplx(0, 1), box, g);
    // C(A) acts on a general operator by the ket-slot flip
    Mat CACA = P * CA.m;          // C(A) applied to C(A)H
    CHECK((CACA - H.m).norm() / H.m.norm() < 1e-5);   // A A = I
    Mat CACB = P * CB.m;          // C(A) applied to C(B)H
    Mat target = P * H.m * P;     // C(A B) = C(-I): parity conjugation
    CHECK((CACB - target).norm() / H.m.norm() < 1e-5);
    Mat CBCA = CA.m * P;          // C(B) applied to C(A)H: bra flip
    CHECK((CBCA - target).norm() / H.m.norm() < 1e-5); // B A = -I as well
    Mat CBCB = CB.m * P;
    CHECK((CBCB - H.m).norm() / H.m.norm() < 1e-5);    // B B = I
}

TEST_CASE("groupoid product composes symbols at leading order") {
    // Husimi symbol of (U^-1 H1 U)(U^-1 H2 U) against the product of the
    // transported base symbols; the defect shrinks like hbar
    Gaussian2 b1, b2;
    b1.uq = 1.3;
    b1.up = 0.8;
    b2.uq = 0.9;
    b2.up = 1.2;
    b2.q0 = 0.2;
    Mat2c S(std::cos(0.5), std::sin(0.5), -std::sin(0.5), std::cos(0.5));
    std::vector<double> hbars = {0.2, 0.1, 0.05};
    std::vector<double> errs;
    for (double hb : hbars) {
        GridSpec g = std_grid(hb, 256, 3.0);
        flatstates::QuadBox box = flatstates::default_box(5.0, hb);
        DensityOp L1 = conjugate_by(S, flatstates::quantize(make_gaussian_symbol(b1), box, g));
        DensityOp L2 = conjugate_by(S, flatstates::quantize(make_gaussian_symbol(b2), box, g));
        DensityOp prod{g, L1.m * L2.m};
        flatstates::SymbolField hus = flatstates::husimi(prod);
        // the conjugation transports the evaluation point by the map the
        // kernel implements (a q - b p, -c q + d p), inverted here
        double sup = 0;
        for (double q : {0.0, 0.4, -0.3})
            for (double p : {0.0, 0.5}) {
                const double qz = S.a.real() * q - S.b.real() * p;
                const double pz = -S.c.real() * q + S.d.real() * p;
                const cplx ref = b1(qz, pz) * b2(qz, pz);
                sup = std::max(sup, std::abs(hus.eval(q, p) * 2.0 * pi * hb - ref));
            }
        errs.push_back(sup);
    }
    const double slope = std::log(errs.front() / errs.back())
                         / std::log(hbars.front() / hbars.back());
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
}

} // TEST_SUITE
