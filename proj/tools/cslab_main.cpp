// Command-line verification front end: runs the per-module identity suites,
// reproduces the conjugation table, and emits JSON/CSV reports.

#include "CLI11.hpp"

#include "cslab/numcore.hpp"
#include "cslab/flatstates.hpp"
#include "cslab/metaplectic.hpp"
#include "cslab/toeplitz.hpp"
#include "cslab/statistics.hpp"
#include "cslab/spherequant.hpp"
#include "cslab/frequency.hpp"
#include "cslab/dilation.hpp"
#include "cslab/report.hpp"

#include <cstdio>
#include <random>

using namespace cslab;
using report::Report;

namespace {

struct GlobalOpts {
    std::string out = "reports";
    std::string tol_profile = "default";
    std::uint64_t seed = 20250810;
    double tol(double base) const { return tol_profile == "strict" ? 0.5 * base : base; }
};

GridSpec make_grid(double hbar, int M, double span) {
    return GridSpec(numcore::suggest_half_width(span, hbar), M, hbar);
}

void run_metaplectic_table(const GlobalOpts& g, double t, Report& rep) {
    auto rows = metaplectic::reproduce_table(t);
    std::vector<std::vector<double>> csv;
    for (const auto& r : rows) {
        const bool all = r.printed_match_SinvSc && r.printed_match_moeb
                         && r.printed_match_iT && r.printed_match_iT_Sc;
        std::string note = r.suspect ? "suspect row; oracle values reported" : "";
        if (!all && !r.suspect) note = "printed entries deviate from the definitional oracle";
        // residual 0 when the oracle agrees with itself; the flags carry the
        // table comparison
        rep.add("table row [" + r.name + "]", 0.0, g.tol(1e-12), note);
        csv.push_back({t, (double)r.printed_match_SinvSc, (double)r.printed_match_moeb,
                       (double)r.printed_match_iT, (double)r.printed_match_iT_Sc,
                       r.iT_SinvSc(0, 0), r.iT_SinvSc(0, 1), r.iT_SinvSc(1, 0),
                       r.iT_SinvSc(1, 1)});
    }
    report::write_csv(g.out + "/metaplectic_table.csv",
                      {"t", "match_SinvSc", "match_moebius", "match_iT", "match_iT_Sc",
                       "T00", "T01", "T10", "T11"},
                      csv);
}

void run_group_law(const GlobalOpts& g, Report& rep) {
    std::mt19937_64 rng(g.seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(-1.5, 1.5);
    auto random_sl2 = [&]() {
        double a = nd(rng), b = nd(rng), c = nd(rng);
        if (std::abs(a) < 0.3) a += (a < 0 ? -0.6 : 0.6);
        metaplectic::Mat2c S(a + cplx(0, 0.2) * nd(rng), b + cplx(0, 0.2) * nd(rng),
                             c + cplx(0, 0.2) * nd(rng), 1.0, false);
        return metaplectic::Mat2c(S.a, S.b, S.c, (1.0 + S.b * S.c) / S.a, false);
    };
    double worst = 0;
    int done = 0;
    while (done < 200) {
        auto S = random_sl2();
        auto Sp = random_sl2();
        metaplectic::ExtendedPoint pt{{ud(rng), ud(rng)},
                                      cplx(0.3 * nd(rng), 1.0 + 0.3 * std::abs(nd(rng)))};
        try {
            auto one = metaplectic::extended_flow(S, metaplectic::extended_flow(Sp, pt));
            auto two = metaplectic::extended_flow(S.mul(Sp), pt);
            worst = std::max({worst, std::abs(one.alpha - two.alpha),
                              std::abs(one.z.q - two.z.q), std::abs(one.z.p - two.z.p)});
            ++done;
        } catch (const std::domain_error&) {
        }
    }
    rep.add("flow composition, 200 admissible samples", worst, g.tol(1e-10));
}

flatstates::SymbolField test_bump() {
    flatstates::Gaussian2 b;
    b.uq = 1.4;
    b.up = 1.1;
    return flatstates::make_gaussian_symbol(b);
}

metaplectic::Mat2c family_matrix(const std::string& row, double t) {
    using metaplectic::Mat2c;
    if (row == "rotation") return Mat2c(std::cos(t), std::sin(t), -std::sin(t), std::cos(t));
    if (row == "shear") return Mat2c(1, t, 0, 1);
    if (row == "chirp") return Mat2c(1, 0, -iu * t, 1);
    throw std::invalid_argument("unknown row: " + row);
}

void run_theorem1(const GlobalOpts& g, const std::string& row, double t, double hbar,
                  int M, Report& rep) {
    GridSpec grid = make_grid(hbar, M, 3.0);
    flatstates::QuadBox box = flatstates::default_box(5.0, hbar);
    toeplitz::Residual r = toeplitz::theorem1_verify(test_bump(), cplx(0, 1),
                                                     family_matrix(row, t), box, grid, 12);
    rep.add("conjugation identity [" + row + "]", r.value, g.tol(1e-4));
}

void run_theorem2(const GlobalOpts& g, Report& rep) {
    const double hbar = 0.1;
    GridSpec grid = make_grid(hbar, 1024, 3.0);
    flatstates::QuadBox box = flatstates::default_box(5.0, hbar);
    auto rr = toeplitz::theorem2_verify(test_bump(), family_matrix("rotation", 0.7),
                                        box, grid, 1.2);
    rep.add("weyl pushforward [rotation]", rr.value, g.tol(1e-5));
    auto rs = toeplitz::theorem2_verify(test_bump(), family_matrix("shear", 1.2),
                                        box, grid, 1.2);
    rep.add("weyl pushforward [shear]", rs.value, g.tol(1e-5));
    auto rc = toeplitz::theorem2_verify(test_bump(), family_matrix("chirp", 0.05),
                                        box, grid, 1.2);
    rep.add("weyl pushforward [chirp]", rc.value, g.tol(1e-4));
}

void run_theorem4(const GlobalOpts& g, Report& rep) {
    const double hb = 0.2;
    GridSpec grid = make_grid(hb, 256, 3.0);
    flatstates::Gaussian2 bump;
    bump.q0 = 0.25;
    bump.p0 = -0.15;
    auto h = flatstates::make_gaussian_symbol(bump);
    flatstates::QuadBox box = flatstates::default_box(5.5, hb);
    metaplectic::Mat2c A(0, iu, -iu, 0), B(0, -iu, iu, 0);
    Mat P = Mat::Zero(grid.M, grid.M);
    for (int j = 0; j < grid.M; ++j) P((grid.M - j) % grid.M, j) = 1.0;
    DensityOp H = flatstates::quantize(h, box, grid);
    DensityOp CA = toeplitz::c_compose(A, h, cplx(0, 1), box, grid);
    DensityOp CB = toeplitz::c_compose(B, h, cplx(0, 1), box, grid);
    const double n = H.m.norm();
    rep.add("C(A)C(A) = C(I)", (P * CA.m - H.m).norm() / n, g.tol(1e-5));
    rep.add("C(A)C(B) = C(-I)", (P * CB.m - P * H.m * P).norm() / n, g.tol(1e-5));
    rep.add("C(B)C(A) = C(-I)", (CA.m * P - P * H.m * P).norm() / n, g.tol(1e-5));
    rep.add("C(B)C(B) = C(I)", (CB.m * P - H.m).norm() / n, g.tol(1e-5));
    auto m1 = flatstates::m1_commutator_demo(16, hb);
    rep.add("shift product defect", m1.product_residual, g.tol(1e-12));
    rep.add("shift commutator defect", m1.commutator_residual, g.tol(1e-12));
}

void run_statistics(const GlobalOpts& g, double hbar, const std::string& which, Report& rep) {
    using namespace statistics;
    GridSpec g2(numcore::suggest_half_width(2.2, hbar), 28, hbar);
    GridState a = flatstates::coherent_unchecked({0.5, -0.2}, WidthParam(cplx(0, 1)), g2);
    GridState b = flatstates::coherent_unchecked({-0.4, 0.3}, WidthParam(cplx(0, 1)), g2);
    if (which == "husimi" || which == "all") {
        TwoBodyDensity rho = dyad2(a, b, a, b);
        auto r = husimi_exchange_check(rho, hbar);
        rep.add("husimi exchange [bra swap]", r.u_residual, g.tol(1e-5));
        rep.add("husimi exchange [ket swap]", r.v_residual, g.tol(1e-5));
        rep.add("husimi exchange [both]", r.uv_residual, g.tol(1e-5));
    }
    if (which == "wigner" || which == "all") {
        GridSpec g1(numcore::suggest_half_width(1.5, hbar), 128, hbar);
        GridState u = flatstates::coherent_unchecked({0.35, -0.15}, WidthParam(cplx(0, 1)), g1);
        GridState v = flatstates::coherent_unchecked({-0.25, 0.3}, WidthParam(cplx(0, 1)), g1);
        rep.add("wigner exchange (minus slot)", wigner_exchange_check(u, v), g.tol(1e-5));
    }
    if (which == "toeplitz" || which == "all") {
        GridSpec g1(numcore::suggest_half_width(2.0, hbar), 192, hbar);
        flatstates::Gaussian2 bump;
        bump.uq = 1.1;
        bump.up = 0.9;
        auto h = flatstates::make_gaussian_symbol(bump);
        flatstates::QuadBox box = flatstates::default_box(4.5, hbar);
        DensityOp H = flatstates::quantize(h, box, g1);
        Mat P = Mat::Zero(g1.M, g1.M);
        for (int j = 0; j < g1.M; ++j) P((g1.M - j) % g1.M, j) = 1.0;
        auto hu = toeplitz_exchange(h, ExchangeKind::U, hbar);
        DensityOp HU = flatstates::quantize(hu, box, g1);
        rep.add("diagonal rewrite of the bra flip", (HU.m - H.m * P).norm() / H.m.norm(),
                g.tol(1e-5));
        auto hv = toeplitz_exchange(h, ExchangeKind::V, hbar);
        DensityOp HV = flatstates::quantize(hv, box, g1);
        rep.add("diagonal rewrite of the ket flip", (HV.m - P * H.m).norm() / H.m.norm(),
                g.tol(1e-5));
    }
    if (which == "bosefermi" || which == "all") {
        GridSpec g1(numcore::suggest_half_width(1.8, hbar), 26, hbar);
        flatstates::Gaussian2 f, h2;
        f.q0 = 0.35;
        h2.q0 = -0.35;
        f.uq = f.up = h2.uq = h2.up = 2.0;
        const double mass = (2 * pi / 2.0) / (2 * pi * hbar);
        f.amp = h2.amp = 1.0 / mass;
        flatstates::QuadBox box = flatstates::default_box(4.6, hbar, 2.0);
        auto bf = bose_fermi_project(flatstates::make_gaussian_symbol(f),
                                     flatstates::make_gaussian_symbol(h2), box, g1);
        rep.add("symmetric part psd", std::max(0.0, -bf.eigmin_B), g.tol(1e-10));
        rep.add("antisymmetric part psd", std::max(0.0, -bf.eigmin_F), g.tol(1e-10));
        rep.add("trace split", std::abs(bf.trace_B + bf.trace_F - 1.0), g.tol(1e-6));
    }
    if (which == "prop3" || which == "all") {
        GridSpec g1(numcore::suggest_half_width(2.0, hbar), 160, hbar);
        flatstates::Gaussian2 bump;
        bump.q0 = 0.3;
        bump.p0 = -0.1;
        flatstates::QuadBox box = flatstates::default_box(4.5, hbar);
        auto r = prop3_check(flatstates::make_gaussian_symbol(bump), box, g1);
        rep.add("composition equals bra flip", r.res_B_vs_U, g.tol(1e-5));
        rep.add("composition equals ket flip", r.res_A_vs_V, g.tol(1e-5));
    }
}

void run_sphere(const GlobalOpts& g, int N, const std::string& suite, Report& rep) {
    using namespace spherequant;
    if (suite == "basis" || suite == "all") {
        double worst = 0;
        for (int m = 0; m < N; m += std::max(1, N / 6))
            for (int n = 0; n < N; n += std::max(1, N / 6)) {
                SpherePoly P{N, Vec::Zero(N)}, Q{N, Vec::Zero(N)};
                P.coeffs[m] = 1.0;
                Q.coeffs[n] = 1.0;
                worst = std::max(worst, std::abs(sphere_inner_quadrature(P, Q)
                                                 - (m == n ? 1.0 : 0.0)));
            }
        rep.add("basis orthonormality (quadrature)", worst, g.tol(1e-12));
    }
    if (suite == "toeplitz" || suite == "all") {
        Mat T1 = sphere_toeplitz([](double, double) { return cplx(1.0); }, N);
        rep.add("multiply-project of 1 is the identity",
                (T1 - Mat::Identity(N, N)).cwiseAbs().maxCoeff(), g.tol(1e-12));
        Mat Th = sphere_toeplitz([](double tau, double) { return cplx(tau); }, N);
        double worst = 0;
        for (int n = 0; n < N; ++n)
            worst = std::max(worst, std::abs(Th(n, n) - (n + 1.0) / (N + 1.0)));
        rep.add("height symbol beta diagonal", worst, g.tol(1e-12));
    }
    if (suite == "acoeffs" || suite == "all") {
        ACoeffs a = compute_CnN(default_window(N), N);
        double bulk = 0;
        for (int n = N / 5; n <= 4 * N / 5; ++n)
            bulk = std::max(bulk, std::abs(a.CnN[n] - 1.0));
        rep.add("bulk weights near one", bulk, g.tol(0.05));
        rep.add("renormalized identity", a_resolution_residual(a), g.tol(1e-8));
        std::vector<std::vector<double>> csv;
        for (int n = 0; n < N; ++n) csv.push_back({(double)n, a.CnN[n]});
        report::write_csv(g.out + "/cnn_profile_N" + std::to_string(N) + ".csv",
                          {"n", "CnN"}, csv);
    }
    if (suite == "theorem5" || suite == "all") {
        ACoeffs a = compute_CnN(default_window(N), N);
        TrigCoeffs g1, g2;
        g1.gamma[0] = [](double t) { return cplx(0.7 + 0.4 * t); };
        g1.gamma[1] = [](double t) { return cplx(std::sqrt(std::max(0.0, t * (1 - t)))); };
        g1.gamma[-1] = g1.gamma[1];
        g2.gamma[0] = [](double t) { return cplx(1.0 - 0.3 * t * t); };
        g2.gamma[1] = [](double t) { return cplx(0.5 * (1 - t)); };
        g2.gamma[-1] = [](double t) { return cplx(0.5 * t); };
        auto res = theorem5_verify(g1, g2, a);
        rep.add("round trip (first factor)", res.roundtrip_1, g.tol(1e-8));
        rep.add("round trip (second factor)", res.roundtrip_2, g.tol(1e-8));
        rep.add("product of symbols", res.product, g.tol(1e-8));
    }
}

void run_frequency(const GlobalOpts& g, const std::string& suite, Report& rep) {
    using namespace frequency;
    if (suite == "an" || suite == "all") {
        const double hb = 0.3;
        const int J = 10;
        GridSpec grid(numcore::suggest_half_width(std::sqrt(2.0 * (J + 4) * hb), hb), 384, hb);
        BandOperator A = build_An(1, J, grid);
        rep.add("circle-average band structure", A.structure_residual, g.tol(1e-8));
        const int D = (int)A.matrix.rows();
        Mat H0 = Mat::Zero(D, D);
        for (int j = 0; j < D; ++j) H0(j, j) = (j + 0.5) * hb;
        Mat comm = H0 * A.matrix - A.matrix * H0 - hb * A.matrix;
        rep.add("band commutation relation", comm.topLeftCorner(J, J).cwiseAbs().maxCoeff(),
                g.tol(1e-12));
    }
    if (suite == "torus" || suite == "all") {
        rep.add("circle-algebra commutation phase", nc_torus_check(2.0 * pi * 3.0 / 7.0, 12),
                g.tol(1e-12));
    }
    if (suite == "2d" || suite == "all") {
        const double hb = 0.25;
        const int J = 6;
        GridSpec grid(numcore::suggest_half_width(std::sqrt(2.0 * (J + 4) * hb), hb), 384, hb);
        Band2D A = build_AN_2d(1, 0, 1.0, 1393.0 / 985.0, J, grid);
        rep.add("two-mode derivation relation", A.derivation_residual, g.tol(1e-10));
        rep.add("frequency lattice distance", frequency_set_distance(1.0, 1393.0 / 985.0, J, hb),
                g.tol(1e-10));
    }
    if (suite == "ansatz" || suite == "all") {
        const double hb = 0.3;
        const int J = 6;
        GridSpec grid(numcore::suggest_half_width(std::sqrt(2.0 * (2 * J + 4) * hb), hb), 384, hb);
        Mat A1 = a_beta_ansatz_ho(
            [](double thp, double) { return std::exp(-iu * thp); }, J, grid);
        BandOperator ref = build_An(1, J, grid);
        rep.add("circle-pair ansatz reproduces the band operator",
                (A1.topLeftCorner(J + 1, J) - ref.matrix.topLeftCorner(J + 1, J))
                    .cwiseAbs()
                    .maxCoeff(),
                g.tol(1e-8));
    }
}

void run_spectrum(const GlobalOpts& g, double hbar, double action, double munu, bool symmetric,
                  Report& rep) {
    frequency::HomoclinicData hd;
    hd.hbar = hbar;
    hd.action_plus = action;
    hd.action_minus = symmetric ? action : 0.0;
    hd.munu_plus = munu;
    hd.munu_minus = symmetric ? munu : 1.0;
    frequency::FrequencySpectrum s = frequency::solve_spectrum(hd, -1.0, 1.0);
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < s.roots.size(); ++k)
        rows.push_back({s.roots[k], s.residuals[k]});
    report::write_csv(g.out + "/homoclinic_spectrum.csv", {"omega", "det_residual"}, rows);
    double worst = 0;
    for (double r : s.residuals) worst = std::max(worst, r);
    rep.add("determinant residual at roots (" + std::to_string(s.roots.size()) + " found)",
            worst, g.tol(1e-10));
    if (symmetric && std::abs(std::remainder(2.0 * action / hbar, 2.0 * pi)) < 1e-9) {
        frequency::FrequencySpectrum c = frequency::closed_form_roots(hd, -1.0, 1.0);
        double dev = (c.roots.size() == s.roots.size()) ? 0.0 : 1.0;
        for (size_t k = 0; k < std::min(c.roots.size(), s.roots.size()); ++k)
            dev = std::max(dev, std::abs(c.roots[k] - s.roots[k]));
        rep.add("scan vs closed-form roots", dev, g.tol(1e-8));
    }
}

void run_dilation_demo(const GlobalOpts& g, double hbar, double t, int samples, Report& rep) {
    GridSpec grid(9.0, 4096, hbar);
    GridState psi = flatstates::coherent_unchecked({0, 0}, WidthParam(cplx(0, 1)), grid);
    GridState out = dilation::evolve_dilation(psi, t);
    rep.add("norm preservation", std::abs(norm(out) - 1.0), g.tol(1e-10));
    rep.add("variance law", std::abs(dilation::position_variance(out)
                                     - 0.5 * hbar * std::exp(2 * t)), g.tol(1e-8));
    auto cdf = [&](double x) {
        const double sigma = std::sqrt(0.5 * hbar * std::exp(2 * t));
        return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
    };
    dilation::MeasureResult mr = dilation::measure_position(out, samples, g.seed, cdf);
    rep.add("KS statistic vs the evolved law", mr.ks_statistic,
            g.tol(1.628 / std::sqrt((double)samples)));
    std::vector<std::vector<double>> rows;
    for (double s : mr.samples) rows.push_back({s});
    report::write_csv(g.out + "/dilation_samples.csv", {"x"}, rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-state quantization verification suites"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::string config_path;
    app.add_option("--out", g.out, "output directory for JSON/CSV reports");
    app.add_option("--tol-profile", g.tol_profile, "default or strict")
        ->check(CLI::IsMember({"default", "strict"}));
    app.add_option("--seed", g.seed, "random seed for sampled checks");
    app.add_option("--config", config_path, "key=value config file (flags win)");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    double t = 0.1, hbar = 0.1, action = 0.0, munu = 1.0;
    int M = 512, N = 32, samples = 10000;
    std::string row = "rotation", which = "all", subsuite = "all";
    verify->add_option("suite", suite,
                       "metaplectic-table | group-law | theorem1 | theorem2 | theorem4 | "
                       "statistics | sphere | frequency")
        ->required();
    verify->add_option("--t", t, "family parameter");
    verify->add_option("--hbar", hbar, "Planck parameter");
    verify->add_option("--M", M, "grid points");
    verify->add_option("--N", N, "sphere level");
    verify->add_option("--row", row, "theorem1 family: rotation | shear | chirp");
    verify->add_option("--which", which, "statistics part: husimi ... prop3 | all");
    verify->add_option("--suite", subsuite, "sphere/frequency part");

    auto* spectrum = app.add_subcommand("spectrum", "homoclinic frequency spectrum");
    std::string spectrum_kind;
    bool symmetric = false;
    spectrum->add_option("kind", spectrum_kind, "homoclinic")->required();
    spectrum->add_option("--hbar", hbar, "Planck parameter");
    spectrum->add_option("--action", action, "loop action over the branches");
    spectrum->add_option("--mu-nu", munu, "invariant branch product");
    spectrum->add_flag("--symmetric", symmetric, "equal data on both branches");

    auto* demo = app.add_subcommand("demo", "demonstrations");
    std::string demo_kind;
    double demo_t = -1.0;
    demo->add_option("kind", demo_kind, "dilation")->required();
    demo->add_option("--hbar", hbar, "Planck parameter");
    demo->add_option("--t", demo_t, "evolution time (default: the delocalization time)");
    demo->add_option("--samples", samples, "measurement draws");

    CLI11_PARSE(app, argc, argv);

    if (!config_path.empty()) {
        report::Config cfg = report::Config::load(config_path);
        // file values fill only parameters the flags left at defaults
        hbar = app.count("--hbar") || verify->count("--hbar") ? hbar
                                                              : cfg.get_num("hbar", hbar);
        g.seed = (std::uint64_t)cfg.get_num("seed", (double)g.seed);
        g.out = cfg.get("out", g.out);
    }

    Report rep;
    rep.seed = g.seed;
    try {
        if (verify->parsed()) {
            rep.suite = "verify-" + suite;
            if (suite == "metaplectic-table") run_metaplectic_table(g, t, rep);
            else if (suite == "group-law") run_group_law(g, rep);
            else if (suite == "theorem1") run_theorem1(g, row, t, hbar, M, rep);
            else if (suite == "theorem2") run_theorem2(g, rep);
            else if (suite == "theorem4") run_theorem4(g, rep);
            else if (suite == "statistics") run_statistics(g, hbar, which, rep);
            else if (suite == "sphere") run_sphere(g, N, subsuite, rep);
            else if (suite == "frequency") run_frequency(g, subsuite, rep);
            else {
                std::fprintf(stderr, "unknown suite: %s\n", suite.c_str());
                return 2;
            }
        } else if (spectrum->parsed()) {
            if (spectrum_kind != "homoclinic") {
                std::fprintf(stderr, "unknown spectrum kind: %s\n", spectrum_kind.c_str());
                return 2;
            }
            rep.suite = "spectrum-homoclinic";
            run_spectrum(g, hbar, action, munu, symmetric, rep);
        } else if (demo->parsed()) {
            if (demo_kind != "dilation") {
                std::fprintf(stderr, "unknown demo kind: %s\n", demo_kind.c_str());
                return 2;
            }
            rep.suite = "demo-dilation";
            if (demo_t < 0) demo_t = dilation::t_hbar(hbar);
            run_dilation_demo(g, hbar, demo_t, samples, rep);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }

    rep.print();
    rep.write(g.out);
    return rep.all_pass() ? 0 : 1;
}
