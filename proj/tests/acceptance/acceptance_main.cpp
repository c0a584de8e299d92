// Acceptance gate: one criterion per line, exit code = number of failures.
// Every check prints the measured quantities next to its tolerance so a
// failure is diagnosable from the log alone.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli_core.hpp"
#include "finsler/comparison.hpp"
#include "finsler/connection.hpp"
#include "finsler/convex_body.hpp"
#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/measure.hpp"
#include "finsler/models.hpp"
#include "finsler/norms.hpp"
#include "finsler/rng.hpp"
#include "finsler/types.hpp"

using namespace finsler;
namespace cmp = finsler::comparison;

namespace {

constexpr std::uint64_t kSeed = 12345;
constexpr double kPi = 3.14159265358979323846;

struct Result {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Vec angle_dir(double theta) {
    Vec y(2);
    y << std::cos(theta), std::sin(theta);
    return y;
}

// Vol(B_r)/Area(S_r) on the constant-curvature surface matches tanh(r/2)
// within 1% at moderate radii and sits in [0.99, 1] of the limit 1 at r=10.
Result hyperbolic_ratio_exact() {
    const auto m = models::make_hyperbolic(1.0, 2);
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 256, kSeed);
    const std::vector<double> radii{0.5, 1.0, 2.0, 5.0, 10.0};
    const auto prof = measure::radial_profile(m, p, radii, quad, 1e-4, 16384, kSeed);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const double ratio = prof.volumes[i] / prof.areas[i];
        const double exact = std::tanh(0.5 * radii[i]);
        worst = std::max(worst, std::abs(ratio - exact) / exact);
    }
    const double tail = prof.volumes.back() / prof.areas.back();  // limit is 1
    const bool pass = worst <= 1e-2 && tail >= 0.99 && tail <= 1.0;
    return {pass, fmt("max rel err %.2e (tol 1e-2); ratio(10)/limit %.6f in [0.99, 1]", worst, tail)};
}

// Measured ratio rows on the 3d model stay inside [f, F] with 2% slack, and
// the closed-form bounds sandwich the chi ratio analytically to 1e-9 over a
// 1000-point parameter grid.
Result ratio_sandwich_3d() {
    const auto m = models::make_hyperbolic(1.0, 3);
    const Vec p = Vec::Zero(3);
    cmp::BoundParams bp;
    bp.n = 2;
    bp.k1 = bp.k2 = 1.0;
    bp.delta1 = bp.delta2 = 0.0;
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.5 * i);
    const auto quad = measure::direction_quadrature(m, p, 48, kSeed);
    const auto rep = cmp::verify_ratio_bounds(m, bp, grid, quad);

    rng::CounterRng gen(2024, 0);
    double worst_gap = -1.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        cmp::BoundParams q;
        q.n = 1 + static_cast<int>(gen.uniform(4 * i) * 4.0);
        q.k1 = q.k2 = 0.3 + 1.7 * gen.uniform(4 * i + 1);
        q.delta1 = q.delta2 = q.k1 - (0.05 + 1.5 * gen.uniform(4 * i + 2));
        const double r = 0.1 + 25.0 * gen.uniform(4 * i + 3);
        const double mid = cmp::chi_ratio(r, q.k2, q.delta2, q.n);
        const double lo = cmp::lower_bound_f(r, q);
        const double hi = cmp::upper_bound_F(r, q);
        worst_gap = std::max({worst_gap, lo - mid, mid - hi});
    }
    const bool pass = rep.all_pass && worst_gap <= 1e-9;
    return {pass, fmt("%zu measured rows all in [f-2%%, F+2%%]: %s; analytic squeeze worst violation %.2e (tol 1e-9)",
                      rep.rows.size(), rep.all_pass ? "yes" : "NO", worst_gap)};
}

// Projectively flat disk models: flag curvature -1/4 and S/F = 3/2 on the
// Funk disk, flag curvature -1 on the Hilbert disk, and Funk geodesics run
// along straight chords.
Result projective_constants() {
    const auto funk = models::make_funk(ConvexBody::unit_ball(2));
    rng::CounterRng gen(77, 1);
    double dk = 0.0, ds = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Vec x(2);
        x << gen.uniform(4 * i) - 0.5, gen.uniform(4 * i + 1) - 0.5;
        x *= 0.9;
        const Vec y = angle_dir(2.0 * kPi * gen.uniform(4 * i + 2));
        Vec u(2);
        u << -y[1], y[0];
        dk = std::max(dk, std::abs(curvature::flag_curvature(funk, x, y, u) + 0.25));
        const double s = curvature::s_curvature(funk, x, y) / norms::eval_norm(funk, x, y);
        ds = std::max(ds, std::abs(s - 1.5));
    }

    const auto hil = models::make_hilbert(ConvexBody::unit_ball(2));
    double dh = 0.0;
    for (std::uint64_t i = 0; i < 5; ++i) {
        Vec x(2);
        x << gen.uniform(1000 + 4 * i) - 0.5, gen.uniform(1001 + 4 * i) - 0.5;
        x *= 0.8;
        const Vec y = angle_dir(2.0 * kPi * gen.uniform(1002 + 4 * i));
        Vec u(2);
        u << -y[1], y[0];
        dh = std::max(dh, std::abs(curvature::flag_curvature(hil, x, y, u) + 1.0));
    }

    Vec x0(2), y0(2);
    x0 << 0.1, -0.2;
    y0 << 0.8, 0.55;
    y0 /= norms::eval_norm(funk, x0, y0);
    const auto path = connection::integrate_geodesic(funk, x0, y0, 3.0);
    const Vec dir = y0.normalized();
    double dev = 0.0;
    for (const Vec& xx : path.x) {
        const Vec w = xx - x0;
        dev = std::max(dev, (w - w.dot(dir) * dir).norm());
    }
    const bool pass = dk <= 1e-3 && ds <= 1e-3 && dh <= 1e-2 && dev <= 1e-8 &&
                      path.status == connection::PathStatus::Complete;
    return {pass, fmt("funk |K+1/4| %.2e (tol 1e-3), |S/F-3/2| %.2e (tol 1e-3); "
                      "hilbert |K+1| %.2e (tol 1e-2); straightness %.2e (tol 1e-8)",
                      dk, ds, dh, dev)};
}

// With the decay hypothesis violated the measured ratio diverges instead of
// converging, and the bound harness refuses the model.
Result divergent_ratio() {
    const auto m = models::make_funk(ConvexBody::unit_ball(2));
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 128, kSeed);
    const auto prof = measure::radial_profile(m, p, {10.0, 20.0}, quad, 1e-4, 16384, kSeed);
    const double r10 = prof.volumes[0] / prof.areas[0];
    const double r20 = prof.volumes[1] / prof.areas[1];
    bool refused = false;
    try {
        const auto bp = cmp::BoundParams::from_facts(m);
        cmp::verify_ratio_bounds(m, bp, {1.0}, quad);
    } catch (const InadmissibleModel&) {
        refused = true;
    }
    const bool pass = r20 > 2.0 * r10 && refused;
    return {pass, fmt("ratio(20)/ratio(10) %.3e (need > 2); harness refuses the pinch: %s",
                      r20 / r10, refused ? "yes" : "NO")};
}

// Volume growth entropy: 2 on the 3d constant-curvature model, 1 on the
// Hilbert disk, 0 on the Funk disk (bounded total volume).
Result entropy_slopes() {
    cmp::HarnessOptions opts;
    const auto h3 = models::make_hyperbolic(1.0, 3);
    const auto q3 = measure::direction_quadrature(h3, Vec::Zero(3), 48, kSeed);
    const auto e3 = cmp::entropy_estimate(h3, Vec::Zero(3), {6.0, 12.0}, q3, opts);

    const auto hil = models::make_hilbert(ConvexBody::unit_ball(2));
    cmp::HarnessOptions oh = opts;
    oh.samples = 8192;
    const auto qh = measure::direction_quadrature(hil, Vec::Zero(2), 64, kSeed);
    const auto eh = cmp::entropy_estimate(hil, Vec::Zero(2), {5.0, 10.0}, qh, oh);

    const auto fk = models::make_funk(ConvexBody::unit_ball(2));
    const auto qf = measure::direction_quadrature(fk, Vec::Zero(2), 64, kSeed);
    const auto ef = cmp::entropy_estimate(fk, Vec::Zero(2), {10.0, 20.0}, qf, opts);

    const bool pass = std::abs(e3.slope - 2.0) <= 0.1 && std::abs(eh.slope - 1.0) <= 0.1 &&
                      std::abs(ef.slope) <= 0.05;
    return {pass, fmt("3d slope %.4f (2 +- 0.1, window 6-12); hilbert %.4f (1 +- 0.1, window 5-10); "
                      "funk %.2e (0 +- 0.05, window 10-20)",
                      e3.slope, eh.slope, ef.slope)};
}

// Measured ball volumes match 2 pi (cosh t - 1) within 1%.
Result ball_volume_exact() {
    const auto m = models::make_hyperbolic(1.0, 2);
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 256, kSeed);
    const std::vector<double> radii{1.0, 3.0, 6.0};
    const auto prof = measure::radial_profile(m, p, radii, quad, 1e-4, 16384, kSeed);
    double worst = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double exact = 2.0 * kPi * (std::cosh(radii[i]) - 1.0);
        worst = std::max(worst, std::abs(prof.volumes[i] - exact) / exact);
    }
    return {worst <= 1e-2, fmt("max rel err %.2e (tol 1e-2) at t in {1, 3, 6}", worst)};
}

// Sphere mean curvature: coth t on the constant-curvature surface, and the
// Funk disk value respects its closed-form lower bound.
Result mean_curvature_pipeline() {
    const auto h2 = models::make_hyperbolic(1.0, 2);
    Vec yh(2);
    yh << 1.0, 0.0;
    yh /= norms::eval_norm(h2, Vec::Zero(2), yh);
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const double mc = measure::mean_curvature_sphere(h2, Vec::Zero(2), yh, t, 16384, kSeed);
        worst = std::max(worst, std::abs(mc - 1.0 / std::tanh(t)));
    }

    const auto fk = models::make_funk(ConvexBody::unit_ball(2));
    Vec yf(2);
    yf << 1.0, 0.0;
    double funk_margin = 1e300;
    for (double t : {0.5, 1.0, 2.0}) {
        const double mc = measure::mean_curvature_sphere(fk, Vec::Zero(2), yf, t, 16384, kSeed);
        const double lo = cmp::mean_curvature_bounds(t, -0.25, 1.5, 2).lower;
        funk_margin = std::min(funk_margin, mc - lo);
    }
    const bool pass = worst <= 1e-2 && funk_margin >= -1e-2;
    return {pass, fmt("|Pi - coth t| max %.2e (tol 1e-2); funk margin above lower bound %.2e (tol -1e-2)",
                      worst, funk_margin)};
}

// Linear isoperimetric inequality Vol <= Area / ((d-1)(k - delta)).
Result isoperimetric_inequality() {
    std::vector<double> rg;
    for (int i = 1; i <= 10; ++i) rg.push_back(i);
    const auto h2 = models::make_hyperbolic(1.0, 2);
    const auto q2 = measure::direction_quadrature(h2, Vec::Zero(2), 256, kSeed);
    const auto rep2 = cmp::isoperimetric_check(h2, 1.0, 0.0, rg, q2);
    const auto h3 = models::make_hyperbolic(1.0, 3);
    const auto q3 = measure::direction_quadrature(h3, Vec::Zero(3), 48, kSeed);
    const auto rep3 = cmp::isoperimetric_check(h3, 1.0, 0.0, rg, q3);
    double slack = 1e300;  // tightest Vol/(bound) across rows, for the log
    for (const auto& rows : {rep2.rows, rep3.rows}) {
        for (const auto& row : rows) slack = std::min(slack, row.bound / row.volume);
    }
    const bool pass = rep2.all_pass && rep3.all_pass;
    return {pass, fmt("d=2: %s, d=3: %s on r in {1..10}; min bound/volume %.4f (need >= 1)",
                      rep2.all_pass ? "pass" : "FAIL", rep3.all_pass ? "pass" : "FAIL", slack)};
}

// Monte Carlo rejection volume vs the co-area pipeline, within 3 sigma.
Result volume_oracle_agreement() {
    const auto fk = models::make_funk(ConvexBody::unit_ball(2));
    const auto qf = measure::direction_quadrature(fk, Vec::Zero(2), 128, kSeed);
    const double co_f = measure::ball_volume(fk, Vec::Zero(2), 2.0, qf, 1e-4, 16384, kSeed);
    const auto mc_f = measure::mc_ball_volume(fk, Vec::Zero(2), 2.0, 500000, kSeed);
    const double dev_f = std::abs(mc_f.estimate - co_f) / mc_f.stderr_value;

    const auto h2 = models::make_hyperbolic(1.0, 2);
    const auto q2 = measure::direction_quadrature(h2, Vec::Zero(2), 256, kSeed);
    const double co_h = measure::ball_volume(h2, Vec::Zero(2), 1.0, q2, 1e-4, 16384, kSeed);
    const auto mc_h = measure::mc_ball_volume(h2, Vec::Zero(2), 1.0, 500000, kSeed);
    const double dev_h = std::abs(mc_h.estimate - co_h) / mc_h.stderr_value;

    const bool pass = dev_f <= 3.0 && dev_h <= 3.0;
    return {pass, fmt("funk r=2: co-area %.5f vs mc %.5f +- %.5f (%.2f sigma); "
                      "hyperbolic r=1: %.5f vs %.5f +- %.5f (%.2f sigma); need <= 3",
                      co_f, mc_f.estimate, mc_f.stderr_value, dev_f, co_h, mc_h.estimate,
                      mc_h.stderr_value, dev_h)};
}

// Quadratic-norm degeneracies measured through the generic numeric route:
// S-curvature and distortion vanish, the area correction factor is 1.
Result riemannian_degeneracies() {
    double worst_s = 0.0, worst_tau = 0.0, worst_zeta = 0.0;
    const auto models_list = {models::make_euclidean(2), models::make_hyperbolic(1.0, 2)};
    for (const auto& m : models_list) {
        rng::CounterRng gen(31, 7);
        for (std::uint64_t i = 0; i < 50; ++i) {
            Vec x(2);
            x << gen.uniform(4 * i) - 0.5, gen.uniform(4 * i + 1) - 0.5;
            const Vec y = angle_dir(2.0 * kPi * gen.uniform(4 * i + 2));
            worst_s = std::max(worst_s,
                               std::abs(curvature::s_curvature(m, x, y, Numerics::ForceGeneric)));
            worst_tau = std::max(
                worst_tau, std::abs(curvature::distortion(m, x, y, Numerics::ForceGeneric)));
            const Vec yu = y / norms::eval_norm(m, x, y);
            measure::AreaFrame frame;
            frame.q = x;
            frame.normal = yu;
            frame.tangents = measure::indicatrix_tangent_basis(m, x, yu);
            const double z =
                measure::zeta_factor(m, frame, 16384, kSeed, Numerics::ForceGeneric);
            worst_zeta = std::max(worst_zeta, std::abs(z - 1.0));
        }
    }
    const bool pass = worst_s <= 1e-3 && worst_tau <= 1e-2 && worst_zeta <= 1e-2;
    return {pass, fmt("max |S| %.2e (tol 1e-3), max |tau| %.2e (tol 1e-2), max |zeta-1| %.2e (tol 1e-2)",
                      worst_s, worst_tau, worst_zeta)};
}

// Two verify runs with the same seed write byte-identical reports.
Result deterministic_reports() {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("finsler_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cfg = R"({"kind":"hyperbolic","dim":2,"k":1.0})";
    auto run_once = [&](const std::string& out) {
        return cli::run({"verify", "--config", cfg, "--resolution", "48", "--samples", "8192",
                         "--out", out});
    };
    const std::string f1 = (dir / "report_a.json").string();
    const std::string f2 = (dir / "report_b.json").string();
    const int rc1 = run_once(f1);
    const int rc2 = run_once(f2);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(f1);
    const std::string b = slurp(f2);
    fs::remove_all(dir);
    const bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    return {pass, fmt("exit codes %d/%d, %zu bytes, byte-identical: %s", rc1, rc2, a.size(),
                      a == b && !a.empty() ? "yes" : "NO")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Result (*fn)();
    };
    const std::vector<Criterion> criteria{
        {"hyperbolic-ratio-exact", hyperbolic_ratio_exact},
        {"ratio-sandwich-3d", ratio_sandwich_3d},
        {"projective-constants", projective_constants},
        {"divergent-ratio", divergent_ratio},
        {"entropy-slopes", entropy_slopes},
        {"ball-volume-exact", ball_volume_exact},
        {"mean-curvature-pipeline", mean_curvature_pipeline},
        {"isoperimetric-inequality", isoperimetric_inequality},
        {"volume-oracle-agreement", volume_oracle_agreement},
        {"riemannian-degeneracies", riemannian_degeneracies},
        {"deterministic-reports", deterministic_reports},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Result r;
        try {
            r = c.fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", c.name, r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures;
}
