#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "finsler/comparison.hpp"
#include "finsler/errors.hpp"
#include "finsler/measure.hpp"
#include "finsler/models.hpp"
#include "finsler/numerics.hpp"
#include "finsler/rng.hpp"
#include "oracles.hpp"

using namespace finsler;
namespace cmp = finsler::comparison;

namespace {

// Coherent admissible pinch: k1 <= k2, delta1 <= delta2, delta_i < k_i.
cmp::BoundParams random_admissible(rng::CounterRng& gen, std::uint64_t i) {
    cmp::BoundParams p;
    p.n = 1 + static_cast<int>(gen.uniform(5 * i) * 4.0);
    p.k1 = 0.3 + 1.7 * gen.uniform(5 * i + 1);
    p.k2 = p.k1 + 1.5 * gen.uniform(5 * i + 2);
    p.delta2 = p.k2 - (0.05 + 1.2 * gen.uniform(5 * i + 3));
    p.delta1 = std::min(p.delta2, p.k1 - (0.05 + 1.2 * gen.uniform(5 * i + 4)));
    return p;
}

}  // namespace

TEST_CASE("s_lambda covers the three sign branches") {
    CHECK(cmp::s_lambda(2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cmp::s_lambda(0.7, -1.0) == doctest::Approx(std::sinh(0.7)).epsilon(1e-14));
    CHECK(cmp::s_lambda(0.7, 1.0) == doctest::Approx(std::sin(0.7)).epsilon(1e-14));
    CHECK(cmp::s_lambda(1.3, -4.0) == doctest::Approx(std::sinh(2.6) / 2.0).epsilon(1e-14));
    CHECK(cmp::s_lambda_prime(0.7, -1.0) == doctest::Approx(std::cosh(0.7)).epsilon(1e-14));
    CHECK(cmp::s_lambda_prime(0.7, 1.0) == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
    CHECK(cmp::s_lambda_prime(0.7, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // derivative consistency by finite differences
    for (double lam : {-2.3, -1e-13, 0.9}) {
        const double d = num::derivative([&](double h) { return cmp::s_lambda(1.1 + h, lam); },
                                         1e-5);
        CHECK(cmp::s_lambda_prime(1.1, lam) == doctest::Approx(d).epsilon(1e-8));
    }
    CHECK_THROWS_AS(cmp::s_lambda(-0.1, 1.0), InvalidConfig);
}

TEST_CASE("chi agrees with its direct definition and survives deep tails") {
    CHECK(cmp::chi(1.3, 0.9, 0.2, 3) ==
          doctest::Approx(oracle::chi_direct(1.3, 0.9, 0.2, 3)).epsilon(1e-12));
    CHECK(cmp::chi(0.4, 2.0, -0.5, 1) ==
          doctest::Approx(oracle::chi_direct(0.4, 2.0, -0.5, 1)).epsilon(1e-12));
    CHECK(cmp::chi(0.0, 1.0, 0.0, 2) == 0.0);
    // log form: sinh(kt) ~ e^{kt}/2 at t = 1000, far beyond double overflow
    const double expect = 3.0 * (0.8 * 1000.0 - std::log(2.0));
    CHECK(cmp::log_chi(1000.0, 1.0, 0.2, 3) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::isinf(cmp::chi(1000.0, 1.0, 0.2, 3)));
    CHECK_THROWS_AS(cmp::chi(1.0, -1.0, 0.0, 1), InvalidConfig);
    CHECK_THROWS_AS(cmp::chi(1.0, 1.0, 0.0, 0), InvalidConfig);
}

TEST_CASE("chi log-derivative equals the closed form and the numeric slope") {
    const double v = cmp::chi_log_derivative(0.8, 1.2, 0.3, 4);
    CHECK(v == doctest::Approx(4.0 * (1.2 / std::tanh(1.2 * 0.8) - 0.3)).epsilon(1e-14));
    const double fd = num::derivative(
        [&](double h) { return cmp::log_chi(0.8 + h, 1.2, 0.3, 4); }, 1e-5);
    CHECK(v == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("chi_ratio: closed-form case and independent quadrature") {
    // k=1, delta=0, n=1: integral of sinh over sinh(r) telescopes to tanh(r/2)
    CHECK(cmp::chi_ratio(2.0, 1.0, 0.0, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-10));
    rng::CounterRng gen(101, 3);
    for (int i = 0; i < 24; ++i) {
        const double k = 0.3 + 1.7 * gen.uniform(4 * i);
        const double delta = k - (0.05 + 1.3 * gen.uniform(4 * i + 1));
        const int n = 1 + static_cast<int>(gen.uniform(4 * i + 2) * 4.0);
        const double r = 0.2 + 5.0 * gen.uniform(4 * i + 3);
        CHECK(cmp::chi_ratio(r, k, delta, n) ==
              doctest::Approx(oracle::chi_ratio_direct(r, k, delta, n)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(cmp::chi_ratio(1.0, 1.0, 1.5, 1), InvalidConfig);
}

TEST_CASE("chi_ratio is monotone: increasing in delta, decreasing in k") {
    CHECK(cmp::chi_ratio(2.0, 1.0, 0.4, 2) > cmp::chi_ratio(2.0, 1.0, 0.0, 2));
    CHECK(cmp::chi_ratio(2.0, 1.0, 0.0, 2) > cmp::chi_ratio(2.0, 1.0, -0.5, 2));
    CHECK(cmp::chi_ratio(2.0, 1.5, 0.1, 2) < cmp::chi_ratio(2.0, 0.8, 0.1, 2));
}

TEST_CASE("chi_ratio approaches its closed-form limit") {
    rng::CounterRng gen(7, 5);
    for (int i = 0; i < 8; ++i) {
        const double k = 0.5 + gen.uniform(3 * i);
        const double delta = k - (0.5 + gen.uniform(3 * i + 1));
        const int n = 1 + static_cast<int>(gen.uniform(3 * i + 2) * 3.0);
        const double lim = cmp::chi_ratio_limit(k, delta, n);
        CHECK(cmp::chi_ratio(20.0, k, delta, n) == doctest::Approx(lim).epsilon(1e-3));
        CHECK(cmp::upper_bound_F(100.0, {n, k, k, delta, delta}) ==
              doctest::Approx(lim).epsilon(1e-9));
    }
}

TEST_CASE("analytic squeeze: f below chi_ratio below F over random pinches") {
    rng::CounterRng gen(55, 7);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_admissible(gen, static_cast<std::uint64_t>(i));
        const double r = 0.05 + 8.0 * gen.uniform(90000 + i);
        const double lo = cmp::lower_bound_f(r, p);
        const double hi = cmp::upper_bound_F(r, p);
        const double mid_lo = cmp::chi_ratio(r, p.k2, p.delta2, p.n);
        const double mid_hi = cmp::chi_ratio(r, p.k1, p.delta1, p.n);
        CHECK(lo <= mid_lo * (1.0 + 1e-9) + 1e-12);
        CHECK(mid_hi <= hi * (1.0 + 1e-9) + 1e-12);
        ++checked;
    }
    CHECK(checked == 1000);
    // collapsed pinch: both chi_ratio arguments coincide, so the full squeeze
    // f <= chi_ratio <= F must hold with no room for vacuity
    for (int i = 0; i < 300; ++i) {
        const int n = 1 + static_cast<int>(gen.uniform(4 * i) * 4.0);
        const double k = 0.3 + 1.7 * gen.uniform(4 * i + 1);
        const double delta = k - (0.05 + 1.2 * gen.uniform(4 * i + 2));
        const double r = 0.05 + 8.0 * gen.uniform(4 * i + 3);
        const cmp::BoundParams p{n, k, k, delta, delta};
        const double mid = cmp::chi_ratio(r, k, delta, n);
        CHECK(cmp::lower_bound_f(r, p) <= mid * (1.0 + 1e-9) + 1e-12);
        CHECK(mid <= cmp::upper_bound_F(r, p) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("lower bound f: exact for n = 1 and continuous across its singular locus") {
    cmp::BoundParams p1{1, 1.0, 1.0, 0.2, 0.2};
    for (double r : {0.3, 1.0, 4.0}) {
        CHECK(cmp::lower_bound_f(r, p1) ==
              doctest::Approx(cmp::chi_ratio(r, 1.0, 0.2, 1)).epsilon(1e-9));
    }
    // n (k2 - delta2) = 2 k2 at delta2 = k2 (1 - 2/n)
    for (int n : {2, 4, 5}) {
        const double k = 1.1;
        const double ds = k * (1.0 - 2.0 / n);
        cmp::BoundParams ps{n, k, k, 0.0, ds};
        cmp::BoundParams pa{n, k, k, 0.0, ds + 1e-7};
        cmp::BoundParams pb{n, k, k, 0.0, ds - 1e-7};
        const double v = cmp::lower_bound_f(1.7, ps);
        CHECK(std::isfinite(v));
        CHECK(cmp::lower_bound_f(1.7, pa) == doctest::Approx(v).epsilon(1e-5));
        CHECK(cmp::lower_bound_f(1.7, pb) == doctest::Approx(v).epsilon(1e-5));
    }
}

TEST_CASE("volume sandwich: ordered slots, exact on the collapsed pinch") {
    rng::CounterRng gen(77, 11);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_admissible(gen, static_cast<std::uint64_t>(i));
        const double t = 0.1 + 5.0 * gen.uniform(70000 + i);
        const auto iv = cmp::ball_volume_sandwich(t, p);
        CHECK(iv.lower <= iv.upper * (1.0 + 1e-9));
        CHECK(iv.lower > 0.0);
    }
    // collapsed hyperbolic pinch in dimension two: both slots are the ball volume
    cmp::BoundParams hyp{1, 1.0, 1.0, 0.0, 0.0};
    for (double t : {0.5, 1.0, 3.0}) {
        const auto iv = cmp::ball_volume_sandwich(t, hyp);
        CHECK(iv.lower == doctest::Approx(oracle::hyp_ball_volume_2d(1.0, t)).epsilon(1e-9));
        CHECK(iv.upper == doctest::Approx(iv.lower).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cmp::ball_volume_sandwich(1.0, cmp::BoundParams{1, 0.5, 0.5, 1.5, 1.5}),
                    InadmissibleModel);
}

TEST_CASE("mean curvature bounds: hyperbolic closed form and conjugate point guard") {
    for (double t : {0.5, 1.0, 2.0}) {
        const auto iv = cmp::mean_curvature_bounds(t, -1.0, 0.0, 2);
        CHECK(iv.lower == doctest::Approx(1.0 / std::tanh(t)).epsilon(1e-13));
        CHECK(iv.upper == doctest::Approx(iv.lower).epsilon(1e-13));
    }
    // nonzero S-pinch separates the slots symmetrically
    const auto iv = cmp::mean_curvature_bounds(1.0, -4.0, 0.3, 3);
    const double mid = 2.0 * 2.0 / std::tanh(2.0);
    CHECK(iv.lower == doctest::Approx(mid - 2.0 * 0.3).epsilon(1e-12));
    CHECK(iv.upper == doctest::Approx(mid + 2.0 * 0.3).epsilon(1e-12));
    CHECK(cmp::mean_curvature_bounds(1.0, 1.0, 0.0, 2).lower ==
          doctest::Approx(std::cos(1.0) / std::sin(1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(cmp::mean_curvature_bounds(3.2, 1.0, 0.0, 2), InvalidConfig);
}

TEST_CASE("bound parameters derive from model facts") {
    auto hyp = models::make_hyperbolic(1.0, 3);
    const auto p = cmp::BoundParams::from_facts(hyp);
    CHECK(p.n == 2);
    CHECK(p.k1 == doctest::Approx(1.0));
    CHECK(p.k2 == doctest::Approx(1.0));
    CHECK(p.delta1 == doctest::Approx(0.0));
    CHECK(p.admissible());

    auto funk = models::make_funk(ConvexBody::unit_ball(2));
    const auto pf = cmp::BoundParams::from_facts(funk);
    CHECK(pf.k1 == doctest::Approx(0.5));
    CHECK(pf.delta1 == doctest::Approx(1.5));
    CHECK_FALSE(pf.admissible());

    CHECK_THROWS_AS(cmp::BoundParams::from_facts(models::make_euclidean(2)), InvalidConfig);
}

TEST_CASE("ratio harness passes on the disk model and rejects the funk pinch") {
    auto m = models::make_hyperbolic(1.0, 2);
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 64, 7);
    const auto bp = cmp::BoundParams::from_facts(m);
    const auto report = cmp::verify_ratio_bounds(m, bp, {0.5, 1.0, 2.0}, quad);
    const double opts_default_slack = cmp::HarnessOptions{}.slack;
    CHECK(report.all_pass);
    CHECK(report.admissible);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.within);
        CHECK(row.ratio == doctest::Approx(std::tanh(row.r / 2.0)).epsilon(1e-3));
        // for this pinch f is the ratio exactly, so allow the harness slack
        CHECK(row.f_lower <= row.ratio * (1.0 + opts_default_slack));
        CHECK(row.ratio <= row.F_upper * (1.0 + opts_default_slack));
    }
    const auto js = report.to_json();
    CHECK(js.contains("rows"));
    CHECK(js["rows"].size() == 3);
    CHECK(js.contains("params"));
    const auto csv = report.to_csv();
    CHECK(csv.find("r,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 4);

    auto funk = models::make_funk(ConvexBody::unit_ball(2));
    const auto qf = measure::direction_quadrature(funk, p, 64, 7);
    const auto bf = cmp::BoundParams::from_facts(funk);
    CHECK_THROWS_AS(cmp::verify_ratio_bounds(funk, bf, {1.0}, qf), InadmissibleModel);
    cmp::HarnessOptions opts;
    opts.allow_inadmissible = true;
    const auto suppressed = cmp::verify_ratio_bounds(funk, bf, {1.0}, qf, opts);
    CHECK_FALSE(suppressed.admissible);
    CHECK_FALSE(suppressed.all_pass);
    CHECK(suppressed.rows.size() == 1);
    CHECK(suppressed.rows[0].ratio > 0.0);
}

TEST_CASE("isoperimetric harness on the disk model") {
    auto m = models::make_hyperbolic(1.0, 2);
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 64, 9);
    const auto report = cmp::isoperimetric_check(m, 1.0, 0.0, {1.0, 2.0, 5.0}, quad);
    CHECK(report.all_pass);
    for (const auto& row : report.rows) {
        CHECK(row.pass);
        CHECK(row.bound == doctest::Approx(row.area).epsilon(1e-12));  // (d-1)(k-delta) = 1
        CHECK(row.volume <= row.bound);
    }
    // hypotheses checked against the facts: k1 too large is rejected
    CHECK_THROWS_AS(cmp::isoperimetric_check(m, 2.0, 0.0, {1.0}, quad), InadmissibleModel);
    CHECK_THROWS_AS(cmp::isoperimetric_check(m, 0.5, 0.7, {1.0}, quad), InadmissibleModel);
}

TEST_CASE("entropy estimate recovers the disk growth rate") {
    auto m = models::make_hyperbolic(1.0, 2);
    const Vec p = Vec::Zero(2);
    const auto quad = measure::direction_quadrature(m, p, 64, 13);
    const auto bp = cmp::BoundParams::from_facts(m);
    const auto window = cmp::default_entropy_window(bp);
    CHECK(window.second - window.first >= 3.0);
    CHECK(std::exp(-2.0 * window.first) <= 1e-4);
    const auto est = cmp::entropy_estimate(m, p, window, quad);
    CHECK(est.slope == doctest::Approx(1.0).epsilon(5e-2));
    CHECK(est.points >= 8);
    CHECK_THROWS_AS(cmp::entropy_estimate(m, p, {6.0, 7.0}, quad), InvalidConfig);
}

TEST_CASE("funk disk ratio: linear at the origin, divergent in the large") {
    CHECK(cmp::funk_ratio(1, 1e-3) == doctest::Approx(1e-3 / 2.0).epsilon(1e-3));
    CHECK(cmp::funk_ratio(2, 1e-3) == doctest::Approx(1e-3 / 3.0).epsilon(1e-3));
    CHECK(cmp::funk_ratio(1, 20.0) > 2.0 * cmp::funk_ratio(1, 10.0));
    CHECK(cmp::funk_ratio(2, 14.0) > 2.0 * cmp::funk_ratio(2, 7.0));
    CHECK_THROWS_AS(cmp::funk_ratio(0, 1.0), InvalidConfig);
}
