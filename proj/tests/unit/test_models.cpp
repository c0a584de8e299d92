#include "doctest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "finsler/errors.hpp"
#include "finsler/models.hpp"
#include "finsler/norms.hpp"
#include "oracles.hpp"

using namespace finsler;

TEST_CASE("model config json round trip") {
    auto cfg = models::ModelConfig::from_json(nlohmann::json::parse(
        R"({"kind":"hyperbolic","dim":3,"k":0.5})"));
    CHECK(cfg.kind == "hyperbolic");
    CHECK(cfg.dim == 3);
    CHECK(*cfg.k == doctest::Approx(0.5));
    const auto echo = cfg.to_json();
    CHECK(echo["kind"] == "hyperbolic");
    CHECK(echo["dim"] == 3);

    auto funk = models::ModelConfig::from_json(nlohmann::json::parse(
        R"({"kind":"funk","dim":2,"body":{"kind":"ellipsoid","semi_axes":[2.0,1.0]}})"));
    auto m = models::make_model(funk);
    CHECK(m.kind == models::ModelKind::Funk);
    CHECK(m.body->semi_axes()[0] == doctest::Approx(2.0));
}

TEST_CASE("config validation failures") {
    using nlohmann::json;
    CHECK_THROWS_AS(models::make_model(models::ModelConfig::from_json(
                        json::parse(R"({"kind":"spherical","dim":2})"))),
                    InvalidConfig);
    CHECK_THROWS_AS(models::make_model(models::ModelConfig::from_json(
                        json::parse(R"({"kind":"euclidean","dim":1})"))),
                    InvalidConfig);
    CHECK_THROWS_AS(models::make_model(models::ModelConfig::from_json(
                        json::parse(R"({"kind":"hyperbolic","dim":2,"k":-1.0})"))),
                    InvalidConfig);
}

TEST_CASE("catalog facts carry the documented constants") {
    auto e = models::make_euclidean(3);
    CHECK(*e.facts.flag_curvature == 0.0);
    CHECK(e.facts.is_riemannian);
    CHECK(!e.facts.k1.has_value());

    auto h = models::make_hyperbolic(0.7, 3);
    CHECK(*h.facts.flag_curvature == doctest::Approx(-0.49));
    CHECK(*h.facts.k1 == doctest::Approx(0.7));
    CHECK(*h.facts.k2 == doctest::Approx(0.7));
    CHECK(*h.facts.delta2 == 0.0);

    auto f = models::make_funk(ConvexBody::unit_ball(3));
    CHECK(*f.facts.flag_curvature == doctest::Approx(-0.25));
    CHECK(*f.facts.k1 == doctest::Approx(0.5));
    CHECK(*f.facts.s_coefficient == doctest::Approx(1.0));  // (d+1)/(2(d-1)), d=3
    CHECK(!f.facts.reversible);
    CHECK(f.facts.geodesics_are_lines);

    auto hb = models::make_hilbert(ConvexBody::unit_ball(3));
    CHECK(*hb.facts.flag_curvature == doctest::Approx(-1.0));
    CHECK(*hb.facts.s_coefficient == 0.0);
    CHECK(hb.facts.reversible);
}

TEST_CASE("hyperbolic distance hook matches the oracle") {
    auto m = models::make_hyperbolic(1.3, 2);
    Vec a(2), b(2);
    a << 0.2, -0.1;
    b << -0.4, 0.35;
    CHECK(m.exact_distance(a, b) ==
          doctest::Approx(oracle::poincare_distance(1.3, a, b)).epsilon(1e-12));
    CHECK(m.exact_distance(a, b) == doctest::Approx(m.exact_distance(b, a)).epsilon(1e-12));
}

TEST_CASE("funk distance is the projective ratio and is asymmetric") {
    auto m = models::make_funk(ConvexBody::unit_ball(2));
    Vec a(2), b(2);
    a << 0.1, 0.0;
    b << 0.6, 0.2;
    CHECK(m.exact_distance(a, b) ==
          doctest::Approx(oracle::funk_distance_ball(a, b)).epsilon(1e-10));
    CHECK(std::abs(m.exact_distance(a, b) - m.exact_distance(b, a)) > 0.05);

    auto hb = models::make_hilbert(ConvexBody::unit_ball(2));
    const double s = 0.5 * (oracle::funk_distance_ball(a, b) + oracle::funk_distance_ball(b, a));
    CHECK(hb.exact_distance(a, b) == doctest::Approx(s).epsilon(1e-10));
    CHECK(hb.exact_distance(a, b) == doctest::Approx(hb.exact_distance(b, a)).epsilon(1e-12));
}

TEST_CASE("hilbert on the unit ball is the Klein metric") {
    // distance from the center along a radius: atanh(rho)
    auto m = models::make_hilbert(ConvexBody::unit_ball(2));
    Vec o = Vec::Zero(2), p(2);
    p << 0.75, 0.0;
    CHECK(m.exact_distance(o, p) == doctest::Approx(std::atanh(0.75)).epsilon(1e-10));
}

TEST_CASE("admissibility predicates and boundary gap") {
    auto h = models::make_hyperbolic(1.0, 2);
    Vec in(2), out(2);
    in << 0.5, 0.0;
    out << 0.9999999999999, 0.0;
    CHECK(models::point_admissible(h, in));
    CHECK(!models::point_admissible(h, (2.0 * in).eval()));
    CHECK_NOTHROW(models::require_admissible_point(h, in));
    CHECK_THROWS_AS(models::require_admissible_point(h, (2.0 * in).eval()), PointOutsideDomain);
    CHECK(models::chart_boundary_gap(h, in) == doctest::Approx(0.5).epsilon(1e-9));

    auto e = models::make_euclidean(2);
    CHECK(models::point_admissible(e, (100.0 * in).eval()));
    CHECK(std::isinf(models::chart_boundary_gap(e, in)));

    auto f = models::make_funk(ConvexBody::unit_ball(2));
    CHECK(models::point_admissible(f, in));
    CHECK(!models::point_admissible(f, out));
}

TEST_CASE("custom norms are spot-checked for homogeneity") {
    // valid: an L4-type norm
    auto ok = models::make_custom(
        [](const Vec&, const Vec& y) {
            return std::pow(std::pow(y[0], 4) + std::pow(y[1], 4), 0.25);
        },
        2);
    Vec x = Vec::Zero(2), y(2);
    y << 1.0, 2.0;
    CHECK(norms::eval_norm(ok, x, y) > 0.0);

    // broken: not 1-homogeneous
    CHECK_THROWS_AS(models::make_custom(
                        [](const Vec&, const Vec& y) { return y.squaredNorm(); }, 2),
                    InvalidConfig);
}

TEST_CASE("convex body geometry") {
    Vec c(2), ax(2);
    c << 0.2, -0.1;
    ax << 1.5, 0.5;
    auto body = ConvexBody::ellipsoid(c, ax);
    CHECK(body.volume() == doctest::Approx(oracle::kPi * 1.5 * 0.5).epsilon(1e-12));
    CHECK(body.max_semi_axis() == doctest::Approx(1.5));
    CHECK(body.min_semi_axis() == doctest::Approx(0.5));
    CHECK(body.gauge(c) == 0.0);
    Vec edge = c;
    edge[0] += 1.5;
    CHECK(body.gauge(edge) == doctest::Approx(1.0).epsilon(1e-12));
    // gradient points outward along the long axis
    Vec grad = body.gauge_gradient(edge);
    CHECK(grad[0] > 0.0);
    CHECK(body.boundary_gap(c) == doctest::Approx(0.5).epsilon(1e-9));

    CHECK_THROWS_AS(ConvexBody::ellipsoid(c, (-ax).eval()), InvalidConfig);
}
