#include "finsler/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "finsler/errors.hpp"
#include "finsler/numerics.hpp"

namespace finsler::comparison {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log sinh(z) for z > 0 without overflow.
double log_sinh(double z) {
    if (z < 1e-4) return std::log(z * (1.0 + z * z / 6.0));
    if (z > 20.0) return z - M_LN2 + std::log1p(-std::exp(-2.0 * z));
    return std::log(std::sinh(z));
}

void check_chi_args(double t, double k, int n) {
    if (!(t >= 0.0)) throw InvalidConfig("chi: t must be >= 0");
    if (!(k > 0.0)) throw InvalidConfig("chi: k must be positive");
    if (n < 1) throw InvalidConfig("chi: n must be >= 1");
}

// integral_0^r chi / chi(r) without the delta < k restriction; the integrand
// is shifted by its coarse-grid maximum so the quadrature works on O(1) values
// even where the ratio diverges.
double chi_ratio_any(double r, double k, double delta, int n) {
    const double lr = log_chi(r, k, delta, n);
    double shift = 0.0;
    for (int i = 1; i <= 64; ++i) {
        shift = std::max(shift, log_chi(r * i / 64.0, k, delta, n) - lr);
    }
    auto g = [&](double t) {
        if (!(t > 0.0)) return 0.0;
        return std::exp(log_chi(t, k, delta, n) - lr - shift);
    };
    const double base =
        num::adaptive_simpson(g, 0.0, r, 1e-13 * std::max(1.0, r), 48);
    return std::exp(shift) * base;
}

double ratio_denominator(int n, double k, double delta) {
    const double nd = n * (k - delta);
    if (!(nd > 0.0)) throw InvalidConfig("ratio bound requires delta < k");
    return nd;
}

}  // namespace

double s_lambda(double t, double lambda) {
    if (!(t >= 0.0)) throw InvalidConfig("s_lambda: t must be >= 0");
    if (std::abs(lambda) < 1e-12) return t;
    if (lambda > 0.0) {
        const double rt = std::sqrt(lambda);
        return std::sin(rt * t) / rt;
    }
    const double rt = std::sqrt(-lambda);
    return std::sinh(rt * t) / rt;
}

double s_lambda_prime(double t, double lambda) {
    if (!(t >= 0.0)) throw InvalidConfig("s_lambda: t must be >= 0");
    if (std::abs(lambda) < 1e-12) return 1.0;
    if (lambda > 0.0) return std::cos(std::sqrt(lambda) * t);
    return std::cosh(std::sqrt(-lambda) * t);
}

double chi(double t, double k, double delta, int n) {
    check_chi_args(t, k, n);
    if (t == 0.0) return 0.0;
    return std::exp(log_chi(t, k, delta, n));
}

double log_chi(double t, double k, double delta, int n) {
    check_chi_args(t, k, n);
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return n * (-delta * t + log_sinh(k * t) - std::log(k));
}

double chi_log_derivative(double t, double k, double delta, int n) {
    check_chi_args(t, k, n);
    if (!(t > 0.0)) throw InvalidConfig("chi_log_derivative: t must be positive");
    return n * (k / std::tanh(k * t) - delta);
}

double chi_ratio(double r, double k, double delta, int n) {
    check_chi_args(r, k, n);
    if (!(r > 0.0)) throw InvalidConfig("chi_ratio: r must be positive");
    if (!(delta < k)) throw InvalidConfig("chi_ratio: requires delta < k");
    return chi_ratio_any(r, k, delta, n);
}

double chi_ratio_limit(double k, double delta, int n) {
    return 1.0 / ratio_denominator(n, k, delta);
}

BoundParams BoundParams::from_facts(const MetricModel& model) {
    const auto& f = model.facts;
    if (!f.k1 || !f.k2 || !f.delta1 || !f.delta2) {
        throw InvalidConfig("model facts carry no curvature / S-curvature pinch");
    }
    BoundParams p;
    p.n = model.dim - 1;
    p.k1 = *f.k1;
    p.k2 = *f.k2;
    p.delta1 = *f.delta1;
    p.delta2 = *f.delta2;
    if (p.n < 1 || !(p.k1 > 0.0) || p.k1 > p.k2 + 1e-15 || p.delta1 > p.delta2 + 1e-15) {
        throw InvalidConfig("model facts form no valid pinch");
    }
    return p;
}

nlohmann::json BoundParams::to_json() const {
    return {{"n", n},         {"k1", k1},         {"k2", k2},
            {"delta1", delta1}, {"delta2", delta2}, {"admissible", admissible()}};
}

double lower_bound_f(double r, const BoundParams& p) {
    if (!(r > 0.0)) throw InvalidConfig("lower_bound_f: r must be positive");
    const double nd = ratio_denominator(p.n, p.k2, p.delta2);
    const double first = -std::expm1(-nd * r) / nd;
    const double dlt = nd - 2.0 * p.k2;  // singular locus dlt = 0
    const double e2 = std::exp(-2.0 * p.k2 * r);
    double second;
    if (std::abs(dlt) < 1e-9) {
        second = p.n * r * e2;
    } else {
        // n (e^{-2 k2 r} - e^{-nd r}) / (nd - 2 k2), written to survive dlt -> 0
        second = p.n * e2 * (-std::expm1(-dlt * r)) / dlt;
    }
    return (first - second) / std::pow(-std::expm1(-2.0 * p.k2 * r), p.n);
}

double upper_bound_F(double r, const BoundParams& p) {
    if (!(r > 0.0)) throw InvalidConfig("upper_bound_F: r must be positive");
    const double nd = ratio_denominator(p.n, p.k1, p.delta1);
    return -std::expm1(-nd * r) / nd;
}

Interval mean_curvature_bounds(double t, double lambda, double delta, int dim) {
    if (!(t > 0.0)) throw InvalidConfig("mean_curvature_bounds: t must be positive");
    if (dim < 2) throw InvalidConfig("mean_curvature_bounds: dim must be >= 2");
    double ratio;
    if (std::abs(lambda) < 1e-12) {
        ratio = 1.0 / t;
    } else if (lambda > 0.0) {
        const double rt = std::sqrt(lambda);
        if (!(t < M_PI / rt)) {
            throw InvalidConfig("mean_curvature_bounds: t beyond the first conjugate point");
        }
        ratio = rt / std::tan(rt * t);
    } else {
        const double rt = std::sqrt(-lambda);
        ratio = rt / std::tanh(rt * t);
    }
    const double m = dim - 1;
    return {m * (ratio - delta), m * (ratio + delta)};
}

Interval ball_volume_sandwich(double t, const BoundParams& p) {
    if (!(t > 0.0)) throw InvalidConfig("ball_volume_sandwich: t must be positive");
    if (!p.admissible()) throw InadmissibleModel("ball_volume_sandwich: requires delta_i < k_i");
    const double area = num::unit_sphere_area(p.n + 1);
    auto integral = [&](double k, double delta) {
        auto f = [&](double s) { return chi(s, k, delta, p.n); };
        const double tol = 1e-12 * (1.0 + t * chi(t, k, delta, p.n));
        return num::adaptive_simpson(f, 0.0, t, tol, 48);
    };
    // weak curvature + strong S-suppression squeezes from below; converse above
    return {area * integral(p.k1, p.delta2), area * integral(p.k2, p.delta1)};
}

// ---- harness -------------------------------------------------------------------

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json rj = nlohmann::json::array();
    for (const auto& row : rows) {
        rj.push_back({{"r", row.r},
                      {"area", row.area},
                      {"volume", row.volume},
                      {"ratio", row.ratio},
                      {"f_lower", row.f_lower},
                      {"F_upper", row.F_upper},
                      {"within", row.within}});
    }
    return {{"model", model_id},
            {"params", params.to_json()},
            {"rows", rj},
            {"admissible", admissible},
            {"all_pass", all_pass},
            {"metadata", metadata}};
}

std::string ComparisonReport::to_csv() const {
    std::string out = "r,area,volume,ratio,f_lower,F_upper,within\n";
    char buf[256];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", row.r,
                      row.area, row.volume, row.ratio, row.f_lower, row.F_upper,
                      row.within ? 1 : 0);
        out += buf;
    }
    return out;
}

ComparisonReport verify_ratio_bounds(const MetricModel& model, const BoundParams& p,
                                     const std::vector<double>& r_grid,
                                     const measure::DirectionQuadrature& quad,
                                     const HarnessOptions& opts) {
    if (r_grid.empty()) throw InvalidConfig("verify_ratio_bounds: empty radius grid");
    const bool ok = p.admissible();
    if (!ok && !opts.allow_inadmissible) {
        throw InadmissibleModel("verify_ratio_bounds: pinch violates delta_i < k_i");
    }

    ComparisonReport rep;
    rep.params = p;
    rep.model_id = model.id;
    rep.admissible = ok;
    rep.metadata = {{"f_formula", "corrected"},
                    {"slack", opts.slack},
                    {"seed", opts.seed},
                    {"samples", opts.samples},
                    {"h", opts.h},
                    {"resolution", quad.resolution},
                    {"policy", opts.policy == Numerics::UseHooks ? "hooks" : "generic"}};

    const Vec origin = Vec::Zero(model.dim);
    const auto prof = measure::radial_profile(model, origin, r_grid, quad, opts.h,
                                              opts.samples, opts.seed, opts.policy, opts.mode);
    bool all = ok;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        ComparisonRow row;
        row.r = r_grid[i];
        row.area = prof.areas[i];
        row.volume = prof.volumes[i];
        row.ratio = prof.volumes[i] / prof.areas[i];
        if (ok) {
            row.f_lower = lower_bound_f(row.r, p);
            row.F_upper = upper_bound_F(row.r, p);
            row.within = row.ratio >= row.f_lower * (1.0 - opts.slack) &&
                         row.ratio <= row.F_upper * (1.0 + opts.slack);
        } else {
            row.f_lower = kNaN;
            row.F_upper = kNaN;
            row.within = false;
        }
        all = all && row.within;
        rep.rows.push_back(row);
    }
    rep.all_pass = all;
    return rep;
}

IsoperimetricReport isoperimetric_check(const MetricModel& model, double k1, double delta1,
                                        const std::vector<double>& r_grid,
                                        const measure::DirectionQuadrature& quad,
                                        const HarnessOptions& opts) {
    if (!(k1 > 0.0) || !(delta1 < k1)) {
        throw InadmissibleModel("isoperimetric_check: needs 0 < k1 and delta1 < k1");
    }
    const auto& f = model.facts;
    if (!f.k1 || *f.k1 < k1 - 1e-12) {
        throw InadmissibleModel("isoperimetric_check: model curvature not below -k1^2");
    }
    if (!f.delta2 || *f.delta2 > delta1 + 1e-12) {
        throw InadmissibleModel("isoperimetric_check: model S-curvature not below the bound");
    }
    if (r_grid.empty()) throw InvalidConfig("isoperimetric_check: empty radius grid");

    const double denom = (model.dim - 1) * (k1 - delta1);
    const Vec origin = Vec::Zero(model.dim);
    const auto prof = measure::radial_profile(model, origin, r_grid, quad, opts.h,
                                              opts.samples, opts.seed, opts.policy, opts.mode);
    IsoperimetricReport rep;
    rep.all_pass = true;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        IsoperimetricRow row;
        row.r = r_grid[i];
        row.area = prof.areas[i];
        row.volume = prof.volumes[i];
        row.bound = prof.areas[i] / denom;
        row.pass = row.volume <= row.bound * (1.0 + opts.slack);
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

EntropyEstimate entropy_estimate(const MetricModel& model, const Vec& p,
                                 std::pair<double, double> t_window,
                                 const measure::DirectionQuadrature& quad,
                                 const HarnessOptions& opts) {
    const double t0 = t_window.first, t1 = t_window.second;
    if (!(t0 > 0.0) || !(t1 - t0 >= 3.0 - 1e-9)) {
        throw InvalidConfig("entropy_estimate: window must be positive with length >= 3");
    }
    const int m = std::max(4, opts.grid_points);
    std::vector<double> ts(m);
    for (int i = 0; i < m; ++i) ts[i] = t0 + (t1 - t0) * i / (m - 1);

    const auto prof = measure::radial_profile(model, p, ts, quad, opts.h, opts.samples,
                                              opts.seed, opts.policy, opts.mode);
    for (double lv : prof.log_volumes) {
        if (std::isnan(lv)) {
            throw PointOutsideDomain("entropy_estimate: window beyond the reachable chart");
        }
    }

    double tbar = 0.0, lbar = 0.0;
    for (int i = 0; i < m; ++i) {
        tbar += ts[i];
        lbar += prof.log_volumes[i];
    }
    tbar /= m;
    lbar /= m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
        sxy += (ts[i] - tbar) * (prof.log_volumes[i] - lbar);
    }
    EntropyEstimate est;
    est.slope = sxy / sxx;
    double ssr = 0.0;
    for (int i = 0; i < m; ++i) {
        const double resid = prof.log_volumes[i] - lbar - est.slope * (ts[i] - tbar);
        ssr += resid * resid;
    }
    est.stderr_value = std::sqrt(ssr / (m - 2) / sxx);
    est.t0 = t0;
    est.t1 = t1;
    est.points = m;
    return est;
}

std::pair<double, double> default_entropy_window(const BoundParams& p) {
    const double t0 = std::max(3.0, std::log(1e4) / (2.0 * p.k1));
    const double rate = std::max(0.2, p.n * (p.k2 - p.delta1));
    const double t1 = std::max(t0 + 3.0, std::min(t0 + 5.0, 600.0 / rate));
    return {t0, t1};
}

double funk_ratio(int n, double r) {
    if (n < 1) throw InvalidConfig("funk_ratio: n must be >= 1");
    if (!(r > 0.0)) throw InvalidConfig("funk_ratio: r must be positive");
    const double delta = (n + 2.0) / (2.0 * n);
    return chi_ratio_any(r, 0.5, delta, n);
}

}  // namespace finsler::comparison
