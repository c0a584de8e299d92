#include "finsler/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/norms.hpp"
#include "finsler/numerics.hpp"
#include "finsler/rng.hpp"

namespace finsler::measure {

using models::ModelKind;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix2(std::uint64_t seed, std::uint64_t a) {
    return rng::splitmix64(seed ^ rng::splitmix64(a + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t mix3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix2(mix2(seed, a), b);
}

Mat span_matrix(const std::vector<Vec>& span, int d) {
    Mat S(d, static_cast<int>(span.size()));
    for (std::size_t j = 0; j < span.size(); ++j) {
        if (span[j].size() != d) throw InvalidConfig("span vector has wrong dimension");
        S.col(static_cast<int>(j)) = span[j];
    }
    return S;
}

// k-volume of { c in R^k : F(q, S c) < 1 } with exact fast paths.
double slice_volume(const MetricModel& model, const Vec& q, const Mat& S, int samples,
                    std::uint64_t seed, Numerics policy) {
    const int k = static_cast<int>(S.cols());
    if (k == 1) {
        // exact: the slice is the interval (-1/F(q,-v), 1/F(q,v))
        const double fp = norms::eval_norm(model, q, S.col(0));
        const double fm = norms::eval_norm(model, q, -S.col(0));
        if (!(fp > 0.0) || !(fm > 0.0)) throw DegenerateSpan("slice_volume: zero span vector");
        return 1.0 / fp + 1.0 / fm;
    }
    if (policy == Numerics::UseHooks && model.facts.is_riemannian && model.exact_tensor) {
        const Mat g = model.exact_tensor(q, S.col(0));
        const double det = (S.transpose() * g * S).determinant();
        if (!(det > 0.0)) throw DegenerateSpan("slice_volume: degenerate Riemannian Gram");
        return num::unit_ball_volume(k) / std::sqrt(det);
    }
    if (policy == Numerics::UseHooks && model.kind == ModelKind::Funk) {
        // translated-body slice: ellipsoid { c : (w + S c)^T A (w + S c) < 1 }
        const Mat& A = model.body->shape();
        const Vec w = q - model.body->center();
        const Mat B = S.transpose() * A * S;
        const Vec b = S.transpose() * (A * w);
        const double detB = B.determinant();
        if (!(detB > 0.0)) throw DegenerateSpan("slice_volume: degenerate Funk slice");
        const double rho2 = 1.0 - w.dot(A * w) + b.dot(B.ldlt().solve(b));
        if (!(rho2 > 0.0)) throw DegenerateSpan("slice_volume: empty Funk slice");
        return num::unit_ball_volume(k) * std::pow(rho2, 0.5 * k) / std::sqrt(detB);
    }
    return norms::indicatrix_volume_in_basis(model, q, S, samples, seed);
}

// d-volume of the indicatrix body in the (normal, span) basis.
double body_volume_in_frame(const MetricModel& model, const Vec& q, const Mat& M, int samples,
                            std::uint64_t seed, Numerics policy) {
    const int d = model.dim;
    if (policy == Numerics::UseHooks && model.facts.is_riemannian && model.exact_tensor) {
        const Mat g = model.exact_tensor(q, M.col(0));
        const double det = (M.transpose() * g * M).determinant();
        if (!(det > 0.0)) throw DegenerateSpan("induced_density: degenerate frame");
        return num::unit_ball_volume(d) / std::sqrt(det);
    }
    if (policy == Numerics::UseHooks && model.kind == ModelKind::Funk) {
        const double det = M.determinant();
        if (det == 0.0) throw DegenerateSpan("induced_density: degenerate frame");
        return model.body->volume() / std::abs(det);
    }
    return norms::indicatrix_volume_in_basis(model, q, M, samples, seed);
}

}  // namespace

std::vector<Vec> indicatrix_tangent_basis(const MetricModel& model, const Vec& x, const Vec& y,
                                          Numerics policy) {
    const auto data = norms::fundamental_tensor(model, x, y, policy);
    const Mat& g = data.tensor;
    const int d = model.dim;
    const Vec gy = g * y;
    const double yy = y.dot(gy);
    Eigen::HouseholderQR<Mat> qr{Mat(y)};
    const Mat Q = qr.householderQ();
    std::vector<Vec> out;
    out.reserve(d - 1);
    for (int j = 1; j < d; ++j) {
        Vec v = Q.col(j) - (Q.col(j).dot(gy) / yy) * y;
        v *= y.norm() / v.norm();
        out.push_back(v);
    }
    return out;
}

Vec normal_vector(const MetricModel& model, const Vec& q, const std::vector<Vec>& tangent_basis,
                  const Vec& hint, Numerics policy) {
    models::require_admissible_point(model, q);
    const int d = model.dim;
    if (static_cast<int>(tangent_basis.size()) != d - 1) {
        throw InvalidConfig("normal_vector: need d-1 tangent vectors");
    }
    const Mat S = span_matrix(tangent_basis, d);

    // Euclidean normal of the span as the initial guess.
    Eigen::FullPivLU<Mat> lu(S.transpose());
    if (lu.rank() != d - 1) throw DegenerateSpan("normal_vector: tangent basis is degenerate");
    Vec n = lu.kernel().col(0);
    int imax = 0;
    n.cwiseAbs().maxCoeff(&imax);
    if (hint.size() == d && hint.dot(n) != 0.0) {
        if (hint.dot(n) < 0.0) n = -n;
    } else if (n[imax] < 0.0) {
        n = -n;
    }
    n /= norms::eval_norm(model, q, n);

    // Riemannian fast path: g is direction-free, n = g^{-1} n0 rescaled.
    if (policy == Numerics::UseHooks && model.facts.is_riemannian && model.exact_tensor) {
        const Mat g = model.exact_tensor(q, n);
        Vec n0 = lu.kernel().col(0);
        if (n0.dot(n) < 0.0) n0 = -n0;
        Vec w = g.ldlt().solve(n0);
        return w / std::sqrt(w.dot(g * w));
    }

    auto residual = [&](const Vec& nn) {
        const Mat g = norms::fundamental_tensor_raw(model, q, nn, policy);
        Vec H(d);
        const Vec gn = g * nn;
        for (int j = 0; j < d - 1; ++j) H[j] = tangent_basis[j].dot(gn);
        H[d - 1] = norms::eval_norm(model, q, nn) - 1.0;
        return H;
    };

    Vec H = residual(n);
    for (int it = 0; it < 60; ++it) {
        if (H.cwiseAbs().maxCoeff() <= 1e-11) return n;
        const Mat g = norms::fundamental_tensor_raw(model, q, n, policy);
        Mat J(d, d);
        for (int j = 0; j < d - 1; ++j) J.row(j) = (g * tangent_basis[j]).transpose();
        J.row(d - 1) = (g * n).transpose() / norms::eval_norm(model, q, n);
        const Vec step = J.fullPivLu().solve(-H);
        double s = 1.0;
        bool accepted = false;
        for (int half = 0; half < 25; ++half) {
            const Vec cand = n + s * step;
            if (cand.norm() > model.tol.epsilon_zero) {
                const Vec Hc = residual(cand);
                if (Hc.cwiseAbs().maxCoeff() < H.cwiseAbs().maxCoeff()) {
                    n = cand;
                    H = Hc;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (!accepted) break;
    }
    if (H.cwiseAbs().maxCoeff() <= 1e-10) return n;
    throw NoConvergence("normal_vector: Newton iteration stalled");
}

DensityValue induced_density(const MetricModel& model, const Vec& q, const Vec& normal,
                             const std::vector<Vec>& span, int samples, std::uint64_t seed,
                             Numerics policy) {
    const int d = model.dim;
    if (static_cast<int>(span.size()) != d - 1) {
        throw InvalidConfig("induced_density: span must have d-1 vectors");
    }
    const double fn = norms::eval_norm(model, q, normal);
    if (!(fn > 0.0)) throw ZeroVector("induced_density: zero normal");
    Mat M(d, d);
    M.col(0) = normal / fn;
    double scale = M.col(0).norm();
    for (int j = 0; j < d - 1; ++j) {
        M.col(j + 1) = span[j];
        scale *= span[j].norm();
    }
    if (!(std::abs(M.determinant()) > 1e-12 * scale)) {
        throw DegenerateSpan("induced_density: frame is numerically degenerate");
    }

    const double vd = body_volume_in_frame(model, q, M, samples, seed, policy);
    DensityValue out;
    out.value = num::unit_ball_volume(d) / vd;
    out.log_value = std::log(num::unit_ball_volume(d)) - std::log(vd);
    const double vk =
        slice_volume(model, q, M.rightCols(d - 1), samples, mix2(seed, 1), policy);
    out.zeta = out.value * vk / num::unit_ball_volume(d - 1);
    return out;
}

double zeta_factor(const MetricModel& model, const AreaFrame& frame, int samples,
                   std::uint64_t seed, Numerics policy) {
    if (policy == Numerics::UseHooks && model.facts.is_riemannian) return 1.0;
    return induced_density(model, frame.q, frame.normal, frame.tangents, samples, seed, policy)
        .zeta;
}

double area_density(const MetricModel& model, const AreaFrame& frame,
                    const std::vector<Vec>& span, int samples, std::uint64_t seed,
                    Numerics policy) {
    const int d = model.dim;
    if (static_cast<int>(span.size()) != d - 1) {
        throw InvalidConfig("area_density: span must have d-1 vectors");
    }
    const auto base =
        induced_density(model, frame.q, frame.normal, frame.tangents, samples, seed, policy);
    const double vk =
        slice_volume(model, frame.q, span_matrix(span, d), samples, mix2(seed, 1), policy);
    return base.zeta * num::unit_ball_volume(d - 1) / vk;
}

DirectionQuadrature direction_quadrature(const MetricModel& model, const Vec& p, int resolution,
                                         std::uint64_t seed, Numerics policy, exec::Mode mode,
                                         int density_samples) {
    models::require_admissible_point(model, p);
    if (resolution < 8) throw InvalidConfig("direction_quadrature: resolution must be >= 8");
    const int d = model.dim;

    std::vector<Vec> us;         // Euclidean sphere nodes
    std::vector<double> ew;      // Euclidean scheme weights
    us.reserve(resolution);
    if (d == 2) {
        const double rot = static_cast<double>(rng::splitmix64(seed) >> 11) * 0x1.0p-53;
        for (int a = 0; a < resolution; ++a) {
            const double th = 2.0 * M_PI * (a + rot) / resolution;
            Vec u(2);
            u << std::cos(th), std::sin(th);
            us.push_back(u);
        }
        ew.assign(resolution, 2.0 * M_PI / resolution);
    } else {
        us = rng::unit_directions(d, resolution, seed);
        ew.assign(resolution, num::unit_sphere_area(d) / resolution);
    }

    DirectionQuadrature quad;
    quad.resolution = resolution;
    quad.seed = seed;
    quad.nodes.assign(resolution, Vec());
    quad.weights.assign(resolution, 0.0);

    std::vector<double> dens(resolution, 0.0);
    exec::for_each_index(static_cast<std::size_t>(resolution), mode, [&](std::size_t a) {
        const Vec& u = us[a];
        const double f = norms::eval_norm(model, p, u);
        const Vec y = u / f;
        // orthonormal completion of u, pushed forward through u -> u/F(p,u)
        Eigen::HouseholderQR<Mat> qr{Mat(u)};
        const Mat Q = qr.householderQ();
        const Mat g = norms::fundamental_tensor_raw(model, p, u, policy);
        const Vec Fy = (g * u) / f;
        std::vector<Vec> J;
        J.reserve(d - 1);
        for (int j = 1; j < d; ++j) {
            const Vec tj = Q.col(j);
            J.push_back(tj / f - u * (Fy.dot(tj) / (f * f)));
        }
        const auto dv = induced_density(model, p, y, J, density_samples,
                                        mix3(seed, 0xd9, a), policy);
        quad.nodes[a] = y;
        dens[a] = dv.value;
        quad.weights[a] = ew[a] * dv.value;
    });

    if (d >= 4) {
        double mean = 0.0;
        for (double v : dens) mean += v;
        mean /= resolution;
        double var = 0.0;
        for (double v : dens) var += (v - mean) * (v - mean);
        var /= std::max(1, resolution - 1);
        quad.weight_stderr = num::unit_sphere_area(d) * std::sqrt(var / resolution);
    }
    return quad;
}

// ---- eta bundles -------------------------------------------------------------

namespace {

struct EtaBundle {
    connection::GeodesicPath center;
    std::vector<connection::GeodesicPath> plus, minus;
    std::vector<Vec> basis;
    double h = 0.0;
    double dAp = 0.0;
    double log_dAp = 0.0;
    double reached = 0.0;
};

EtaBundle make_bundle(const MetricModel& model, const Vec& p, const Vec& y, double tmax,
                      double h, int samples, std::uint64_t seed, Numerics policy) {
    if (std::abs(norms::eval_norm(model, p, y) - 1.0) > 1e-9) {
        throw InvalidConfig("eta: direction must be F-unit");
    }
    EtaBundle B;
    B.h = h;
    B.basis = indicatrix_tangent_basis(model, p, y, policy);
    const auto dv = induced_density(model, p, y, B.basis, samples, seed, policy);
    B.dAp = dv.value;
    B.log_dAp = dv.log_value;
    connection::StepControl ctrl;
    B.center = connection::integrate_geodesic(model, p, y, tmax, ctrl, policy);
    B.reached = B.center.end_time();
    for (const Vec& v : B.basis) {
        for (double sgn : {1.0, -1.0}) {
            Vec yp = y + sgn * h * v;
            yp /= norms::eval_norm(model, p, yp);
            auto path = connection::integrate_geodesic(model, p, yp, tmax, ctrl, policy);
            B.reached = std::min(B.reached, path.end_time());
            (sgn > 0.0 ? B.plus : B.minus).push_back(std::move(path));
        }
    }
    return B;
}

struct EtaValue {
    double value = kNaN;
    double log_value = kNaN;
};

EtaValue eta_at(const MetricModel& model, const EtaBundle& B, double t, int samples,
                std::uint64_t seed, Numerics policy) {
    if (t > B.reached) return {};
    if (t == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    const int d = model.dim;
    Vec c(d), cd(d);
    B.center.state_at(t, c, cd);
    // near a chart wall the interpolated state can overshoot the admissible
    // margin, and the chart velocity decays below the zero threshold; both
    // mean the radius is past the numerically resolvable horizon
    if (!models::point_admissible(model, c) || cd.norm() < model.tol.epsilon_zero) {
        return {};
    }
    const Mat g = norms::fundamental_tensor_raw(model, c, cd, policy);
    const Vec gcd = g * cd;
    const double cc = cd.dot(gcd);
    std::vector<Vec> J;
    J.reserve(d - 1);
    for (int j = 0; j < d - 1; ++j) {
        Vec Jj = (B.plus[j].point_at(t) - B.minus[j].point_at(t)) / (2.0 * B.h);
        Jj -= (Jj.dot(gcd) / cc) * cd;  // drop the O(h^2) radial component
        J.push_back(Jj);
    }
    const auto dv = induced_density(model, c, cd, J, samples, seed, policy);
    return {dv.value / B.dAp, dv.log_value - B.log_dAp};
}

}  // namespace

double eta(const MetricModel& model, const Vec& p, const Vec& y, double t, double h,
           int samples, std::uint64_t seed, Numerics policy) {
    if (!(t > 0.0)) throw InvalidConfig("eta: t must be positive");
    const auto coarse = make_bundle(model, p, y, t, h, samples, seed, policy);
    const double v1 = eta_at(model, coarse, t, samples, mix2(seed, 0xa), policy).value;
    if (std::isnan(v1)) throw PointOutsideDomain("eta: geodesic bundle left the chart");
    const auto fine = make_bundle(model, p, y, t, 0.5 * h, samples, seed, policy);
    const double v2 = eta_at(model, fine, t, samples, mix2(seed, 0xa), policy).value;
    if (std::isnan(v2)) throw PointOutsideDomain("eta: geodesic bundle left the chart");
    if (std::abs(v1 - v2) > 1e-3 * std::max({std::abs(v1), std::abs(v2), 1e-300})) {
        throw NumericalNoise("eta: estimate not stable under step halving");
    }
    return v2;
}

RadialProfile radial_profile(const MetricModel& model, const Vec& p,
                             const std::vector<double>& radii, const DirectionQuadrature& quad,
                             double h, int samples, std::uint64_t seed, Numerics policy,
                             exec::Mode mode) {
    if (radii.empty()) throw InvalidConfig("radial_profile: empty radius grid");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1])) {
            throw InvalidConfig("radial_profile: radii must be positive and increasing");
        }
    }
    const double rmax = radii.back();

    // panel breakpoints: graded mesh merged with the requested radii
    std::vector<double> bps = num::graded_breakpoints(rmax, 0.4);
    bps.insert(bps.end(), radii.begin(), radii.end());
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              bps.end());

    const int gl_order = 7;
    const auto& rule = num::gauss_legendre(gl_order);

    // evaluation times: all Gauss nodes, then all positive breakpoints
    std::vector<double> times;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double mid = 0.5 * (bps[i] + bps[i + 1]);
        const double half = 0.5 * (bps[i + 1] - bps[i]);
        for (int m = 0; m < gl_order; ++m) times.push_back(mid + half * rule.nodes[m]);
    }
    const std::size_t n_gauss = times.size();
    for (std::size_t i = 1; i < bps.size(); ++i) times.push_back(bps[i]);

    const std::size_t n_nodes = quad.nodes.size();
    std::vector<std::vector<EtaValue>> rows(n_nodes);
    std::vector<double> reached(n_nodes, 0.0);
    exec::for_each_index(n_nodes, mode, [&](std::size_t a) {
        const auto B =
            make_bundle(model, p, quad.nodes[a], rmax, h, samples, mix3(seed, 1, a), policy);
        reached[a] = B.reached;
        auto& row = rows[a];
        row.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            row[i] = eta_at(model, B, times[i], samples, mix3(seed, 2 + i, a), policy);
        }
    });

    RadialProfile out;
    out.radii = radii;
    out.reached = *std::min_element(reached.begin(), reached.end());
    out.truncated = out.reached < rmax - 1e-12;

    // areas at every evaluation time, reduced in node order
    std::vector<double> area(times.size(), 0.0), log_area(times.size(), 0.0);
    std::vector<double> logs(n_nodes);
    for (std::size_t i = 0; i < times.size(); ++i) {
        double s = 0.0;
        bool ok = true;
        for (std::size_t a = 0; a < n_nodes; ++a) {
            const auto& ev = rows[a][i];
            if (std::isnan(ev.value)) {
                ok = false;
                break;
            }
            s += quad.weights[a] * ev.value;
            logs[a] = std::log(quad.weights[a]) + ev.log_value;
        }
        area[i] = ok ? s : kNaN;
        log_area[i] = ok ? num::log_sum_exp(logs) : kNaN;
    }

    // cumulative volume over panels; log-space variant accumulated in parallel
    std::vector<double> vol_at(bps.size(), 0.0), logv_terms;
    std::vector<double> log_vol_at(bps.size(), -std::numeric_limits<double>::infinity());
    std::size_t gi = 0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double half = 0.5 * (bps[i + 1] - bps[i]);
        double acc = 0.0;
        for (int m = 0; m < gl_order; ++m, ++gi) {
            acc += rule.weights[m] * half * area[gi];
            if (!std::isnan(log_area[gi])) {
                logv_terms.push_back(std::log(rule.weights[m] * half) + log_area[gi]);
            } else {
                logv_terms.push_back(kNaN);
            }
        }
        vol_at[i + 1] = vol_at[i] + acc;
        const bool bad = std::any_of(logv_terms.begin(), logv_terms.end(),
                                     [](double v) { return std::isnan(v); });
        log_vol_at[i + 1] = bad ? kNaN : num::log_sum_exp(logv_terms);
    }

    // pick out the requested radii (every radius is a breakpoint by construction)
    for (double r : radii) {
        const auto it = std::lower_bound(bps.begin(), bps.end(), r - 1e-12);
        const std::size_t bi = static_cast<std::size_t>(it - bps.begin());
        const std::size_t ti = n_gauss + bi - 1;  // positive breakpoints only
        out.areas.push_back(area[ti]);
        out.log_areas.push_back(log_area[ti]);
        out.volumes.push_back(vol_at[bi]);
        out.log_volumes.push_back(log_vol_at[bi]);
    }
    return out;
}

double sphere_area(const MetricModel& model, const Vec& p, double t,
                   const DirectionQuadrature& quad, double h, int samples, std::uint64_t seed,
                   Numerics policy, exec::Mode mode) {
    if (!(t > 0.0)) throw InvalidConfig("sphere_area: t must be positive");
    const auto prof = radial_profile(model, p, {t}, quad, h, samples, seed, policy, mode);
    if (std::isnan(prof.areas[0])) {
        throw PointOutsideDomain("sphere_area: radius beyond the reachable chart");
    }
    return prof.areas[0];
}

double ball_volume(const MetricModel& model, const Vec& p, double r,
                   const DirectionQuadrature& quad, double h, int samples, std::uint64_t seed,
                   Numerics policy, exec::Mode mode) {
    if (!(r > 0.0)) throw InvalidConfig("ball_volume: r must be positive");
    const auto prof = radial_profile(model, p, {r}, quad, h, samples, seed, policy, mode);
    if (std::isnan(prof.volumes[0])) {
        throw PointOutsideDomain("ball_volume: radius beyond the reachable chart");
    }
    return prof.volumes[0];
}

double mean_curvature_sphere(const MetricModel& model, const Vec& p, const Vec& y, double t,
                             int samples, std::uint64_t seed, Numerics policy) {
    if (!(t > 0.0)) throw InvalidConfig("mean_curvature_sphere: t must be positive");
    const double ht = std::min(std::max(0.02 * t, 1e-3), 0.5 * t);
    const auto B = make_bundle(model, p, y, t + ht, 1e-4, samples, seed, policy);
    const auto lo = eta_at(model, B, t - ht, samples, mix2(seed, 11), policy);
    const auto hi = eta_at(model, B, t + ht, samples, mix2(seed, 12), policy);
    if (std::isnan(lo.value) || std::isnan(hi.value)) {
        throw PointOutsideDomain("mean_curvature_sphere: bundle left the chart");
    }
    return (hi.log_value - lo.log_value) / (2.0 * ht);
}

// ---- Monte Carlo oracle -------------------------------------------------------

double model_distance(const MetricModel& model, const Vec& a, const Vec& b) {
    models::require_admissible_point(model, a);
    models::require_admissible_point(model, b);
    switch (model.kind) {
        case ModelKind::Euclidean:
            return (b - a).norm();
        case ModelKind::Hyperbolic:
        case ModelKind::Funk:
        case ModelKind::Hilbert:
            return model.exact_distance(a, b);
        case ModelKind::Custom:
            break;
    }
    throw UnsupportedModel("model_distance: no direct distance functional for this model");
}

double segment_distance(const MetricModel& model, const Vec& a, const Vec& b) {
    models::require_admissible_point(model, a);
    models::require_admissible_point(model, b);
    const Vec dir = b - a;
    if (dir.norm() == 0.0) return 0.0;
    auto f = [&](double s) { return norms::eval_norm(model, a + s * dir, dir); };
    return num::adaptive_simpson(f, 0.0, 1.0, 1e-11, 40);
}

McVolume mc_ball_volume(const MetricModel& model, const Vec& p, double r, long n_samples,
                        std::uint64_t seed, exec::Mode mode) {
    models::require_admissible_point(model, p);
    if (n_samples < 10000) throw InvalidConfig("mc_ball_volume: need at least 10^4 samples");
    if (!(r > 0.0)) throw InvalidConfig("mc_ball_volume: r must be positive");
    const int d = model.dim;

    Vec lo(d), hi(d);
    std::function<double(const Vec&)> weight;
    switch (model.kind) {
        case ModelKind::Euclidean:
            lo = p.array() - r;
            hi = p.array() + r;
            weight = [](const Vec&) { return 1.0; };
            break;
        case ModelKind::Hyperbolic: {
            const double d0 = model.exact_distance(Vec::Zero(d), p);
            const double rho = std::min(std::tanh(0.5 * model.k * (d0 + r)), 1.0 - 1e-9);
            lo = Vec::Constant(d, -rho);
            hi = Vec::Constant(d, rho);
            weight = model.exact_sigma;
            break;
        }
        case ModelKind::Funk:
        case ModelKind::Hilbert: {
            lo = model.body->center() - model.body->semi_axes();
            hi = model.body->center() + model.body->semi_axes();
            if (model.kind == ModelKind::Funk) {
                weight = model.exact_sigma;
            } else {
                weight = [&model](const Vec& z) {
                    return norms::sigma_density_radial(model, z, 512);
                };
            }
            break;
        }
        case ModelKind::Custom:
            throw UnsupportedModel("mc_ball_volume: no direct distance functional");
    }

    double box = 1.0;
    for (int j = 0; j < d; ++j) box *= hi[j] - lo[j];

    constexpr long kChunk = 4096;
    const long nchunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<double> sums(nchunks, 0.0), sumsq(nchunks, 0.0);
    exec::for_each_index(static_cast<std::size_t>(nchunks), mode, [&](std::size_t ci) {
        const rng::CounterRng gen(seed, ci);
        const long lo_i = static_cast<long>(ci) * kChunk;
        const long hi_i = std::min(n_samples, lo_i + kChunk);
        double s = 0.0, s2 = 0.0;
        Vec z(d);
        for (long i = lo_i; i < hi_i; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i - lo_i) * d;
            for (int j = 0; j < d; ++j) {
                z[j] = lo[j] + (hi[j] - lo[j]) * gen.uniform(base + j);
            }
            if (!models::point_admissible(model, z)) continue;
            if (model_distance(model, p, z) >= r) continue;
            const double w = weight(z);
            s += w;
            s2 += w * w;
        }
        sums[ci] = s;
        sumsq[ci] = s2;
    });

    double s = 0.0, s2 = 0.0;
    for (long ci = 0; ci < nchunks; ++ci) {
        s += sums[ci];
        s2 += sumsq[ci];
    }
    const double nn = static_cast<double>(n_samples);
    McVolume out;
    out.samples = n_samples;
    out.estimate = box * s / nn;
    const double var = std::max(0.0, (s2 - s * s / nn) / (nn - 1.0));
    out.stderr_value = box * std::sqrt(var / nn);
    return out;
}

}  // namespace finsler::measure
