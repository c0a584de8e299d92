#include "finsler/connection.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/norms.hpp"
#include "finsler/numerics.hpp"

namespace finsler::connection {

namespace {

// x-partials of the fundamental tensor, Richardson-extrapolated and with the
// step capped near the chart boundary.
std::vector<Mat> tensor_x_partials(const MetricModel& model, const Vec& x, const Vec& y,
                                   Numerics policy) {
    const int d = model.dim;
    double h = num::fd_step_first(x.norm());
    const double gap = models::chart_boundary_gap(model, x);
    if (std::isfinite(gap)) h = std::min(h, 0.125 * gap);
    std::vector<Mat> dg(d);
    Vec p = x;
    for (int kk = 0; kk < d; ++kk) {
        auto eval = [&](double step) {
            p[kk] = x[kk] + step;
            Mat g = norms::fundamental_tensor_raw(model, p, y, policy);
            p[kk] = x[kk];
            return g;
        };
        const Mat d1 = (eval(h) - eval(-h)) / (2.0 * h);
        const Mat d2 = (eval(h / 2.0) - eval(-h / 2.0)) / h;
        dg[kk] = (4.0 * d2 - d1) / 3.0;
    }
    return dg;
}

Vec spray_generic(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    const int d = model.dim;
    const Mat g = norms::fundamental_tensor_raw(model, x, y, policy);
    const auto dg = tensor_x_partials(model, x, y, policy);
    Mat m = Mat::Zero(d, d);
    Vec c(d);
    for (int kk = 0; kk < d; ++kk) {
        m += y[kk] * dg[kk];
        c[kk] = y.dot(dg[kk] * y);
    }
    const Vec rhs = 2.0 * (m * y) - c;
    return 0.25 * g.ldlt().solve(rhs);
}

// No input guards: used inside integration loops where the caller has
// already checked admissibility and where speeds may legitimately decay
// below the user-facing zero threshold.
Vec spray_eval(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    if (policy == Numerics::UseHooks && model.exact_spray) return model.exact_spray(x, y);
    return spray_generic(model, x, y, policy);
}

}  // namespace

Vec geodesic_coefficients(const MetricModel& model, const Vec& x, const Vec& y,
                          Numerics policy) {
    if (y.norm() < model.tol.epsilon_zero) {
        throw ZeroVector("geodesic_coefficients: direction below the zero threshold");
    }
    models::require_admissible_point(model, x);
    return spray_eval(model, x, y, policy);
}

Mat connection_coefficients(const MetricModel& model, const Vec& x, const Vec& y,
                            Numerics policy) {
    if (y.norm() < model.tol.epsilon_zero) {
        throw ZeroVector("connection_coefficients: direction below the zero threshold");
    }
    const int d = model.dim;
    // The stencil width balances truncation against the noise floor of one
    // spray evaluation: ~machine eps for a registered closed form, but ~1e-7
    // when the spray itself comes out of nested tensor differences.
    const bool exact_g = policy == Numerics::UseHooks && model.exact_spray != nullptr;
    const double h = exact_g ? num::fd_step_first(y.norm()) : 2e-2 * (1.0 + y.norm());
    Mat n(d, d);
    Vec q = y;
    for (int j = 0; j < d; ++j) {
        auto eval = [&](double step) {
            q[j] = y[j] + step;
            Vec gc = geodesic_coefficients(model, x, q, policy);
            q[j] = y[j];
            return gc;
        };
        const Vec d1 = (eval(h) - eval(-h)) / (2.0 * h);
        const Vec d2 = (eval(h / 2.0) - eval(-h / 2.0)) / h;
        n.col(j) = (4.0 * d2 - d1) / 3.0;
    }
    return n;
}

Vec covariant_derivative(const MetricModel& model, const Vec& x, const Vec& y, const Vec& U,
                         const Vec& dU_along_y, Numerics policy) {
    const Mat n = connection_coefficients(model, x, y, policy);
    return dU_along_y + n * U;
}

void GeodesicPath::state_at(double tq, Vec& xq, Vec& vq) const {
    const std::size_t m = t.size();
    if (m == 0) throw Error("GeodesicPath: empty path");
    if (tq <= t.front()) {
        xq = x.front();
        vq = v.front();
        return;
    }
    if (tq >= t.back()) {
        xq = x.back();
        vq = v.back();
        return;
    }
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t i1 = static_cast<std::size_t>(it - t.begin());
    const std::size_t i0 = i1 - 1;
    const double h = t[i1] - t[i0];
    const double s = (tq - t[i0]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    xq = h00 * x[i0] + (h10 * h) * v[i0] + h01 * x[i1] + (h11 * h) * v[i1];
    vq = h00 * v[i0] + (h10 * h) * a[i0] + h01 * v[i1] + (h11 * h) * a[i1];
}

Vec GeodesicPath::point_at(double tq) const {
    Vec xq, vq;
    state_at(tq, xq, vq);
    return xq;
}

namespace {

struct State {
    Vec x;
    Vec v;
};

}  // namespace

GeodesicPath integrate_geodesic(const MetricModel& model, const Vec& x0, const Vec& y0,
                                double T, const StepControl& ctrl, Numerics policy) {
    models::require_admissible_point(model, x0);
    if (y0.norm() < model.tol.epsilon_zero) {
        throw ZeroVector("integrate_geodesic: zero initial velocity");
    }
    if (T < 0.0) throw InvalidConfig("integrate_geodesic: T must be >= 0");

    bool exited = false;
    auto accel = [&](const Vec& xx, const Vec& vv, Vec& out) -> bool {
        if (!models::point_admissible(model, xx)) return false;
        out = -2.0 * spray_eval(model, xx, vv, policy);
        return true;
    };

    // One classical RK4 step; false if any stage left the admissible chart.
    auto rk4 = [&](const State& s, double h, State& out) -> bool {
        Vec a1, a2, a3, a4;
        if (!accel(s.x, s.v, a1)) return false;
        if (!accel(s.x + 0.5 * h * s.v, s.v + 0.5 * h * a1, a2)) return false;
        if (!accel(s.x + 0.5 * h * s.v + 0.25 * h * h * a1, s.v + 0.5 * h * a2, a3)) {
            return false;
        }
        if (!accel(s.x + h * s.v + 0.5 * h * h * a2, s.v + h * a3, a4)) return false;
        out.x = s.x + h * s.v + (h * h / 6.0) * (a1 + a2 + a3);
        out.v = s.v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        return models::point_admissible(model, out.x);
    };

    GeodesicPath path;
    State cur{x0, y0};
    double tcur = 0.0;
    const double f0 = norms::eval_norm(model, x0, y0);

    Vec acc0;
    if (!accel(cur.x, cur.v, acc0)) {
        throw PointOutsideDomain("integrate_geodesic: start point at the chart margin");
    }
    path.t.push_back(0.0);
    path.x.push_back(cur.x);
    path.v.push_back(cur.v);
    path.a.push_back(acc0);

    double h = ctrl.fixed_step ? ctrl.initial_step : std::min(ctrl.initial_step, ctrl.max_step);
    long steps = 0;
    double drift = 0.0;

    while (tcur < T) {
        if (++steps > ctrl.max_steps) {
            throw StepLimitExceeded("integrate_geodesic: step budget exhausted");
        }
        h = std::min(h, T - tcur);

        State full, half, two;
        bool ok = rk4(cur, h, full);
        if (ok && !ctrl.fixed_step) {
            ok = rk4(cur, 0.5 * h, half) && rk4(half, 0.5 * h, two);
        }
        // A step whose displacement underflows against x has stalled at the
        // chart wall (the velocity there decays in chart coordinates); treat
        // it as a failed step so the shrink loop converts it to a domain exit.
        if (ok && ((ctrl.fixed_step ? full.x : two.x) - cur.x).lpNorm<Eigen::Infinity>() == 0.0) {
            ok = false;
        }
        if (!ok) {
            if (ctrl.fixed_step) {
                exited = true;
                break;
            }
            h *= 0.25;
            if (h < 1e-13 * (1.0 + tcur)) {
                exited = true;
                break;
            }
            continue;
        }

        if (!ctrl.fixed_step) {
            const double scale =
                1.0 + std::max(cur.x.lpNorm<Eigen::Infinity>(), cur.v.lpNorm<Eigen::Infinity>());
            const double err = std::max((full.x - two.x).lpNorm<Eigen::Infinity>(),
                                        (full.v - two.v).lpNorm<Eigen::Infinity>()) /
                               15.0;
            const double tol = ctrl.error_tol * scale * std::max(h, 1e-3);
            if (err > tol) {
                h *= std::max(0.2, 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2));
                continue;
            }
            // Richardson-corrected accepted state.
            cur.x = two.x + (two.x - full.x) / 15.0;
            cur.v = two.v + (two.v - full.v) / 15.0;
            if (!models::point_admissible(model, cur.x)) {
                exited = true;
                break;
            }
            tcur += h;
            if (err > 0.0) {
                h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(tol / err, 0.2)));
            } else {
                h *= 5.0;
            }
            h = std::min(h, ctrl.max_step);
        } else {
            cur = full;
            tcur += h;
        }

        Vec acc;
        if (!accel(cur.x, cur.v, acc)) {
            exited = true;
            break;
        }
        path.t.push_back(tcur);
        path.x.push_back(cur.x);
        path.v.push_back(cur.v);
        path.a.push_back(acc);
        const double f = norms::eval_norm(model, cur.x, cur.v);
        drift = std::max(drift, std::abs(f - f0) / f0);
    }

    path.status = exited ? PathStatus::DomainExit : PathStatus::Complete;
    path.speed_drift = drift;
    return path;
}

Vec exp_map(const MetricModel& model, const Vec& p, const Vec& y, double t,
            const StepControl& ctrl, Numerics policy) {
    if (t < 0.0) throw InvalidConfig("exp_map: t must be >= 0");
    if (t == 0.0) {
        models::require_admissible_point(model, p);
        return p;
    }
    const double f = norms::eval_norm(model, p, y);
    if (std::abs(f - 1.0) > 1e-9) {
        throw InvalidConfig("exp_map: direction must be F-unit");
    }
    GeodesicPath path = integrate_geodesic(model, p, y, t, ctrl, policy);
    if (path.status != PathStatus::Complete || path.end_time() < t) {
        throw PointOutsideDomain("exp_map: geodesic left the chart before the requested time");
    }
    return path.x.back();
}

}  // namespace finsler::connection
