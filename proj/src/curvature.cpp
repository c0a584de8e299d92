#include "finsler/curvature.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/norms.hpp"
#include "finsler/numerics.hpp"

namespace finsler::curvature {

namespace {

using GFun = std::function<Vec(const Vec&, const Vec&)>;

// Steps for differencing the spray. Coarser than the bare cbrt(eps) step so
// that residual noise in the generic (nested finite-difference) spray stays
// well below truncation error.
double g_step(double scale) {
    return 1e2 * std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + scale);
}

Vec central_x(const GFun& G, const Vec& x, const Vec& y, const Vec& dir, double h) {
    return (G(x + h * dir, y) - G(x - h * dir, y)) / (2.0 * h);
}

Vec central_y(const GFun& G, const Vec& x, const Vec& y, const Vec& dir, double h) {
    return (G(x, y + h * dir) - G(x, y - h * dir)) / (2.0 * h);
}

Vec rich_x(const GFun& G, const Vec& x, const Vec& y, const Vec& dir, double h) {
    return (4.0 * central_x(G, x, y, dir, 0.5 * h) - central_x(G, x, y, dir, h)) / 3.0;
}

Vec rich_y(const GFun& G, const Vec& x, const Vec& y, const Vec& dir, double h) {
    return (4.0 * central_y(G, x, y, dir, 0.5 * h) - central_y(G, x, y, dir, h)) / 3.0;
}

// Scheme A: direct stencils on G. The two second-derivative terms only ever
// appear contracted with y or G, so they are taken as directional derivatives
// of first differences rather than full third-order tensors.
Mat scheme_direct(const GFun& G, const Vec& x, const Vec& y, const Vec& G0, double hx,
                  double hy, double hy2, int d) {
    Mat dGdx(d, d), N(d, d), A2(d, d), A3(d, d);
    for (int k = 0; k < d; ++k) {
        const Vec ek = Vec::Unit(d, k);
        dGdx.col(k) = rich_x(G, x, y, ek, hx);
        N.col(k) = rich_y(G, x, y, ek, hy);
    }
    const double sx = hx / (1.0 + y.norm());
    const double sg = hy2 / (1.0 + G0.norm());
    for (int k = 0; k < d; ++k) {
        const Vec ek = Vec::Unit(d, k);
        // y^j d2G/dx^j dy^k: x-offset along y of the y-difference
        A2.col(k) = (central_y(G, x + sx * y, y, ek, hy) -
                     central_y(G, x - sx * y, y, ek, hy)) /
                    (2.0 * sx);
        // G^j d2G/dy^j dy^k: y-offset along G of the y-difference
        A3.col(k) = (central_y(G, x, y + sg * G0, ek, hy) -
                     central_y(G, x, y - sg * G0, ek, hy)) /
                    (2.0 * sg);
    }
    return 2.0 * dGdx - A2 + 2.0 * A3 - N * N;
}

// Scheme B: first differences of the connection coefficients N(x, y), with
// Richardson extrapolation on the outer derivative and different step sizes,
// so its error profile is independent of scheme A.
Mat scheme_connection(const GFun& G, const Vec& x, const Vec& y, const Vec& G0, double hx,
                      double hy, double hy2, int d) {
    auto Nf = [&](const Vec& xx, const Vec& yy) {
        Mat N(d, d);
        for (int j = 0; j < d; ++j) N.col(j) = central_y(G, xx, yy, Vec::Unit(d, j), 0.5 * hy);
        return N;
    };
    auto rich_of = [](const std::function<Mat(double)>& D, double s) {
        return ((4.0 * D(0.5 * s) - D(s)) / 3.0).eval();
    };

    Mat dGdx(d, d);
    for (int k = 0; k < d; ++k) dGdx.col(k) = central_x(G, x, y, Vec::Unit(d, k), 0.7 * hx);

    const double sx = 1.3 * hx / (1.0 + y.norm());
    const Mat B2 = rich_of(
        [&](double s) { return ((Nf(x + s * y, y) - Nf(x - s * y, y)) / (2.0 * s)).eval(); },
        sx);
    const double sg = 1.4 * hy2 / (1.0 + G0.norm());
    const Mat B3 = rich_of(
        [&](double s) { return ((Nf(x, y + s * G0) - Nf(x, y - s * G0)) / (2.0 * s)).eval(); },
        sg);
    const Mat N0 = Nf(x, y);
    return 2.0 * dGdx - B2 + 2.0 * B3 - N0 * N0;
}

// sigma evaluator that is smooth in x: closed form when available, else the
// radial quadrature (never the containment estimate, whose indicator jumps
// would poison finite differences).
std::function<double(const Vec&)> smooth_sigma(const MetricModel& model, Numerics policy) {
    if (policy == Numerics::UseHooks && model.exact_sigma) return model.exact_sigma;
    return [&model](const Vec& xx) { return norms::sigma_density_radial(model, xx); };
}

}  // namespace

Mat riemann_curvature(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    models::require_admissible_point(model, x);
    if (y.norm() < model.tol.epsilon_zero) {
        throw ZeroVector("riemann_curvature: direction below the zero threshold");
    }
    const int d = model.dim;
    auto G = [&](const Vec& xx, const Vec& yy) {
        return connection::geodesic_coefficients(model, xx, yy, policy);
    };
    const double gap = models::chart_boundary_gap(model, x);
    const double hx = std::min(g_step(x.norm()), gap / 8.0);
    const double hy = g_step(y.norm());
    const double hy2 = num::fd_step_second(y.norm());
    const Vec G0 = G(x, y);

    const Mat RA = scheme_direct(G, x, y, G0, hx, hy, hy2, d);
    const Mat RB = scheme_connection(G, x, y, G0, hx, hy, hy2, d);
    const double scale = 1.0 + RA.cwiseAbs().maxCoeff();
    if ((RA - RB).cwiseAbs().maxCoeff() > 10.0 * model.tol.tol_curv * scale) {
        throw NumericalNoise("riemann_curvature: difference schemes disagree beyond tolerance");
    }
    return RA;
}

double flag_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& u,
                      Numerics policy) {
    const auto data = norms::fundamental_tensor(model, x, y, policy);
    const Mat& g = data.tensor;
    const double f2 = y.dot(g * y);  // = F^2 by Euler homogeneity
    const Vec gu = g * u;
    const double uu = u.dot(gu);
    const double yu = y.dot(gu);
    const double denom = f2 * uu - yu * yu;
    if (!(denom > 1e-10 * f2 * uu) || !(uu > 0.0)) {
        throw DegenerateFlag("flag_curvature: flag pole and transverse edge are parallel");
    }
    const Mat R = riemann_curvature(model, x, y, policy);
    return (R * u).dot(gu) / denom;
}

double ricci_scalar(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    return riemann_curvature(model, x, y, policy).trace();
}

double distortion(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    const auto data = norms::fundamental_tensor(model, x, y, policy);
    const double det = data.tensor.determinant();
    if (!(det > 0.0)) throw DegenerateTensor("distortion: non-positive tensor determinant");
    return 0.5 * std::log(det) - std::log(smooth_sigma(model, policy)(x));
}

double s_curvature(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    const Mat N = connection::connection_coefficients(model, x, y, policy);
    const auto sigma = smooth_sigma(model, policy);
    const double gap = models::chart_boundary_gap(model, x);
    const double h = std::min(num::fd_step_first(x.norm()), gap / 8.0);
    const Vec grad = num::gradient(sigma, x, h);
    return N.trace() - y.dot(grad) / sigma(x);
}

double s_curvature_via_distortion(const MetricModel& model, const Vec& x, const Vec& y,
                                  Numerics policy) {
    const double f = norms::eval_norm(model, x, y);
    if (!(f > 0.0)) throw ZeroVector("s_curvature_via_distortion: zero direction");
    const double h = 1e-3 / (1.0 + f);
    connection::StepControl ctrl;
    ctrl.error_tol = 1e-12;
    ctrl.initial_step = 0.5 * h;
    ctrl.max_step = h;
    const auto path = connection::integrate_geodesic(model, x, y, 2.0 * h, ctrl, policy);
    if (path.end_time() < 2.0 * h) {
        throw PointOutsideDomain("s_curvature_via_distortion: too close to the chart boundary");
    }
    Vec xq(model.dim), vq(model.dim);
    double tau[3];
    for (int i = 0; i < 3; ++i) {
        path.state_at(i * h, xq, vq);
        tau[i] = distortion(model, xq, vq, policy);
    }
    // one-sided second-order difference; avoids integrating backwards, which
    // for non-reversible metrics is a different geodesic
    return (-3.0 * tau[0] + 4.0 * tau[1] - tau[2]) / (2.0 * h);
}

}  // namespace finsler::curvature
