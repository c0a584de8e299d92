#include "finsler/convex_body.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

ConvexBody::ConvexBody(Vec center, Mat shape, Vec semi_axes)
    : center_(std::move(center)), shape_(std::move(shape)), semi_axes_(std::move(semi_axes)) {}

ConvexBody ConvexBody::unit_ball(int dim) {
    if (dim < 1) throw InvalidConfig("body: dim must be >= 1");
    return ConvexBody(Vec::Zero(dim), Mat::Identity(dim, dim), Vec::Ones(dim));
}

ConvexBody ConvexBody::ellipsoid(const Vec& center, const Vec& semi_axes) {
    if (center.size() != semi_axes.size()) {
        throw InvalidConfig("body: center and semi_axes dimensions differ");
    }
    for (int i = 0; i < semi_axes.size(); ++i) {
        if (!(semi_axes[i] > 0.0)) throw InvalidConfig("body: semi_axes must be positive");
    }
    const int d = static_cast<int>(center.size());
    Mat A = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) A(i, i) = 1.0 / (semi_axes[i] * semi_axes[i]);
    return ConvexBody(center, A, semi_axes);
}

double ConvexBody::gauge(const Vec& z) const {
    const Vec w = z - center_;
    return w.dot(shape_ * w);
}

Vec ConvexBody::gauge_gradient(const Vec& z) const {
    return 2.0 * (shape_ * (z - center_));
}

double ConvexBody::volume() const {
    return num::unit_ball_volume(dim()) * semi_axes_.prod();
}

double ConvexBody::max_semi_axis() const { return semi_axes_.maxCoeff(); }

double ConvexBody::min_semi_axis() const { return semi_axes_.minCoeff(); }

double ConvexBody::ray_boundary_parameter(const Vec& x, const Vec& y) const {
    const Vec w = x - center_;
    const Vec Ay = shape_ * y;
    const double a = y.dot(Ay);
    const double b = w.dot(Ay);
    const double c = 1.0 - w.dot(shape_ * w);
    if (!(a > 0.0)) throw ZeroVector("ray_boundary_parameter: zero direction");
    if (c <= 0.0) throw PointOutsideDomain("ray_boundary_parameter: base point not interior");
    const double disc = std::sqrt(b * b + a * c);
    // Stable root: avoid cancellation when b > 0.
    return (b > 0.0) ? c / (b + disc) : (disc - b) / a;
}

double ConvexBody::ray_boundary_parameter_generic(const Vec& x, const Vec& y) const {
    if (y.norm() == 0.0) throw ZeroVector("ray_boundary_parameter: zero direction");
    if (gauge(x) >= 1.0) throw PointOutsideDomain("ray_boundary_parameter: base point not interior");
    auto g = [&](double s) { return gauge(x + s * y) - 1.0; };
    auto dg = [&](double s) { return gauge_gradient(x + s * y).dot(y); };
    // Bracket the boundary crossing by doubling.
    double hi = max_semi_axis() / std::max(y.norm(), 1e-300);
    while (g(hi) < 0.0) hi *= 2.0;
    return num::newton_bisection(g, dg, 0.0, hi, 1e-12);
}

double ConvexBody::boundary_gap(const Vec& x) const {
    const double gv = gauge(x);
    if (gv >= 1.0) return 0.0;
    // gauge is quadratic, so sqrt(gauge) is the Minkowski functional of the
    // centered ellipsoid; the Euclidean gap is at least (1 - sqrt(g)) * a_min.
    return (1.0 - std::sqrt(gv)) * min_semi_axis();
}

}  // namespace finsler
