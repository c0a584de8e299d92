#pragma once

#include "finsler/types.hpp"

namespace finsler {

// Strongly convex ellipsoidal body { z : gauge(z) < 1 } with
// gauge(z) = (z - c)^T A (z - c), A symmetric positive definite.
class ConvexBody {
  public:
    static ConvexBody unit_ball(int dim);
    static ConvexBody ellipsoid(const Vec& center, const Vec& semi_axes);

    int dim() const { return static_cast<int>(center_.size()); }
    const Vec& center() const { return center_; }
    const Mat& shape() const { return shape_; }
    const Vec& semi_axes() const { return semi_axes_; }

    double gauge(const Vec& z) const;
    Vec gauge_gradient(const Vec& z) const;

    double volume() const;         // Euclidean volume of the body
    double max_semi_axis() const;
    double min_semi_axis() const;

    // Smallest s > 0 with gauge(x + s y) = 1 for interior x and nonzero y,
    // via the stable closed-form quadratic root.
    double ray_boundary_parameter(const Vec& x, const Vec& y) const;

    // Same root through a generic bisection+Newton solve on the gauge along
    // the ray; kept as an independent cross-check of the closed form.
    double ray_boundary_parameter_generic(const Vec& x, const Vec& y) const;

    // Euclidean distance from x to the complement, used to cap x-direction
    // finite-difference steps.
    double boundary_gap(const Vec& x) const;

  private:
    ConvexBody(Vec center, Mat shape, Vec semi_axes);

    Vec center_;
    Mat shape_;      // A
    Vec semi_axes_;  // for volume / extent bookkeeping
};

}  // namespace finsler
