#pragma once

#include <cstdint>

#include "finsler/models.hpp"
#include "finsler/types.hpp"

namespace finsler::norms {

using models::MetricModel;

// F(x, y). Zero vectors map to 0; positive 1-homogeneous in y.
double eval_norm(const MetricModel& model, const Vec& x, const Vec& y);

// Fundamental tensor g_y = y-Hessian of F^2/2 at (x, y), plus F itself.
// Generic path: Richardson-extrapolated symmetric stencils on F^2/2.
// Throws DegenerateTensor when the minimum eigenvalue is <= tol_pd.
MinkowskiData fundamental_tensor(const MetricModel& model, const Vec& x, const Vec& y,
                                 Numerics policy = Numerics::UseHooks);

// Fundamental tensor without admissibility or definiteness checks; building
// block for derivative loops where the caller guards the inputs once.
Mat fundamental_tensor_raw(const MetricModel& model, const Vec& x, const Vec& y,
                           Numerics policy = Numerics::UseHooks);

// Minimum eigenvalue of g over sampled directions; non-positive values are
// reported (not thrown) so callers can inspect near-degenerate norms.
double strong_convexity_report(const MetricModel& model, const Vec& x, int num_dirs,
                               std::uint64_t seed);

// Euclidean volume of { y : F(x, y) < 1 } from the radial form of the volume
// integral over deterministic unit directions, preconditioned through the
// fundamental-tensor ellipsoid so slab-shaped indicatrices stay well
// conditioned. Deterministic per seed; exact on quadratic norms.
double indicatrix_volume(const MetricModel& model, const Vec& x, int samples,
                         std::uint64_t seed);

// Same estimate with the indicatrix expressed in the columns of basis
// (coefficient-space volume). basis is d x k with 1 <= k <= d; for k < d this
// is the k-volume of the slice { c : F(x, basis c) < 1 }; k = 1 is the exact
// ray interval.
double indicatrix_volume_in_basis(const MetricModel& model, const Vec& x, const Mat& basis,
                                  int samples, std::uint64_t seed);

// Busemann-Hausdorff density sigma_F(x) = Vol_E(B^d) / Vol_E(B_x).
// UseHooks takes the model's closed form when present (Riemannian sqrt(det g),
// Funk translate), otherwise the containment estimate.
double sigma_density(const MetricModel& model, const Vec& x, int samples,
                     std::uint64_t seed, Numerics policy = Numerics::UseHooks);

// Radial-quadrature density: Vol(B_x) = (1/d) * integral of (1/F(x,u))^d over
// the Euclidean unit sphere, on a fixed node set. Unlike the containment
// estimate this is smooth in x, so it is the evaluator used inside
// finite-difference formulas (S-curvature, distortion). nodes <= 0 picks a
// per-dimension default. Cross-checked against sigma_density in tests.
double sigma_density_radial(const MetricModel& model, const Vec& x, int nodes = 0);

// Smallest s > 0 with x + s y on the body boundary.
double ray_boundary_parameter(const ConvexBody& body, const Vec& x, const Vec& y);

}  // namespace finsler::norms
