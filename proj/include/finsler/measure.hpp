#pragma once

#include <cstdint>
#include <vector>

#include "finsler/models.hpp"
#include "finsler/parallel.hpp"
#include "finsler/types.hpp"

namespace finsler::measure {

using models::MetricModel;

// ---- frames and induced densities ------------------------------------------

struct AreaFrame {
    Vec q;                      // base point
    Vec normal;                 // F-unit vector with g_n(v, n) = 0 for tangents v
    std::vector<Vec> tangents;  // d-1 independent tangent vectors
};

// d-1 vectors spanning the g_y-orthogonal complement of y (the tangent space
// of the indicatrix at y), each of Euclidean length |y|.
std::vector<Vec> indicatrix_tangent_basis(const MetricModel& model, const Vec& x, const Vec& y,
                                          Numerics policy = Numerics::UseHooks);

// Damped Newton solve for the F-unit normal of the hyperplane spanned by
// tangent_basis: g_n(v, n) = 0, F(q, n) = 1, residual <= 1e-10. hint selects
// the orientation (zero hint: positive Euclidean pairing with the QR normal).
Vec normal_vector(const MetricModel& model, const Vec& q, const std::vector<Vec>& tangent_basis,
                  const Vec& hint = Vec(), Numerics policy = Numerics::UseHooks);

struct DensityValue {
    double value = 0.0;      // dA_F on the span
    double log_value = 0.0;  // log of the same, for deep-tail profiles
    double zeta = 0.0;       // ratio of dA_F to the intrinsic Busemann-Hausdorff form
};

// Induced area density on span (d-1 vectors) with F-unit normal n at q:
// dA(span) = Vol_E(B^d) / Vol(B_q in basis (n, span)). zeta and the intrinsic
// (d-1)-density are reported from the same containment estimates so their
// product never sees the individual QMC errors. Fast paths: Riemannian Gram
// determinants, Funk body translation; otherwise quasi-random containment.
DensityValue induced_density(const MetricModel& model, const Vec& q, const Vec& normal,
                             const std::vector<Vec>& span, int samples = 16384,
                             std::uint64_t seed = 0, Numerics policy = Numerics::UseHooks);

// zeta(q, n) of the frame: Vol ratios per its defining formula.
double zeta_factor(const MetricModel& model, const AreaFrame& frame, int samples,
                   std::uint64_t seed, Numerics policy = Numerics::UseHooks);

// dA_F evaluated on span with the frame's normal.
double area_density(const MetricModel& model, const AreaFrame& frame,
                    const std::vector<Vec>& span, int samples = 16384, std::uint64_t seed = 0,
                    Numerics policy = Numerics::UseHooks);

// ---- direction quadrature ---------------------------------------------------

struct DirectionQuadrature {
    std::vector<Vec> nodes;       // F-unit directions at p
    std::vector<double> weights;  // dA_p weights; sum approximates the indicatrix area
    int resolution = 0;
    std::uint64_t seed = 0;
    double weight_stderr = 0.0;   // nonzero only for the Monte Carlo scheme (d >= 4)
};

// Nodes y_a = u_a / F(p, u_a) over Euclidean-sphere nodes u_a with dA_p
// weights via pushed-forward tangent vectors. d=2: trapezoid on the circle;
// d=3: Fibonacci sphere set; d>=4: seeded Monte Carlo directions.
DirectionQuadrature direction_quadrature(const MetricModel& model, const Vec& p, int resolution,
                                         std::uint64_t seed,
                                         Numerics policy = Numerics::UseHooks,
                                         exec::Mode mode = exec::Mode::Parallel,
                                         int density_samples = 16384);

// ---- radial density eta and derived quantities ------------------------------

// eta_t(y) = dA_t(J_1..J_{d-1}) / dA_p(v_1..v_{d-1}) with J_j the variation
// fields of exp_p over perturbed initial directions (central differences,
// direction step h) and the sphere frame normal taken as the radial velocity.
// Requires F(p, y) = 1. Re-evaluates at h/2 and throws NumericalNoise if the
// two estimates differ by more than 0.1%.
double eta(const MetricModel& model, const Vec& p, const Vec& y, double t, double h = 1e-4,
           int samples = 16384, std::uint64_t seed = 0,
           Numerics policy = Numerics::UseHooks);

// ---- radial profiles: areas and volumes -------------------------------------

struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> areas;        // Area(S_r) = sum_a w_a eta_r(y_a)
    std::vector<double> volumes;      // Vol(B_r) by cumulative quadrature of Area
    std::vector<double> log_areas;    // log-space accumulation (deep tails)
    std::vector<double> log_volumes;
    double reached = 0.0;             // min over nodes of the integrable horizon
    bool truncated = false;           // a bundle exited the chart before max radius
};

// One bundle of geodesics per quadrature node (center + 2(d-1) perturbed),
// integrated once with dense output and evaluated at every grid radius and
// every internal Gauss node; the volume column is the cumulative panel
// quadrature of the area column. Deterministic per seed; node loop parallel.
RadialProfile radial_profile(const MetricModel& model, const Vec& p,
                             const std::vector<double>& radii, const DirectionQuadrature& quad,
                             double h = 1e-4, int samples = 16384, std::uint64_t seed = 0,
                             Numerics policy = Numerics::UseHooks,
                             exec::Mode mode = exec::Mode::Parallel);

// Area(S_t) at a single radius.
double sphere_area(const MetricModel& model, const Vec& p, double t,
                   const DirectionQuadrature& quad, double h = 1e-4, int samples = 16384,
                   std::uint64_t seed = 0, Numerics policy = Numerics::UseHooks,
                   exec::Mode mode = exec::Mode::Parallel);

// Vol(B_r) by the co-area formula (graded mesh handles the t^{d-1} vanishing).
double ball_volume(const MetricModel& model, const Vec& p, double r,
                   const DirectionQuadrature& quad, double h = 1e-4, int samples = 16384,
                   std::uint64_t seed = 0, Numerics policy = Numerics::UseHooks,
                   exec::Mode mode = exec::Mode::Parallel);

// Mean curvature of the geodesic sphere through exp_p(t y): d/dt ln eta_t,
// central difference with step scaled to t.
double mean_curvature_sphere(const MetricModel& model, const Vec& p, const Vec& y, double t,
                             int samples = 16384, std::uint64_t seed = 0,
                             Numerics policy = Numerics::UseHooks);

// ---- independent Monte Carlo volume oracle ----------------------------------

struct McVolume {
    double estimate = 0.0;
    double stderr_value = 0.0;
    long samples = 0;
};

// Rejection sampling of chart points against d(p, .) < r, weighted by sigma_F.
// Needs a direct distance functional (closed forms per model); the whole check
// stays independent of the geodesic/quadrature pipeline. Chunked counter-based
// sampling; serial and parallel runs agree bit for bit.
McVolume mc_ball_volume(const MetricModel& model, const Vec& p, double r, long n_samples,
                        std::uint64_t seed, exec::Mode mode = exec::Mode::Parallel);

// Distance functional used by the oracle (exposed for tests): closed forms for
// all catalog models.
double model_distance(const MetricModel& model, const Vec& a, const Vec& b);

// Adaptive quadrature of F along the straight chord a -> b. For the projective
// models the chord is the geodesic, so this cross-validates the closed-form
// distance; slow near the boundary, test use only.
double segment_distance(const MetricModel& model, const Vec& a, const Vec& b);

}  // namespace finsler::measure
