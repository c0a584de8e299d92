#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/measure.hpp"
#include "finsler/models.hpp"
#include "finsler/parallel.hpp"
#include "finsler/types.hpp"

namespace finsler::comparison {

using models::MetricModel;

// ---- model-free bound functions ---------------------------------------------

// Solution of s'' + lambda s = 0 with s(0) = 0, s'(0) = 1. |lambda| < 1e-12
// routes to the flat branch s(t) = t.
double s_lambda(double t, double lambda);
double s_lambda_prime(double t, double lambda);

// chi(t) = (e^{-delta t} sinh(k t) / k)^n; the model densities are squeezed
// between two of these. log_chi stays finite far beyond double overflow.
double chi(double t, double k, double delta, int n);
double log_chi(double t, double k, double delta, int n);
// d/dt log chi = n (k coth(kt) - delta).
double chi_log_derivative(double t, double k, double delta, int n);

// Exact comparison quantity bounded by f and F below:
// integral_0^r chi / chi(r), by adaptive quadrature of the shifted
// log-space integrand. Requires delta < k (the convergent regime).
double chi_ratio(double r, double k, double delta, int n);
// r -> infinity limit 1 / (n (k - delta)).
double chi_ratio_limit(double k, double delta, int n);

// One-dimensional pinch parameters: flag curvature in [-k2^2, -k1^2] and
// S-curvature in [n delta1, n delta2] with n = dim - 1.
struct BoundParams {
    int n = 1;
    double k1 = 1.0, k2 = 1.0;
    double delta1 = 0.0, delta2 = 0.0;

    // delta_i < k_i: the decay hypotheses of the ratio bounds.
    bool admissible() const { return delta1 < k1 && delta2 < k2; }

    // Reads the pinch off ModelFacts; throws InvalidConfig when absent.
    static BoundParams from_facts(const MetricModel& model);

    nlohmann::json to_json() const;
};

// Closed-form minorant of chi_ratio(r, k2, delta2, n): exact evaluation of the
// proof integral after the (1-a)^n >= 1-na minorant. The parameter locus
// n (k2 - delta2) = 2 k2 is evaluated by its analytic limit. f is exact for
// n = 1 and tends to 1 / (n (k2 - delta2)).
double lower_bound_f(double r, const BoundParams& p);

// Closed-form majorant of chi_ratio(r, k1, delta1, n):
// (1 - e^{-n r (k1 - delta1)}) / (n (k1 - delta1)).
double upper_bound_F(double r, const BoundParams& p);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

// Mean curvature of the geodesic sphere of radius t under K <= lambda,
// S <= (dim-1) delta (lower) and Ric >= (dim-1) lambda, S >= -(dim-1) delta
// (upper): (dim-1) (s'_lambda / s_lambda -+ delta). lambda > 0 requires
// t < pi / sqrt(lambda).
Interval mean_curvature_bounds(double t, double lambda, double delta, int dim);

// Metric ball volume sandwich: Vol_E(S^n) * integral_0^t of the two squeezing
// chi functions. The lower slot pairs the weak curvature with the strong
// S-suppression (k1, delta2) and the upper slot the converse (k2, delta1),
// which is the ordering the mean-curvature bounds actually produce; the
// slots coincide for every collapsed pinch.
Interval ball_volume_sandwich(double t, const BoundParams& p);

// ---- measured-model harness --------------------------------------------------

struct HarnessOptions {
    double slack = 0.02;              // relative tolerance on measured rows
    double h = 1e-4;                  // direction perturbation step
    int samples = 16384;              // containment samples per density
    std::uint64_t seed = 12345;
    Numerics policy = Numerics::UseHooks;
    exec::Mode mode = exec::Mode::Parallel;
    bool allow_inadmissible = false;  // emit a suppressed report instead of throwing
    int grid_points = 8;              // entropy regression nodes
};

struct ComparisonRow {
    double r = 0.0;
    double area = 0.0;
    double volume = 0.0;
    double ratio = 0.0;
    double f_lower = 0.0;
    double F_upper = 0.0;
    bool within = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    BoundParams params;
    std::string model_id;
    bool admissible = true;  // false: hypotheses fail, within flags suppressed
    bool all_pass = false;
    nlohmann::json metadata;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Measures Vol(B_r)/Area(S_r) on the grid and checks it against [f, F] with
// relative slack. Inadmissible pinches throw InadmissibleModel unless
// opts.allow_inadmissible, which emits the report with bounds and flags
// suppressed.
ComparisonReport verify_ratio_bounds(const MetricModel& model, const BoundParams& p,
                                     const std::vector<double>& r_grid,
                                     const measure::DirectionQuadrature& quad,
                                     const HarnessOptions& opts = {});

struct IsoperimetricRow {
    double r = 0.0;
    double area = 0.0;
    double volume = 0.0;
    double bound = 0.0;  // area / ((dim-1)(k1 - delta1))
    bool pass = false;
};

struct IsoperimetricReport {
    std::vector<IsoperimetricRow> rows;
    bool all_pass = false;
};

// Linear isoperimetric check Vol(B_r) <= Area(S_r) / ((dim-1)(k1 - delta1))
// for models with K <= -k1^2 and S <= (dim-1) delta1, delta1 < k1. Validates
// the hypotheses against ModelFacts and throws InadmissibleModel otherwise.
IsoperimetricReport isoperimetric_check(const MetricModel& model, double k1, double delta1,
                                        const std::vector<double>& r_grid,
                                        const measure::DirectionQuadrature& quad,
                                        const HarnessOptions& opts = {});

struct EntropyEstimate {
    double slope = 0.0;
    double stderr_value = 0.0;
    double t0 = 0.0, t1 = 0.0;
    int points = 0;
};

// Least-squares slope of log Vol(B_t) over a uniform grid in the window,
// using the log-space volume column of the radial profile.
EntropyEstimate entropy_estimate(const MetricModel& model, const Vec& p,
                                 std::pair<double, double> t_window,
                                 const measure::DirectionQuadrature& quad,
                                 const HarnessOptions& opts = {});

// Window with the e^{-2 k1 t} transient below 1e-4 and the density growth
// still far from overflow.
std::pair<double, double> default_entropy_window(const BoundParams& p);

// Ratio integral of the Funk disk densities chi(t) with k = 1/2,
// delta = (n+2)/(2n): direct quadrature, valid beyond delta < k (where the
// ratio diverges with r instead of converging).
double funk_ratio(int n, double r);

}  // namespace finsler::comparison
