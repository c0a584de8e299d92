#pragma once

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "finsler/convex_body.hpp"
#include "finsler/types.hpp"

namespace finsler::models {

enum class ModelKind {
    Euclidean,
    Hyperbolic,  // Poincare ball, conformal factor 2 / (k (1 - |x|^2)), curvature -k^2
    Funk,        // x + y / F(x,y) on the body boundary; non-reversible
    Hilbert,     // symmetrized Funk
    Custom,      // user norm callback
};

// Analytic facts attached to a catalog model; consumed by the verification
// harness and by the comparison bound parameters.
struct ModelFacts {
    std::optional<double> flag_curvature;    // constant flag curvature, if known
    std::optional<double> s_coefficient;     // delta with S = (d-1) * delta * F
    std::optional<double> k1, k2;            // curvature pinch -k2^2 <= K <= -k1^2
    std::optional<double> delta1, delta2;    // S pinch (d-1)delta1 <= S/F <= (d-1)delta2
    bool is_riemannian = false;
    bool geodesics_are_lines = false;
    bool reversible = false;
};

using NormFn = std::function<double(const Vec&, const Vec&)>;

struct MetricModel {
    ModelKind kind = ModelKind::Euclidean;
    int dim = 2;
    double k = 1.0;                   // hyperbolic scale
    std::optional<ConvexBody> body;   // Funk / Hilbert
    NormFn custom_norm;               // Custom
    ModelFacts facts;
    Tolerances tol;
    std::string id;

    // Exact closed forms; null when the generic numeric path is the only one.
    std::function<Mat(const Vec&, const Vec&)> exact_tensor;
    std::function<Vec(const Vec&, const Vec&)> exact_spray;
    std::function<double(const Vec&)> exact_sigma;
    std::function<double(const Vec&, const Vec&)> exact_distance;
};

// JSON model description:
// {"kind": "funk"|"hilbert"|"hyperbolic"|"euclidean", "dim": int, "k": real?,
//  "body": {"kind": "unit-ball"|"ellipsoid", "semi_axes": [..]?, "center": [..]?}}
struct ModelConfig {
    std::string kind;
    int dim = 2;
    std::optional<double> k;
    std::optional<std::string> body_kind;
    std::optional<Vec> semi_axes;
    std::optional<Vec> center;

    static ModelConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;  // normalized echo with defaults applied
};

MetricModel make_model(const ModelConfig& config, const Tolerances& tol = {});

MetricModel make_euclidean(int dim, const Tolerances& tol = {});
MetricModel make_hyperbolic(double k, int dim, const Tolerances& tol = {});
MetricModel make_funk(const ConvexBody& body, const Tolerances& tol = {});
MetricModel make_hilbert(const ConvexBody& body, const Tolerances& tol = {});
// Spot-checks positive 1-homogeneity of the callback at construction.
MetricModel make_custom(NormFn norm, int dim, const Tolerances& tol = {});

// Point admissibility: interior of the body / Poincare chart with margin
// tol.epsilon_boundary in gauge units. Throws PointOutsideDomain.
void require_admissible_point(const MetricModel& model, const Vec& x);
bool point_admissible(const MetricModel& model, const Vec& x);

// Euclidean distance from x to the chart boundary (+inf when unbounded);
// finite-difference x-steps are capped by a fraction of this.
double chart_boundary_gap(const MetricModel& model, const Vec& x);

}  // namespace finsler::models
