#pragma once

#include <Eigen/Dense>

namespace finsler {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Shared numeric thresholds. Defaults are deliberate choices, not guesses;
// see the individual comments.
struct Tolerances {
    // Directions with Euclidean length below this are rejected as zero.
    double epsilon_zero = 1e-9;
    // Admissibility margin in gauge units: a chart point x is usable when
    // gauge(x) <= 1 - epsilon_boundary. Unit-speed Funk/Hilbert geodesics
    // approach the boundary like e^{-t}, so this floor directly caps the
    // reachable radius; 1e-12 keeps ~4 significant digits in 1 - gauge(x)
    // while admitting radii ~25.
    double epsilon_boundary = 1e-12;
    // |y^T g y - F^2| <= tol_identity * F^2.
    double tol_identity = 1e-8;
    // Positive-definiteness floor for the fundamental tensor.
    double tol_pd = 1e-12;
    // Relative tolerance for finite-difference cross-checks / homogeneity.
    double tol_fd = 1e-6;
    // Allowed relative speed drift along integrated geodesics.
    double tol_geo = 1e-6;
    // Absolute tolerance for curvature quantities.
    double tol_curv = 1e-3;
};

// Numeric policy for operations that have both a generic finite-difference
// path and model-supplied closed forms.
enum class Numerics {
    UseHooks,      // prefer exact closed-form hooks when the model has them
    ForceGeneric,  // always run the generic numeric path (cross-check mode)
};

struct MinkowskiData {
    double norm = 0.0;  // F(x, y)
    Mat tensor;         // fundamental tensor g_y, d x d symmetric
};

}  // namespace finsler
