#pragma once

#include <vector>

#include "finsler/models.hpp"
#include "finsler/types.hpp"

namespace finsler::connection {

using models::MetricModel;

// Spray coefficients G^i(x,y) = 1/4 g^{il} (2 dg_jl/dx^k - dg_jk/dx^l) y^j y^k.
// UseHooks dispatches to the model's closed form when registered.
Vec geodesic_coefficients(const MetricModel& model, const Vec& x, const Vec& y,
                          Numerics policy = Numerics::UseHooks);

// Nonlinear connection N^i_j = dG^i/dy^j.
Mat connection_coefficients(const MetricModel& model, const Vec& x, const Vec& y,
                            Numerics policy = Numerics::UseHooks);

// (D_y U)^i = dU^i(y) + U^j N^i_j(x,y); dU_along_y is the directional
// derivative of the field U along y, supplied by the caller.
Vec covariant_derivative(const MetricModel& model, const Vec& x, const Vec& y, const Vec& U,
                         const Vec& dU_along_y, Numerics policy = Numerics::UseHooks);

struct StepControl {
    double error_tol = 1e-10;   // local error target per unit step
    double initial_step = 1e-3;
    double max_step = 0.25;
    long max_steps = 2000000;
    bool fixed_step = false;    // integrate with initial_step exactly (order tests)
};

enum class PathStatus {
    Complete,    // reached the requested parameter
    DomainExit,  // truncated at the chart margin
};

// Accepted RK4 knots with Hermite dense output. Velocities are never
// renormalized; speed_drift records the relative drift of F(x, v) instead.
struct GeodesicPath {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Vec> v;
    std::vector<Vec> a;  // dv/dt = -2G at the knots
    PathStatus status = PathStatus::Complete;
    double speed_drift = 0.0;

    double end_time() const { return t.empty() ? 0.0 : t.back(); }
    void state_at(double tq, Vec& xq, Vec& vq) const;
    Vec point_at(double tq) const;
};

// Solve xdd + 2 G(x, xd) = 0 from (x0, y0) over [0, T] with RK4 step
// doubling. Truncates with PathStatus::DomainExit at the chart margin.
GeodesicPath integrate_geodesic(const MetricModel& model, const Vec& x0, const Vec& y0,
                                double T, const StepControl& ctrl = {},
                                Numerics policy = Numerics::UseHooks);

// Endpoint of the unit-speed geodesic: requires |F(p,y) - 1| <= 1e-9, t >= 0.
// exp_map(p, y, 0) == p exactly. Throws PointOutsideDomain if the geodesic
// leaves the chart before t.
Vec exp_map(const MetricModel& model, const Vec& p, const Vec& y, double t,
            const StepControl& ctrl = {}, Numerics policy = Numerics::UseHooks);

}  // namespace finsler::connection
