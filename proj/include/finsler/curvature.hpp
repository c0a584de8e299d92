#pragma once

#include "finsler/models.hpp"
#include "finsler/types.hpp"

namespace finsler::curvature {

using models::MetricModel;

// Riemann curvature in the spray form, returned as the matrix of the
// transform u -> R_y(u):
//   R^i_k = 2 dG^i/dx^k - y^j d2G^i/dx^j dy^k + 2 G^j d2G^i/dy^j dy^k
//           - dG^i/dy^j dG^j/dy^k.
// The nested second derivatives are evaluated by two independent schemes
// (direct stencils on G, and first differences of the connection
// coefficients); disagreement beyond tolerance raises NumericalNoise.
Mat riemann_curvature(const MetricModel& model, const Vec& x, const Vec& y,
                      Numerics policy = Numerics::UseHooks);

// Flag curvature K(x, y, u) = g_y(R_y u, u) / (F^2 g_y(u,u) - g_y(y,u)^2).
// Throws DegenerateFlag when u is parallel to y.
double flag_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& u,
                      Numerics policy = Numerics::UseHooks);

// Ricci scalar: trace of R_y.
double ricci_scalar(const MetricModel& model, const Vec& x, const Vec& y,
                    Numerics policy = Numerics::UseHooks);

// Distortion tau = ln( sqrt(det g_y) / sigma_F(x) ).
double distortion(const MetricModel& model, const Vec& x, const Vec& y,
                  Numerics policy = Numerics::UseHooks);

// S-curvature by the local formula S = N^m_m - (y^m / sigma) dsigma/dx^m.
double s_curvature(const MetricModel& model, const Vec& x, const Vec& y,
                   Numerics policy = Numerics::UseHooks);

// Independent route: S = d/dt tau(c(t), cdot(t)) along the geodesic through
// (x, y), one-sided second-order difference at t = 0.
double s_curvature_via_distortion(const MetricModel& model, const Vec& x, const Vec& y,
                                  Numerics policy = Numerics::UseHooks);

}  // namespace finsler::curvature
