#pragma once

#include <functional>
#include <vector>

#include "finsler/types.hpp"

namespace finsler::num {

// ---- finite differences -------------------------------------------------

// Richardson-extrapolated central difference of a scalar function of one
// variable, evaluated at 0: D = (4 D(h/2) - D(h)) / 3.
double derivative(const std::function<double(double)>& f, double h);

// First partial of f at x along coordinate i.
double partial(const std::function<double(const Vec&)>& f, const Vec& x, int i, double h);

Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

// Richardson-extrapolated symmetric-stencil Hessian. The base step uses the
// quarter-root of machine epsilon (optimal balance for second differences);
// first derivatives elsewhere use the cube root.
Mat hessian(const std::function<double(const Vec&)>& f, const Vec& x, double scale,
            double step_limit = 0.0);

double fd_step_first(double scale);   // cbrt(eps) * (1 + scale)
double fd_step_second(double scale);  // eps^(1/4) * (1 + scale), widened

// ---- quadrature ----------------------------------------------------------

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

// Gauss-Legendre nodes/weights on [-1, 1], cached per n.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Fixed-order Gauss panel integral of f over [a, b].
double gauss_panel(const std::function<double(double)>& f, double a, double b, int order);

// Panel boundaries covering [0, r]: geometrically graded near 0, then
// uniform panels of at most max_len.
std::vector<double> graded_breakpoints(double r, double max_len);

// ---- log-space helpers ----------------------------------------------------

double log_sum_exp(const std::vector<double>& logs);

// log of sum w_i * exp(g_i) with positive weights.
double log_dot_exp(const std::vector<double>& weights, const std::vector<double>& logs);

// ---- root finding ----------------------------------------------------------

// Newton iteration safeguarded by bisection on a bracket [lo, hi] with
// f(lo) < 0 < f(hi). Converges to |f| <= tol.
double newton_bisection(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double lo, double hi,
                        double tol, int max_iter = 200);

// ---- geometry constants ----------------------------------------------------

double unit_ball_volume(int d);   // Vol_E(B^d)
double unit_sphere_area(int d);   // Vol_E(S^{d-1}) for the sphere in R^d

}  // namespace finsler::num
