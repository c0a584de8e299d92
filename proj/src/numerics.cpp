#include "finsler/numerics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "finsler/errors.hpp"

namespace finsler::num {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double central(const std::function<double(double)>& f, double h) {
    return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace

double fd_step_first(double scale) {
    return std::cbrt(kEps) * (1.0 + std::abs(scale));
}

double fd_step_second(double scale) {
    // Widened by 32 so that rounding noise eps/h^2 stays near 1e-11 while the
    // Richardson pair removes the h^2 truncation term.
    return 32.0 * std::pow(kEps, 0.25) * (1.0 + std::abs(scale));
}

double derivative(const std::function<double(double)>& f, double h) {
    const double d1 = central(f, h);
    const double d2 = central(f, h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

double partial(const std::function<double(const Vec&)>& f, const Vec& x, int i, double h) {
    Vec p = x;
    auto g = [&](double s) {
        p[i] = x[i] + s;
        const double v = f(p);
        p[i] = x[i];
        return v;
    };
    return derivative(g, h);
}

Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) g[i] = partial(f, x, i, h);
    return g;
}

namespace {

// One symmetric-stencil Hessian at step h.
Mat hessian_once(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    const int d = static_cast<int>(x.size());
    Mat H(d, d);
    const double f0 = f(x);
    Vec p = x;
    for (int i = 0; i < d; ++i) {
        p[i] = x[i] + h;
        const double fp = f(p);
        p[i] = x[i] - h;
        const double fm = f(p);
        p[i] = x[i];
        H(i, i) = (fp + fm - 2.0 * f0) / (h * h);
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            p[i] = x[i] + h;
            p[j] = x[j] + h;
            const double fpp = f(p);
            p[j] = x[j] - h;
            const double fpm = f(p);
            p[i] = x[i] - h;
            const double fmm = f(p);
            p[j] = x[j] + h;
            const double fmp = f(p);
            p[i] = x[i];
            p[j] = x[j];
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return H;
}

}  // namespace

Mat hessian(const std::function<double(const Vec&)>& f, const Vec& x, double scale,
            double step_limit) {
    double h = fd_step_second(scale);
    if (step_limit > 0.0 && h > step_limit) h = step_limit;
    const Mat h1 = hessian_once(f, x, h);
    const Mat h2 = hessian_once(f, x, h / 2.0);
    return (4.0 * h2 - h1) / 3.0;
}

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double m, double fm, double b, double fb, double whole,
                            double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(a, fa, fm, b, fb);
    return adaptive_simpson_rec(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on Legendre polynomials, Chebyshev initial guesses.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    auto [pos, ok] = cache.emplace(n, std::move(rule));
    (void)ok;
    return pos->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

std::vector<double> graded_breakpoints(double r, double max_len) {
    std::vector<double> pts;
    pts.push_back(0.0);
    double t = std::min(0.1 * max_len, 0.1 * r);
    if (t <= 0.0) t = r;
    while (t < r) {
        pts.push_back(t);
        const double next = std::min(t * 1.7, t + max_len);
        t = next;
    }
    if (pts.back() < r) pts.push_back(r);
    return pts;
}

double log_sum_exp(const std::vector<double>& logs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logs) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : logs) s += std::exp(v - m);
    return m + std::log(s);
}

double log_dot_exp(const std::vector<double>& weights, const std::vector<double>& logs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logs) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) s += weights[i] * std::exp(logs[i] - m);
    return m + std::log(s);
}

double newton_bisection(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double lo, double hi,
                        double tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) {
        throw NoConvergence("newton_bisection: bracket does not straddle the root");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) <= tol) return x;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double d = df(x);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (next <= lo || next >= hi || !std::isfinite(next)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw NoConvergence("newton_bisection: no convergence within iteration budget");
}

double unit_ball_volume(int d) {
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double unit_sphere_area(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace finsler::num
