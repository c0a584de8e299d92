#include "finsler/norms.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "finsler/errors.hpp"
#include "finsler/numerics.hpp"
#include "finsler/parallel.hpp"
#include "finsler/rng.hpp"

namespace finsler::norms {

using models::ModelKind;

namespace {

// Stable Funk norm: F solves gauge(x + y/F) = 1. With a = y^T A y,
// b = (x-c)^T A y, g = 1 - gauge(x): F = (b + sqrt(b^2 + a g)) / g, evaluated
// in whichever form avoids cancellation.
double funk_norm(const ConvexBody& body, const Vec& x, const Vec& y, double margin) {
    const Vec w = x - body.center();
    const Vec Ay = body.shape() * y;
    const double a = y.dot(Ay);
    const double b = w.dot(Ay);
    // Use the body's own gauge so this test is float-identical with the chart
    // admissibility predicate; recomputing the quadratic form inline can
    // disagree by an ulp right at the margin.
    const double gv = body.gauge(x);
    if (gv > 1.0 - margin) {
        throw PointOutsideDomain("funk norm: point violates the body margin");
    }
    const double g = 1.0 - gv;
    const double disc = std::sqrt(b * b + a * g);
    return (b > 0.0) ? (b + disc) / g : a / (disc - b);
}

double raw_norm(const MetricModel& model, const Vec& x, const Vec& y) {
    switch (model.kind) {
        case ModelKind::Euclidean:
            return y.norm();
        case ModelKind::Hyperbolic: {
            const double s = x.squaredNorm();
            if (s > 1.0 - model.tol.epsilon_boundary) {
                throw PointOutsideDomain("hyperbolic norm: point outside the Poincare chart");
            }
            return 2.0 / (model.k * (1.0 - s)) * y.norm();
        }
        case ModelKind::Funk:
            return funk_norm(*model.body, x, y, model.tol.epsilon_boundary);
        case ModelKind::Hilbert:
            return 0.5 * (funk_norm(*model.body, x, y, model.tol.epsilon_boundary) +
                          funk_norm(*model.body, x, -y, model.tol.epsilon_boundary));
        case ModelKind::Custom:
            return model.custom_norm(x, y);
    }
    throw UnsupportedModel("eval_norm: unknown model kind");
}

}  // namespace

double eval_norm(const MetricModel& model, const Vec& x, const Vec& y) {
    if (x.size() != model.dim || y.size() != model.dim) {
        throw InvalidConfig("eval_norm: dimension mismatch");
    }
    if (y.isZero(0.0)) return 0.0;
    return raw_norm(model, x, y);
}

namespace {

Mat tensor_generic(const MetricModel& model, const Vec& x, const Vec& y) {
    auto half_f2 = [&](const Vec& v) {
        const double f = raw_norm(model, x, v);
        return 0.5 * f * f;
    };
    return num::hessian(half_f2, y, y.norm());
}

Mat tensor_select(const MetricModel& model, const Vec& x, const Vec& y, Numerics policy) {
    if (policy == Numerics::UseHooks && model.exact_tensor) return model.exact_tensor(x, y);
    return tensor_generic(model, x, y);
}

}  // namespace

Mat fundamental_tensor_raw(const MetricModel& model, const Vec& x, const Vec& y,
                           Numerics policy) {
    return tensor_select(model, x, y, policy);
}

MinkowskiData fundamental_tensor(const MetricModel& model, const Vec& x, const Vec& y,
                                 Numerics policy) {
    models::require_admissible_point(model, x);
    if (y.norm() < model.tol.epsilon_zero) {
        throw ZeroVector("fundamental_tensor: direction below the zero threshold");
    }
    MinkowskiData data;
    data.norm = raw_norm(model, x, y);
    data.tensor = tensor_select(model, x, y, policy);
    Eigen::SelfAdjointEigenSolver<Mat> es(data.tensor, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= model.tol.tol_pd) {
        throw DegenerateTensor("fundamental_tensor: tensor not positive definite at " + model.id);
    }
    return data;
}

double strong_convexity_report(const MetricModel& model, const Vec& x, int num_dirs,
                               std::uint64_t seed) {
    models::require_admissible_point(model, x);
    if (num_dirs < 1) throw InvalidConfig("strong_convexity_report: num_dirs must be >= 1");
    const auto dirs = rng::unit_directions(model.dim, num_dirs, seed);
    std::vector<double> mins(dirs.size());
    exec::for_each_index(dirs.size(), exec::Mode::Parallel, [&](std::size_t i) {
        const Mat g = tensor_generic(model, x, dirs[i]);
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        mins[i] = es.eigenvalues().minCoeff();
    });
    double out = mins[0];
    for (double v : mins) out = std::min(out, v);
    return out;
}

double indicatrix_volume_in_basis(const MetricModel& model, const Vec& x, const Mat& basis,
                                  int samples, std::uint64_t seed) {
    models::require_admissible_point(model, x);
    if (samples < 1000) throw InvalidConfig("indicatrix_volume: samples must be >= 1000");
    const int d = model.dim;
    const int k = static_cast<int>(basis.cols());
    if (basis.rows() != d || k < 1 || k > d) {
        throw InvalidConfig("indicatrix_volume: basis must be d x k with 1 <= k <= d");
    }
    if (k == 1) {
        const Vec m = basis.col(0);
        return 1.0 / raw_norm(model, x, m) + 1.0 / raw_norm(model, x, (-m).eval());
    }

    // Radial form of the volume, Vol = (1/k) * integral of r(u)^k over the unit
    // sphere in coefficient space, with directions preconditioned through the
    // fundamental-tensor ellipsoid at the leading basis vector. The change of
    // variables u = Tv / |Tv| leaves the mean exact for any SPD tensor (only
    // the spread depends on it) and collapses to zero spread on quadratic
    // norms, which keeps the estimate well conditioned for slab-shaped
    // indicatrices near the chart boundary.
    const Mat g = fundamental_tensor_raw(model, x, basis.col(0));
    const Mat A = basis.transpose() * g * basis;
    Mat T = Mat::Identity(k, k);
    Eigen::LLT<Mat> llt(A);
    if (llt.info() == Eigen::Success) {
        T = Mat(llt.matrixL()).inverse().transpose();
    }
    const double det_t = T.determinant();
    const Mat map = basis * T;

    const auto dirs = rng::unit_directions(k, samples, seed);
    constexpr int kChunk = 4096;
    const int nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
    std::vector<char> degenerate(nchunks, 0);
    exec::for_each_index(nchunks, exec::Mode::Parallel, [&](std::size_t ci) {
        const int lo = static_cast<int>(ci) * kChunk;
        const int hi = std::min(samples, lo + kChunk);
        double acc = 0.0;
        for (int i = lo; i < hi; ++i) {
            const double f = raw_norm(model, x, map * dirs[i]);
            if (!(f > 1e-12)) {
                degenerate[ci] = 1;
                return;
            }
            acc += std::pow(1.0 / f, k);
        }
        partial[ci] = acc;
    });
    for (char bad : degenerate) {
        if (bad) throw DegenerateTensor("indicatrix_volume: indicatrix appears unbounded");
    }
    double mean = 0.0;
    for (double p : partial) mean += p;
    mean /= static_cast<double>(samples);
    return num::unit_ball_volume(k) * det_t * mean;
}

double indicatrix_volume(const MetricModel& model, const Vec& x, int samples,
                         std::uint64_t seed) {
    return indicatrix_volume_in_basis(model, x, Mat::Identity(model.dim, model.dim), samples,
                                      seed);
}

double sigma_density(const MetricModel& model, const Vec& x, int samples, std::uint64_t seed,
                     Numerics policy) {
    models::require_admissible_point(model, x);
    if (policy == Numerics::UseHooks && model.exact_sigma) return model.exact_sigma(x);
    return num::unit_ball_volume(model.dim) / indicatrix_volume(model, x, samples, seed);
}

double sigma_density_radial(const MetricModel& model, const Vec& x, int nodes) {
    models::require_admissible_point(model, x);
    const int d = model.dim;
    if (nodes <= 0) nodes = (d == 2) ? 512 : (d == 3) ? 8192 : 65536;
    // Vol(B_x) = (1/d) * integral over the Euclidean unit sphere of r(u)^d,
    // r(u) = 1/F(x, u). Smooth in x, so safe to differentiate through.
    const auto dirs = rng::unit_directions(d, nodes, 0x5ad1a1ULL);
    double acc = 0.0;
    for (const Vec& u : dirs) {
        const double f = raw_norm(model, x, u);
        if (!(f > 1e-9)) {
            throw DegenerateTensor("sigma_density_radial: indicatrix appears unbounded");
        }
        acc += std::pow(1.0 / f, d);
    }
    const double vol =
        num::unit_sphere_area(d) / static_cast<double>(nodes) * acc / static_cast<double>(d);
    return num::unit_ball_volume(d) / vol;
}

double ray_boundary_parameter(const ConvexBody& body, const Vec& x, const Vec& y) {
    if (y.norm() < Tolerances{}.epsilon_zero) {
        throw ZeroVector("ray_boundary_parameter: zero direction");
    }
    if (body.gauge(x) > 1.0 - Tolerances{}.epsilon_boundary) {
        throw PointOutsideDomain("ray_boundary_parameter: base point not strictly interior");
    }
    return body.ray_boundary_parameter(x, y);
}

}  // namespace finsler::norms
