// Timing comparison of the OpenMP kernels against the serial reference
// implementation. The two modes must produce bit-identical output; any
// mismatch fails the run.

#include <chrono>
#include <cstdio>
#include <functional>

#include "finsler/convex_body.hpp"
#include "finsler/measure.hpp"
#include "finsler/models.hpp"
#include "finsler/parallel.hpp"
#include "finsler/types.hpp"

using namespace finsler;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 12345;

double timed(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

void report(const char* name, double ts, double tp, bool identical) {
    std::printf("%-34s %9.3f s %9.3f s %7.2fx   %s\n", name, ts, tp, ts / tp,
                identical ? "yes" : "NO");
}

}  // namespace

int main() {
    exec::apply_thread_cap();
    std::printf("%-34s %11s %11s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "identical");
    int bad = 0;

    {
        // QMC containment densities per node: the expensive quadrature route
        const auto m = models::make_hilbert(ConvexBody::unit_ball(2));
        const Vec p = Vec::Zero(2);
        measure::DirectionQuadrature qs, qp;
        const double ts = timed([&] {
            qs = measure::direction_quadrature(m, p, 256, kSeed, Numerics::UseHooks,
                                               exec::Mode::Serial, 16384);
        });
        const double tp = timed([&] {
            qp = measure::direction_quadrature(m, p, 256, kSeed, Numerics::UseHooks,
                                               exec::Mode::Parallel, 16384);
        });
        const bool ok = same(qs.weights, qp.weights);
        report("direction-quadrature hilbert n=256", ts, tp, ok);
        bad += ok ? 0 : 1;
    }

    {
        const auto m = models::make_hyperbolic(1.0, 3);
        const Vec p = Vec::Zero(3);
        const auto quad = measure::direction_quadrature(m, p, 96, kSeed);
        const std::vector<double> radii{2.0, 4.0, 6.0, 8.0, 10.0};
        measure::RadialProfile rs, rp;
        const double ts = timed([&] {
            rs = measure::radial_profile(m, p, radii, quad, 1e-4, 16384, kSeed,
                                         Numerics::UseHooks, exec::Mode::Serial);
        });
        const double tp = timed([&] {
            rp = measure::radial_profile(m, p, radii, quad, 1e-4, 16384, kSeed,
                                         Numerics::UseHooks, exec::Mode::Parallel);
        });
        const bool ok = same(rs.areas, rp.areas) && same(rs.volumes, rp.volumes);
        report("radial-profile d=3 r<=10 (96 dirs)", ts, tp, ok);
        bad += ok ? 0 : 1;
    }

    {
        const auto m = models::make_hyperbolic(1.0, 2);
        const Vec p = Vec::Zero(2);
        measure::McVolume vs, vp;
        const double ts = timed(
            [&] { vs = measure::mc_ball_volume(m, p, 1.5, 4000000, kSeed, exec::Mode::Serial); });
        const double tp = timed([&] {
            vp = measure::mc_ball_volume(m, p, 1.5, 4000000, kSeed, exec::Mode::Parallel);
        });
        const bool ok = vs.estimate == vp.estimate && vs.stderr_value == vp.stderr_value;
        report("mc-ball-volume d=2 n=4e6", ts, tp, ok);
        bad += ok ? 0 : 1;
    }

    if (bad != 0) std::printf("%d kernel(s) diverged between modes\n", bad);
    return bad;
}
