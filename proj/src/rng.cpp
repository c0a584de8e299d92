#include "finsler/rng.hpp"

#include <cmath>

namespace finsler::rng {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double to_unit_double(std::uint64_t bits) {
    // 53 high bits -> [0, 1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    key_ = splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform(std::uint64_t i) const {
    return to_unit_double(splitmix64(key_ + i * 0x9e3779b97f4a7c15ULL));
}

double CounterRng::normal(std::uint64_t i) const {
    // Box-Muller on two decorrelated uniforms derived from the same counter.
    const double u1 = to_unit_double(splitmix64(key_ + i * 0x9e3779b97f4a7c15ULL));
    const double u2 = to_unit_double(splitmix64(key_ ^ splitmix64(i + 0x2545f4914f6cdd1dULL)));
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * M_PI * u2);
}

Vec CounterRng::normal_vec(std::uint64_t i, int dim) const {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = normal(i * static_cast<std::uint64_t>(dim) + j);
    return v;
}

Vec halton_point(std::uint64_t index, int dim, std::uint64_t seed) {
    static const int primes[6] = {2, 3, 5, 7, 11, 13};
    Vec p(dim);
    for (int j = 0; j < dim; ++j) {
        const int b = primes[j];
        double f = 1.0, r = 0.0;
        std::uint64_t i = index + 1;  // skip the origin
        while (i > 0) {
            f /= b;
            r += f * static_cast<double>(i % b);
            i /= b;
        }
        const double shift = to_unit_double(splitmix64(seed ^ (0x51ed270b7a64fde5ULL + j)));
        p[j] = r + shift;
        p[j] -= std::floor(p[j]);
    }
    return p;
}

std::vector<Vec> unit_directions(int dim, int count, std::uint64_t seed) {
    std::vector<Vec> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        const double offset = to_unit_double(splitmix64(seed)) * 2.0 * M_PI;
        for (int a = 0; a < count; ++a) {
            const double th = offset + 2.0 * M_PI * (a + 0.5) / count;
            Vec u(2);
            u << std::cos(th), std::sin(th);
            dirs.push_back(u);
        }
    } else if (dim == 3) {
        // Golden-spiral nodes, rotated about z by a seed-derived angle.
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        const double offset = to_unit_double(splitmix64(seed)) * 2.0 * M_PI;
        for (int a = 0; a < count; ++a) {
            const double z = 1.0 - (2.0 * a + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = golden * a + offset;
            Vec u(3);
            u << rho * std::cos(th), rho * std::sin(th), z;
            dirs.push_back(u);
        }
    } else {
        CounterRng g(seed, 0xd1ec7ed1);
        for (int a = 0; a < count; ++a) {
            Vec u = g.normal_vec(a, dim);
            double n = u.norm();
            while (n < 1e-12) {
                u = g.normal_vec(static_cast<std::uint64_t>(a) + 0x80000000ULL, dim);
                n = u.norm();
            }
            dirs.push_back(u / n);
        }
    }
    return dirs;
}

}  // namespace finsler::rng
