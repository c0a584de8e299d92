#pragma once

#include <cstdint>
#include <vector>

#include "finsler/types.hpp"

namespace finsler::rng {

// SplitMix64 finalizer; the basis of all deterministic streams here.
std::uint64_t splitmix64(std::uint64_t z);

// Counter-based generator: the i-th draw of stream s under seed is a pure
// function of (seed, s, i), so work items can be evaluated in any order (or
// on any thread) and still reproduce the serial sequence bit for bit.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    double uniform(std::uint64_t i) const;          // in [0, 1)
    double normal(std::uint64_t i) const;           // standard normal
    Vec normal_vec(std::uint64_t i, int dim) const; // iid standard normals

  private:
    std::uint64_t key_;
};

// Halton low-discrepancy point in [0,1)^dim with a seed-derived
// Cranley-Patterson rotation. dim <= 6.
Vec halton_point(std::uint64_t index, int dim, std::uint64_t seed);

// Deterministic, roughly equidistributed unit directions.
// d = 2: equispaced circle nodes; d = 3: golden-spiral sphere nodes;
// d >= 4: seeded normalized Gaussians.
std::vector<Vec> unit_directions(int dim, int count, std::uint64_t seed);

}  // namespace finsler::rng
