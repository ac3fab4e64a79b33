#pragma once

#include "varops/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace varops {

// Deterministic splitmix64 generator. Uniform doubles are built directly from
// the high 53 bits so streams are reproducible across platforms (no
// implementation-defined std:: distributions).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double log_uniform(double lo, double hi);
    int uniform_int(int lo, int hi);        // inclusive bounds
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t instance_component_seed(std::uint64_t battery_seed, int instance, int component);

// Battery generators draw every parameter in continuum box coordinates, so a
// fixed seed describes the same function at every grid resolution over the
// same box:
//   "spike"   L1-normalized cube indicator, width in [box/64, box/8]
//   "bump"    Gaussian profile, sigma in [box/32, box/8]
//   "step"    alternating +-1 segments along one axis, 1..4 breakpoints
//   "dyadic"  indicator of one dyadic subcell, levels 1..4
GridFunction battery_function(const Grid& grid, const std::string& generator,
                              std::uint64_t seed);

const std::vector<std::string>& battery_generator_names();

} // namespace varops
