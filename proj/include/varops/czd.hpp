#pragma once

#include "varops/grid.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace varops {

// Dyadic cube of 2^g samples per axis; corner is the low sample index per
// axis and is a multiple of 2^g.
struct DyadicCube {
    int generation = 0;
    std::array<int, 2> corner{0, 0};
};

// One selected cube with the local part of f - avg_Q f, stored cube-local
// row-major.
struct BadPart {
    DyadicCube cube;
    double average = 0.0; // signed average of f over the cube
    std::vector<double> values;
};

struct CZDecomposition {
    double lambda = 0.0;
    std::vector<DyadicCube> cubes;
    std::vector<BadPart> bad;
    GridFunction good;                      // f off the cubes, cube averages on them
    std::vector<std::size_t> omega;         // samples covered by selected cubes
    std::vector<std::size_t> omega_tilde;   // samples covered by the 5*sqrt(d) dilates

    CZDecomposition() : good(GridFunction::zeros(Grid::centered(1, 1, 1.0))) {}
};

// Stopping-time decomposition at level lambda: descends the dyadic tree from
// the full box and selects a cube the first time its average of |f| exceeds
// lambda. Requires the root average to be at most lambda; otherwise a
// LevelError carrying the minimal admissible level is thrown. Selected-cube
// averages lie in (lambda, 2^d lambda], the good part is bounded by
// 2^d lambda, each bad part has mean zero and average size at most
// 2^(d+1) lambda. Dilated cubes are rounded outward to whole cells and
// clipped to the box.
CZDecomposition cz_decompose(const GridFunction& f, double lambda);

struct PropertyCheck {
    std::string name;
    bool pass = false;
    bool asserted = true; // false: recorded for information only
    double margin = 0.0;  // slack left before the bound is violated
    std::string note;
};

struct CZDReport {
    std::vector<PropertyCheck> checks;
    double reconstruction_error = 0.0;
    bool all_asserted_pass() const;
};

// Re-derives every decomposition property from (dec, f). The containment of
// the super-level set {M f > 4^d lambda} in the dilated region is evaluated
// with the dyadic-restricted maximal function and recorded, not asserted.
CZDReport verify_czd(const CZDecomposition& dec, const GridFunction& f);

// Summable nonnegative sequence indexed by integer offsets.
struct OffsetSequence {
    int min_offset = 0;
    std::vector<double> values;
    double at(int offset) const;
    double sum() const;
};

struct AOLReport {
    bool hypothesis_ok = false;
    double worst_hypothesis_violation = 0.0;
    bool conclusion_checked = false;
    bool conclusion_ok = false;
    double lhs = 0.0; // sum_k ||sum_j h_kj||^r
    double rhs = 0.0; // (sum omega)^r * sum_j delta_j
};

// Almost-orthogonality check: verifies ||h_kj|| <= omega(k - j) delta_j^(1/r)
// entrywise (and that the supplied group norms respect the triangle
// inequality); when the hypothesis holds, asserts
// sum_k ||sum_j h_kj||^r <= (sum omega)^r sum_j delta_j within 1e-10 relative.
AOLReport aol_check(const std::vector<std::vector<double>>& h_norms,
                    const std::vector<double>& delta, const OffsetSequence& omega,
                    double r, const std::vector<double>& group_norms);

} // namespace varops
