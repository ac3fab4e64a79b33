#pragma once

#include "varops/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace varops {

// Strictly increasing positive truncation radii.
class TruncationLadder {
public:
    explicit TruncationLadder(std::vector<double> rungs);

    // t_k = t_min * 2^(k / rungs_per_octave) up to and including t_max
    // (t_max is included when it lies on the geometric progression, as it
    // does for power-of-two spans).
    static TruncationLadder geometric(double t_min, double t_max, int rungs_per_octave);

    const std::vector<double>& rungs() const { return t_; }
    std::size_t size() const { return t_.size(); }
    double operator[](std::size_t k) const { return t_[k]; }

    TruncationLadder scaled_by(double c) const;

    friend bool operator==(const TruncationLadder&, const TruncationLadder&) = default;

private:
    std::vector<double> t_;
};

// Per grid point, the samples of a one-parameter family t -> T_t f(x)
// evaluated over a common ladder. Stored point-major.
class VariationFamily {
public:
    VariationFamily(Grid grid, TruncationLadder ladder);
    VariationFamily(Grid grid, TruncationLadder ladder, std::vector<double> samples);

    const Grid& grid() const { return grid_; }
    const TruncationLadder& ladder() const { return ladder_; }
    std::size_t rung_count() const { return ladder_.size(); }

    std::span<const double> at(std::size_t point) const;
    std::span<double> at(std::size_t point);

private:
    Grid grid_;
    TruncationLadder ladder_;
    std::vector<double> samples_;
};

// q-variation of a finite sample sequence: sup over increasing index
// subsequences of (sum |a_{i_k} - a_{i_{k+1}}|^q)^(1/q), computed exactly by
// an O(m^2) dynamic program over all pairs.
double vq_exact(std::span<const double> samples, double q);

// Exhaustive reference: enumerates every index subset (ascending bitmask
// order, differences accumulated in increasing index order) and keeps the
// running maximum. Capped at 14 samples.
double vq_oracle(std::span<const double> samples, double q);

// Indices of the first sample, the last sample, and every strict local
// extremum (plateaus are compressed to their first index before direction
// changes are detected). The q-variation over the kept indices equals the
// q-variation of the full sequence for every q >= 1.
std::vector<std::size_t> extrema_prune(std::span<const double> samples);

// extrema_prune followed by the dynamic program on the kept samples.
double vq_pruned(std::span<const double> samples, double q);

// Pointwise q-variation of the family.
GridFunction vq_field(const VariationFamily& fam, double q);

// Pointwise l^rho aggregation of component variations:
// (sum_n vq(fam_n)^rho)^(1/rho). A single component returns its vq_field
// unchanged (exact short circuit).
GridFunction vector_vq_field(std::span<const VariationFamily> fams, double q, double rho);

enum class IntervalKind { Short, Long };

struct LabeledInterval {
    double lower = 0.0;   // interval (lower, upper]
    double upper = 0.0;
    IntervalKind kind = IntervalKind::Short;
    // Short: the dyadic block exponent k with (lower, upper] inside (2^k, 2^(k+1)].
    // Long: the exponent of the left endpoint; both endpoints are powers of two.
    int block = 0;
};

struct IntervalClass {
    std::vector<LabeledInterval> pieces;
};

// Splits each partition interval (t_j, t_{j+1}] at the powers of two it
// contains: intervals inside a single dyadic block stay whole (Short), the
// rest split into at most two Short ends and one Long middle with power-of-two
// endpoints. At most 3 pieces per interval, so |sum over pieces|^2 bounds the
// original increment squared up to a factor 3 by Cauchy-Schwarz.
IntervalClass long_short_split(const TruncationLadder& ladder,
                               std::span<const std::size_t> partition);

} // namespace varops
