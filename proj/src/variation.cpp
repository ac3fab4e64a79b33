#include "varops/variation.hpp"

#include "varops/errors.hpp"
#include "varops/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varops {

namespace {

double abs_pow(double x, double q)
{
    const double a = std::fabs(x);
    if (a == 0.0)
        return 0.0;
    if (q == 1.0)
        return a;
    return std::pow(a, q);
}

void check_q(double q)
{
    if (!(q >= 1.0) || !std::isfinite(q))
        throw ParamError("variation exponent must satisfy q >= 1");
}

// smallest integer e with 2^e > s, for s > 0
int first_pow_above(double s)
{
    return std::ilogb(s) + 1;
}

} // namespace

TruncationLadder::TruncationLadder(std::vector<double> rungs) : t_(std::move(rungs))
{
    if (t_.empty())
        throw ParamError("ladder must have at least one rung");
    double prev = 0.0;
    for (double v : t_) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParamError("ladder rungs must be positive and finite");
        if (!(v > prev))
            throw ParamError("ladder rungs must be strictly increasing");
        prev = v;
    }
}

TruncationLadder TruncationLadder::geometric(double t_min, double t_max, int rungs_per_octave)
{
    if (!(t_min > 0.0) || !(t_max >= t_min))
        throw ParamError("geometric ladder needs 0 < t_min <= t_max");
    if (rungs_per_octave < 1)
        throw ParamError("rungs_per_octave must be at least 1");
    std::vector<double> t;
    const double octaves = std::log2(t_max / t_min);
    const long kmax = std::lround(std::ceil(octaves * rungs_per_octave));
    for (long k = 0; k <= kmax; ++k) {
        // k / rpo stays an exact dyadic rational for power-of-two rpo, so a
        // ladder at 2*rpo contains this one rung for rung.
        const double v = t_min * std::exp2(static_cast<double>(k) / rungs_per_octave);
        if (v > t_max * (1.0 + 1e-12))
            break;
        t.push_back(v);
    }
    return TruncationLadder(std::move(t));
}

TruncationLadder TruncationLadder::scaled_by(double c) const
{
    if (!(c > 0.0))
        throw ParamError("ladder scale must be positive");
    std::vector<double> t(t_);
    for (double& v : t)
        v *= c;
    return TruncationLadder(std::move(t));
}

VariationFamily::VariationFamily(Grid grid, TruncationLadder ladder)
    : grid_(grid), ladder_(std::move(ladder)),
      samples_(grid_.point_count() * ladder_.size(), 0.0)
{
}

VariationFamily::VariationFamily(Grid grid, TruncationLadder ladder, std::vector<double> samples)
    : grid_(grid), ladder_(std::move(ladder)), samples_(std::move(samples))
{
    if (samples_.size() != grid_.point_count() * ladder_.size())
        throw ParamError("family sample count does not match grid x ladder");
}

std::span<const double> VariationFamily::at(std::size_t point) const
{
    const std::size_t m = ladder_.size();
    return {samples_.data() + point * m, m};
}

std::span<double> VariationFamily::at(std::size_t point)
{
    const std::size_t m = ladder_.size();
    return {samples_.data() + point * m, m};
}

double vq_exact(std::span<const double> samples, double q)
{
    check_q(q);
    if (samples.empty())
        throw ParamError("variation of an empty sample sequence");
    const std::size_t m = samples.size();
    if (m == 1)
        return 0.0;
    // best[i] = largest sum of q-th powers over subsequences ending at i
    std::vector<double> best(m, 0.0);
    double top = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        double b = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double cand = best[j] + abs_pow(samples[i] - samples[j], q);
            if (cand > b)
                b = cand;
        }
        best[i] = b;
        if (b > top)
            top = b;
    }
    return std::pow(top, 1.0 / q);
}

double vq_oracle(std::span<const double> samples, double q)
{
    check_q(q);
    if (samples.empty())
        throw ParamError("variation of an empty sample sequence");
    const std::size_t m = samples.size();
    if (m > 14)
        throw SizeError("exhaustive variation oracle is capped at 14 samples, got " +
                        std::to_string(m));
    double top = 0.0;
    const unsigned long full = 1ul << m;
    for (unsigned long mask = 0; mask < full; ++mask) {
        double acc = 0.0;
        double prev = 0.0;
        bool have_prev = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(mask & (1ul << i)))
                continue;
            if (have_prev)
                acc += abs_pow(samples[i] - prev, q);
            prev = samples[i];
            have_prev = true;
        }
        if (acc > top)
            top = acc;
    }
    return std::pow(top, 1.0 / q);
}

std::vector<std::size_t> extrema_prune(std::span<const double> samples)
{
    if (samples.empty())
        throw ParamError("pruning an empty sample sequence");
    const std::size_t m = samples.size();
    std::vector<std::size_t> kept;
    if (m == 1) {
        kept.push_back(0);
        return kept;
    }
    // compress plateau runs to their first index
    std::vector<std::size_t> runs;
    runs.push_back(0);
    for (std::size_t i = 1; i < m; ++i)
        if (samples[i] != samples[runs.back()])
            runs.push_back(i);
    kept.push_back(0);
    for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
        const double a = samples[runs[r - 1]];
        const double b = samples[runs[r]];
        const double c = samples[runs[r + 1]];
        if ((b - a > 0.0) != (c - b > 0.0))
            kept.push_back(runs[r]);
    }
    if (kept.back() != m - 1)
        kept.push_back(m - 1);
    return kept;
}

double vq_pruned(std::span<const double> samples, double q)
{
    const auto idx = extrema_prune(samples);
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx)
        vals.push_back(samples[i]);
    return vq_exact(vals, q);
}

GridFunction vq_field(const VariationFamily& fam, double q)
{
    check_q(q);
    GridFunction out = GridFunction::zeros(fam.grid());
    auto& vals = out.mutable_values();
    detail::parallel_for(vals.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p)
            vals[p] = vq_pruned(fam.at(p), q);
    });
    return out;
}

GridFunction vector_vq_field(std::span<const VariationFamily> fams, double q, double rho)
{
    check_q(q);
    if (fams.empty())
        throw ParamError("vector variation of an empty component list");
    if (!(rho > 1.0) || !std::isfinite(rho))
        throw ParamError("aggregation exponent must satisfy rho > 1");
    for (const auto& f : fams) {
        if (!(f.grid() == fams.front().grid()))
            throw MismatchError("family components live on different grids");
        if (!(f.ladder() == fams.front().ladder()))
            throw MismatchError("family components use different ladders");
    }
    if (fams.size() == 1)
        return vq_field(fams.front(), q);
    GridFunction out = GridFunction::zeros(fams.front().grid());
    auto& vals = out.mutable_values();
    detail::parallel_for(vals.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            double acc = 0.0;
            for (const auto& f : fams)
                acc += std::pow(vq_pruned(f.at(p), q), rho);
            vals[p] = std::pow(acc, 1.0 / rho);
        }
    });
    return out;
}

IntervalClass long_short_split(const TruncationLadder& ladder,
                               std::span<const std::size_t> partition)
{
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (partition[i] >= ladder.size())
            throw ParamError("partition index out of ladder range");
        if (i > 0 && partition[i] <= partition[i - 1])
            throw ParamError("partition indices must be strictly increasing");
    }
    IntervalClass out;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        const double s = ladder[partition[i]];
        const double t = ladder[partition[i + 1]];
        const int e = first_pow_above(s);
        if (std::exp2(e) > t) {
            // no power of two inside (s, t]
            out.pieces.push_back({s, t, IntervalKind::Short, e - 1});
            continue;
        }
        const int mlow = e;
        const int nhigh = std::ilogb(t); // 2^nhigh <= t < 2^(nhigh+1)
        out.pieces.push_back({s, std::exp2(mlow), IntervalKind::Short, mlow - 1});
        if (nhigh > mlow)
            out.pieces.push_back({std::exp2(mlow), std::exp2(nhigh), IntervalKind::Long, mlow});
        if (t > std::exp2(nhigh))
            out.pieces.push_back({std::exp2(nhigh), t, IntervalKind::Short, nhigh});
    }
    return out;
}

} // namespace varops
