#pragma once

#include "varops/battery.hpp"
#include "varops/grid.hpp"
#include "varops/maximal.hpp"
#include "varops/operators.hpp"
#include "varops/variation.hpp"
#include "varops/weights.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace varops {

struct GridSpec {
    int dim = 1;
    int n = 256;
    double h = 0.0; // 0: pick h = 2/n (box of length 2)
    std::optional<std::array<double, 2>> origin;
    Grid build() const;
    Grid build_scaled(int factor) const; // same box, n * factor samples
};

struct LadderSpec {
    int rungs_per_octave = 8;
    double t_min_cells = 1.0; // in units of the grid spacing
    double t_max_cells = 0.0; // 0: n cells (the box length)
    TruncationLadder build(const Grid& grid, int density_factor = 1) const;
};

struct OperatorSpec {
    enum class Kind { Hilbert, Riesz1, Riesz2, KernelSamples, BallAverage, CubeAverage, Mollifier };
    Kind kind = Kind::BallAverage;
    // KernelSamples
    int kernel_dim = 1;
    std::vector<double> omega;
    double alpha = 1.0;
    std::optional<double> size_constant;
    // Mollifier
    BallCombination phi;

    bool is_kernel() const;
    HomogeneousKernel kernel() const;
    VariationFamily family(const GridFunction& f, const TruncationLadder& ladder) const;
};

struct WeightSpec {
    enum class Kind { Unit, Power, Explicit };
    Kind kind = Kind::Unit;
    double alpha = 0.0;
    std::vector<double> values;

    Weight build(const Grid& grid) const;
    bool refinable() const { return kind != Kind::Explicit; }
    WeightSpec reciprocal() const; // 1/w (Unit and Power only)
};

struct BatterySpec {
    std::vector<std::string> generators = battery_generator_names();
    int count = 8;
    std::uint64_t seed = 1;
};

struct LambdaGridSpec {
    int levels = 64;
    double decades = 3.0;
};

// Experiment modes: "strong" (L^p ratios), "weak" (level-set ratios at L^1),
// "bmo" (sup ratios of the sharp function), "vector-strong" / "vector-weak"
// (l^rho aggregation over component sequences), "domination" (mollifier
// variation against ball-average variation).
struct ExperimentConfig {
    std::string id = "experiment";
    std::string mode = "strong";
    GridSpec grid;
    LadderSpec ladder;
    OperatorSpec op;
    WeightSpec weight;
    double p = 2.0;
    double q = 3.0;
    double rho = 2.0;
    int components = 1;
    BatterySpec battery;
    LambdaGridSpec lambda_grid;
    std::string output;
    bool refine = true; // also evaluate at doubled n and doubled ladder density

    void validate() const;
};

struct InstanceResult {
    int instance_id = 0;
    std::uint64_t seed = 0;
    double ratio = 0.0;
    int n = 0;
    int ladder_density = 0;
    bool skipped = false; // degenerate instance (f identically zero)
};

struct RatioReport {
    std::string experiment_id;
    std::string mode;
    std::vector<InstanceResult> instances;
    double sup_ratio = 0.0;
    // symmetric change factors of the sup ratio under refinement (1 when
    // refinement is disabled)
    double stability_n = 1.0;
    double stability_ladder = 1.0;
    double max_violation = 0.0; // domination mode only
    double runtime_seconds = 0.0;
    bool passed = false;
};

RatioReport run_strong_type(const ExperimentConfig& cfg);
RatioReport run_weak_type(const ExperimentConfig& cfg);
RatioReport run_bmo(const ExperimentConfig& cfg);
RatioReport run_vector(const ExperimentConfig& cfg);   // strong or weak per cfg.mode
RatioReport run_domination(const ExperimentConfig& cfg);
RatioReport run_experiment(const ExperimentConfig& cfg);

// Geometric level grid spanning `decades` decades up to top (inclusive).
std::vector<double> make_lambda_grid(double top, const LambdaGridSpec& spec);

struct SelfTestOptions {
    int vq_sequences = 1000;
    int czd_instances = 200;
    int aol_instances = 500;
    int tail_instances = 100;
    int domination_instances = 10;
    std::uint64_t seed = 0x5eedULL;
    bool mutate_vq = false; // corrupt the variation value to prove the check bites
};

struct SelfTestLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelfTestReport {
    std::vector<SelfTestLine> lines;
    double runtime_seconds = 0.0;
    bool all_pass() const;
};

SelfTestReport run_selftest(const SelfTestOptions& opt);

} // namespace varops
