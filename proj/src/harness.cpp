#include "varops/harness.hpp"

#include "varops/czd.hpp"
#include "varops/errors.hpp"
#include "varops/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace varops {

namespace {

constexpr double kDominationTol = 1e-10;

double now_seconds()
{
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool is_zero(const GridFunction& f)
{
    for (double v : f.values())
        if (v != 0.0)
            return false;
    return true;
}

double sym_factor(double a, double b)
{
    if (a == 0.0 && b == 0.0)
        return 1.0;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        return std::numeric_limits<double>::infinity();
    return std::max(a / b, b / a);
}

GridFunction ellrho_aggregate(const std::vector<GridFunction>& comps, double rho)
{
    if (comps.size() == 1) {
        GridFunction out = comps.front();
        for (auto& v : out.mutable_values())
            v = std::fabs(v);
        return out;
    }
    GridFunction out = GridFunction::zeros(comps.front().grid());
    auto& ov = out.mutable_values();
    for (std::size_t i = 0; i < ov.size(); ++i) {
        double acc = 0.0;
        for (const auto& c : comps)
            acc += std::pow(std::fabs(c[i]), rho);
        ov[i] = std::pow(acc, 1.0 / rho);
    }
    return out;
}

} // namespace

Grid GridSpec::build() const
{
    const double spacing = h > 0.0 ? h : 2.0 / n;
    if (origin)
        return Grid::with_origin(dim, n, spacing, *origin);
    return Grid::centered(dim, n, spacing);
}

Grid GridSpec::build_scaled(int factor) const
{
    Grid g = build();
    for (; factor > 1; factor /= 2)
        g = g.refined();
    return g;
}

TruncationLadder LadderSpec::build(const Grid& grid, int density_factor) const
{
    const double tmin = t_min_cells * grid.h;
    const double tmax = (t_max_cells > 0.0 ? t_max_cells : static_cast<double>(grid.n)) * grid.h;
    return TruncationLadder::geometric(tmin, tmax, rungs_per_octave * density_factor);
}

bool OperatorSpec::is_kernel() const
{
    return kind == Kind::Hilbert || kind == Kind::Riesz1 || kind == Kind::Riesz2 ||
           kind == Kind::KernelSamples;
}

HomogeneousKernel OperatorSpec::kernel() const
{
    switch (kind) {
    case Kind::Hilbert:
        return HomogeneousKernel::hilbert();
    case Kind::Riesz1:
        return HomogeneousKernel::riesz(0);
    case Kind::Riesz2:
        return HomogeneousKernel::riesz(1);
    case Kind::KernelSamples:
        return HomogeneousKernel::from_samples(kernel_dim, omega, alpha, size_constant);
    default:
        throw ConfigError("operator has no kernel");
    }
}

VariationFamily OperatorSpec::family(const GridFunction& f, const TruncationLadder& ladder) const
{
    switch (kind) {
    case Kind::BallAverage:
        return average_family(f, ladder);
    case Kind::CubeAverage:
        return cube_average_family(f, ladder);
    case Kind::Mollifier:
        return approx_identity_family(f, phi, ladder);
    default:
        return singular_family(f, kernel(), ladder);
    }
}

Weight WeightSpec::build(const Grid& grid) const
{
    switch (kind) {
    case Kind::Unit:
        return Weight::unit(grid);
    case Kind::Power:
        return power_weight(grid, alpha);
    case Kind::Explicit:
        if (values.size() != grid.point_count())
            throw ConfigError("explicit weight has wrong number of values for the grid");
        return Weight(GridFunction(grid, values));
    }
    throw ConfigError("unknown weight kind");
}

WeightSpec WeightSpec::reciprocal() const
{
    WeightSpec out = *this;
    if (kind == Kind::Power)
        out.alpha = -alpha;
    else if (kind == Kind::Explicit)
        throw ConfigError("explicit weights have no symbolic reciprocal");
    return out;
}

void ExperimentConfig::validate() const
{
    static const std::set<std::string> modes{"strong", "weak", "bmo",
                                             "vector-strong", "vector-weak", "domination"};
    if (!modes.count(mode))
        throw ConfigError("unknown mode: " + mode);
    if (grid.dim != 1 && grid.dim != 2)
        throw ConfigError("grid dimension must be 1 or 2");
    if (grid.n < 2 || (grid.n & (grid.n - 1)) != 0)
        throw ConfigError("grid size must be a power of two, at least 2");
    if (mode == "domination") {
        if (op.kind != OperatorSpec::Kind::Mollifier)
            throw ConfigError("domination mode needs a mollifier operator (balls)");
        if (!(q >= 1.0))
            throw ConfigError("domination mode needs q >= 1");
    } else {
        if (!(q > 2.0))
            throw ConfigError("theorem experiments need q > 2");
    }
    if (mode == "strong" || mode == "vector-strong") {
        if (!(p > 1.0) || !std::isfinite(p))
            throw ConfigError("strong mode needs p in (1, infinity)");
    }
    if (mode == "vector-strong" || mode == "vector-weak") {
        if (!(rho > 1.0) || !std::isfinite(rho))
            throw ConfigError("vector modes need rho in (1, infinity)");
        if (components < 1)
            throw ConfigError("vector modes need at least one component");
    }
    if (battery.count < 1)
        throw ConfigError("battery must hold at least one instance");
    if (battery.generators.empty())
        throw ConfigError("battery generator list is empty");
    if (lambda_grid.levels < 2 || !(lambda_grid.decades > 0.0))
        throw ConfigError("level grid needs >= 2 levels over a positive span");
    if (op.is_kernel()) {
        const int kd = op.kind == OperatorSpec::Kind::KernelSamples
                           ? op.kernel_dim
                           : (op.kind == OperatorSpec::Kind::Hilbert ? 1 : 2);
        if (kd != grid.dim)
            throw ConfigError("kernel dimension does not match the grid");
    }
    if (refine && !weight.refinable() && mode != "domination")
        throw ConfigError("explicit weights cannot be resampled; disable refinement");
}

std::vector<double> make_lambda_grid(double top, const LambdaGridSpec& spec)
{
    if (!(top > 0.0))
        throw ParamError("level grid top must be positive");
    std::vector<double> grid(static_cast<std::size_t>(spec.levels));
    for (int j = 0; j < spec.levels; ++j) {
        const double e = -spec.decades *
                         (1.0 - static_cast<double>(j) / static_cast<double>(spec.levels - 1));
        grid[static_cast<std::size_t>(j)] = top * std::pow(10.0, e);
    }
    return grid;
}

namespace {

// A_p (or A_1) refinement pre-check over the default chain on the config box.
void weight_precheck(const ExperimentConfig& cfg)
{
    if (cfg.mode == "domination")
        return;
    if (!cfg.weight.refinable())
        return; // explicit weights are tied to one grid, accepted as given
    const Grid base = cfg.grid.build();
    const double box = base.box_length();
    const int dim = base.dim;
    const auto builder_for = [&](const WeightSpec& spec) {
        return [spec, dim, box](int size) {
            return spec.build(GridSpec{dim, size, box / size, std::nullopt}.build());
        };
    };
    const auto sizes = default_stability_sizes(dim);
    const CubeFamily fam{CubeConvention::Uncentered};
    RefinementStability st;
    if (cfg.mode == "strong" || cfg.mode == "vector-strong") {
        st = ap_stability(builder_for(cfg.weight), cfg.p, fam, sizes);
    } else if (cfg.mode == "bmo") {
        st = a1_stability(builder_for(cfg.weight.reciprocal()), fam, sizes);
    } else {
        st = a1_stability(builder_for(cfg.weight), fam, sizes);
    }
    if (!st.pass)
        throw ConfigError("weight fails the refinement stability pre-check (constant grew by " +
                          std::to_string(st.growth) + "x across " +
                          std::to_string(sizes.front()) + ".." + std::to_string(sizes.back()) +
                          "); the weight is not usable for this mode");
}

struct Pass {
    std::vector<InstanceResult> rows;
    double sup = 0.0;
};

GridFunction scalar_instance(const ExperimentConfig& cfg, const Grid& grid, int instance)
{
    const auto& gens = cfg.battery.generators;
    const std::string& gen = gens[static_cast<std::size_t>(instance) % gens.size()];
    return battery_function(grid, gen, instance_component_seed(cfg.battery.seed, instance, 0));
}

std::vector<GridFunction> vector_instance(const ExperimentConfig& cfg, const Grid& grid,
                                          int instance)
{
    const auto& gens = cfg.battery.generators;
    std::vector<GridFunction> comps;
    comps.reserve(static_cast<std::size_t>(cfg.components));
    for (int c = 0; c < cfg.components; ++c) {
        const std::string& gen =
            gens[static_cast<std::size_t>(instance + c) % gens.size()];
        comps.push_back(
            battery_function(grid, gen, instance_component_seed(cfg.battery.seed, instance, c)));
    }
    return comps;
}

double ratio_for_instance(const ExperimentConfig& cfg, const Grid& grid,
                          const TruncationLadder& ladder, const Weight& w, int instance,
                          bool& skipped)
{
    skipped = false;
    if (cfg.mode == "vector-strong" || cfg.mode == "vector-weak") {
        const auto comps = vector_instance(cfg, grid, instance);
        bool all_zero = true;
        for (const auto& c : comps)
            if (!is_zero(c))
                all_zero = false;
        if (all_zero) {
            skipped = true;
            return 0.0;
        }
        std::vector<VariationFamily> fams;
        fams.reserve(comps.size());
        for (const auto& c : comps)
            fams.push_back(cfg.op.family(c, ladder));
        const GridFunction field = vector_vq_field(fams, cfg.q, cfg.rho);
        const GridFunction agg = ellrho_aggregate(comps, cfg.rho);
        if (cfg.mode == "vector-strong")
            return lp_norm(field, cfg.p, w) / lp_norm(agg, cfg.p, w);
        const double top = sup_abs(field);
        if (top == 0.0)
            return 0.0;
        const auto levels = make_lambda_grid(top, cfg.lambda_grid);
        return weak_l1_constant(field, w, levels) / lp_norm(agg, 1.0, w);
    }

    const GridFunction f = scalar_instance(cfg, grid, instance);
    if (is_zero(f)) {
        skipped = true;
        return 0.0;
    }
    const VariationFamily fam = cfg.op.family(f, ladder);
    const GridFunction field = vq_field(fam, cfg.q);
    if (cfg.mode == "strong")
        return lp_norm(field, cfg.p, w) / lp_norm(f, cfg.p, w);
    if (cfg.mode == "weak") {
        const double top = sup_abs(field);
        if (top == 0.0)
            return 0.0;
        const auto levels = make_lambda_grid(top, cfg.lambda_grid);
        return weak_l1_constant(field, w, levels) / lp_norm(f, 1.0, w);
    }
    // bmo
    const CubeFamily cubes{CubeConvention::Uncentered};
    const GridFunction sharp = sharp_maximal(field, cubes);
    const double num = sup_abs(pointwise_product(sharp, w.function()));
    const double den = sup_abs(pointwise_product(f, w.function()));
    return num / den;
}

Pass evaluate_pass(const ExperimentConfig& cfg, int scale, int density)
{
    const Grid grid = cfg.grid.build_scaled(scale);
    const TruncationLadder ladder = cfg.ladder.build(grid, density);
    const Weight w = cfg.weight.build(grid);
    const int count = cfg.battery.count;
    Pass pass;
    pass.rows.resize(static_cast<std::size_t>(count));
    detail::parallel_for(static_cast<std::size_t>(count), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            InstanceResult row;
            row.instance_id = static_cast<int>(i);
            row.seed = instance_component_seed(cfg.battery.seed, static_cast<int>(i), 0);
            row.n = grid.n;
            row.ladder_density = cfg.ladder.rungs_per_octave * density;
            bool skipped = false;
            row.ratio = ratio_for_instance(cfg, grid, ladder, w, static_cast<int>(i), skipped);
            row.skipped = skipped;
            pass.rows[i] = row;
        }
    });
    bool any = false;
    for (const auto& row : pass.rows) {
        if (row.skipped)
            continue;
        any = true;
        pass.sup = std::max(pass.sup, row.ratio);
    }
    if (!any)
        throw ConfigError("degenerate battery: every instance sampled to the zero function");
    return pass;
}

RatioReport run_ratio_modes(const ExperimentConfig& cfg)
{
    const double t0 = now_seconds();
    cfg.validate();
    weight_precheck(cfg);
    RatioReport rep;
    rep.experiment_id = cfg.id;
    rep.mode = cfg.mode;

    const Pass base = evaluate_pass(cfg, 1, 1);
    rep.instances = base.rows;
    rep.sup_ratio = base.sup;
    if (cfg.refine) {
        const Pass finer = evaluate_pass(cfg, 2, 1);
        const Pass denser = evaluate_pass(cfg, 1, 2);
        rep.instances.insert(rep.instances.end(), finer.rows.begin(), finer.rows.end());
        rep.instances.insert(rep.instances.end(), denser.rows.begin(), denser.rows.end());
        rep.stability_n = sym_factor(finer.sup, base.sup);
        rep.stability_ladder = sym_factor(denser.sup, base.sup);
    }
    bool finite = true;
    for (const auto& row : rep.instances)
        if (!row.skipped && !std::isfinite(row.ratio))
            finite = false;
    rep.passed = finite && rep.stability_n <= 2.0 && rep.stability_ladder <= 2.0;
    rep.runtime_seconds = now_seconds() - t0;
    return rep;
}

} // namespace

RatioReport run_strong_type(const ExperimentConfig& cfg)
{
    if (cfg.mode != "strong")
        throw ConfigError("run_strong_type expects mode \"strong\"");
    return run_ratio_modes(cfg);
}

RatioReport run_weak_type(const ExperimentConfig& cfg)
{
    if (cfg.mode != "weak")
        throw ConfigError("run_weak_type expects mode \"weak\"");
    return run_ratio_modes(cfg);
}

RatioReport run_bmo(const ExperimentConfig& cfg)
{
    if (cfg.mode != "bmo")
        throw ConfigError("run_bmo expects mode \"bmo\"");
    return run_ratio_modes(cfg);
}

RatioReport run_vector(const ExperimentConfig& cfg)
{
    if (cfg.mode != "vector-strong" && cfg.mode != "vector-weak")
        throw ConfigError("run_vector expects a vector mode");
    return run_ratio_modes(cfg);
}

RatioReport run_domination(const ExperimentConfig& cfg)
{
    if (cfg.mode != "domination")
        throw ConfigError("run_domination expects mode \"domination\"");
    const double t0 = now_seconds();
    cfg.validate();
    const Grid grid = cfg.grid.build();
    const TruncationLadder base = cfg.ladder.build(grid);
    const double phi_l1 = cfg.op.phi.l1_norm(grid.dim);

    // close the ladder under multiplication by each mollifier radius so the
    // reference variation dominates every scaled sub-ladder
    std::vector<double> rungs(base.rungs());
    for (const auto& term : cfg.op.phi.terms)
        for (double t : base.rungs())
            rungs.push_back(term.radius * t);
    std::sort(rungs.begin(), rungs.end());
    rungs.erase(std::unique(rungs.begin(), rungs.end()), rungs.end());
    if (rungs.size() > 4096)
        throw ConfigError("ladder closure exceeds 4096 rungs; use fewer radii or a sparser ladder");
    const TruncationLadder closed{std::move(rungs)};

    RatioReport rep;
    rep.experiment_id = cfg.id;
    rep.mode = cfg.mode;
    const int count = cfg.battery.count;
    rep.instances.resize(static_cast<std::size_t>(count));
    detail::parallel_for(static_cast<std::size_t>(count), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            InstanceResult row;
            row.instance_id = static_cast<int>(i);
            row.seed = instance_component_seed(cfg.battery.seed, static_cast<int>(i), 0);
            row.n = grid.n;
            row.ladder_density = cfg.ladder.rungs_per_octave;
            const GridFunction f = scalar_instance(cfg, grid, static_cast<int>(i));
            if (is_zero(f)) {
                row.skipped = true;
                row.ratio = 0.0;
            } else {
                const GridFunction vmoll =
                    vq_field(approx_identity_family(f, cfg.op.phi, base), cfg.q);
                const GridFunction vavg = vq_field(average_family(f, closed), cfg.q);
                double worst = -std::numeric_limits<double>::infinity();
                for (std::size_t pidx = 0; pidx < vmoll.size(); ++pidx)
                    worst = std::max(worst, vmoll[pidx] - phi_l1 * vavg[pidx]);
                row.ratio = worst;
            }
            rep.instances[i] = row;
        }
    });
    bool any = false;
    double violation = -std::numeric_limits<double>::infinity();
    for (const auto& row : rep.instances) {
        if (row.skipped)
            continue;
        any = true;
        violation = std::max(violation, row.ratio);
    }
    if (!any)
        throw ConfigError("degenerate battery: every instance sampled to the zero function");
    rep.max_violation = violation;
    rep.sup_ratio = violation;
    rep.passed = violation <= kDominationTol;
    rep.runtime_seconds = now_seconds() - t0;
    return rep;
}

RatioReport run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.mode == "strong")
        return run_strong_type(cfg);
    if (cfg.mode == "weak")
        return run_weak_type(cfg);
    if (cfg.mode == "bmo")
        return run_bmo(cfg);
    if (cfg.mode == "vector-strong" || cfg.mode == "vector-weak")
        return run_vector(cfg);
    return run_domination(cfg);
}

bool SelfTestReport::all_pass() const
{
    for (const auto& l : lines)
        if (!l.pass)
            return false;
    return true;
}

namespace {

SelfTestLine vq_suite(const SelfTestOptions& opt, bool pruned)
{
    const double qs[4] = {1.0, 1.5, 2.0, 3.0};
    double worst = 0.0;
    for (int s = 0; s < opt.vq_sequences; ++s) {
        Rng rng(mix_seed(opt.seed, 0x10000u + static_cast<std::uint64_t>(s)));
        const int m = rng.uniform_int(1, 10);
        std::vector<double> vals(static_cast<std::size_t>(m));
        for (auto& v : vals)
            v = rng.uniform(-5.0, 5.0);
        for (double q : qs) {
            const double reference = vq_oracle(vals, q);
            double computed = pruned ? vq_pruned(vals, q) : vq_exact(vals, q);
            if (opt.mutate_vq && !pruned)
                computed += 1e-3 * (1.0 + computed);
            worst = std::max(worst, std::fabs(computed - reference) / (1.0 + reference));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst relative gap %.3e", worst);
    return {pruned ? "extrema_prune_exactness" : "variation_oracle_equivalence",
            worst <= 1e-12, buf};
}

std::pair<SelfTestLine, SelfTestLine> czd_suite(const SelfTestOptions& opt)
{
    int bad = 0;
    std::size_t dilate_violations = 0;
    double worst_recon = 0.0;
    for (int s = 0; s < opt.czd_instances; ++s) {
        Rng rng(mix_seed(opt.seed, 0x20000u + static_cast<std::uint64_t>(s)));
        const int dim = 1 + (s % 2);
        const int n = 8 << rng.uniform_int(0, 3);
        const Grid grid = Grid::centered(dim, n, 2.0 / n);
        std::vector<double> vals(grid.point_count());
        for (auto& v : vals)
            v = rng.uniform(-1.0, 1.0);
        const int peaks = rng.uniform_int(1, 4);
        for (int k = 0; k < peaks; ++k)
            vals[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(vals.size()) - 1))] *=
                rng.uniform(5.0, 25.0);
        const GridFunction f(grid, std::move(vals));
        double rootavg = 0.0;
        for (double v : f.values())
            rootavg += std::fabs(v);
        rootavg /= static_cast<double>(f.size());
        if (rootavg == 0.0)
            continue;
        const double lambda = rootavg * (1.0 + 3.0 * rng.uniform());
        const auto dec = cz_decompose(f, lambda);
        const auto rep = verify_czd(dec, f);
        if (!rep.all_asserted_pass())
            ++bad;
        worst_recon = std::max(worst_recon, rep.reconstruction_error);
        for (const auto& chk : rep.checks)
            if (!chk.asserted && !chk.pass)
                dilate_violations += 1;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "failing instances %d, worst reconstruction %.3e", bad,
                  worst_recon);
    SelfTestLine main{"czd_properties", bad == 0, buf};
    char buf2[96];
    std::snprintf(buf2, sizeof buf2, "instances with uncontained superlevel samples: %zu",
                  dilate_violations);
    SelfTestLine reported{"czd_dilate_containment_reported", true, buf2};
    return {main, reported};
}

SelfTestLine aol_suite(const SelfTestOptions& opt)
{
    const double rs[3] = {1.5, 2.0, 3.0};
    int bad = 0;
    for (int s = 0; s < opt.aol_instances; ++s) {
        Rng rng(mix_seed(opt.seed, 0x30000u + static_cast<std::uint64_t>(s)));
        const double r = rs[s % 3];
        const int K = rng.uniform_int(1, 6);
        const int J = rng.uniform_int(1, 6);
        OffsetSequence omega;
        omega.min_offset = -(J - 1);
        omega.values.resize(static_cast<std::size_t>(K - 1 - omega.min_offset) + 1);
        for (auto& v : omega.values)
            v = rng.uniform(0.0, 1.0);
        std::vector<double> delta(static_cast<std::size_t>(J));
        for (auto& v : delta)
            v = rng.uniform(0.0, 2.0);
        std::vector<std::vector<double>> h_norms(static_cast<std::size_t>(K),
                                                 std::vector<double>(static_cast<std::size_t>(J)));
        std::vector<double> group(static_cast<std::size_t>(K), 0.0);
        for (int k = 0; k < K; ++k) {
            double sum4[4] = {0.0, 0.0, 0.0, 0.0};
            for (int j = 0; j < J; ++j) {
                const double bound = omega.at(k - j) * std::pow(delta[static_cast<std::size_t>(j)], 1.0 / r);
                const double norm = bound * rng.uniform();
                // random direction in R^4
                double dir[4];
                double len2 = 0.0;
                for (double& dv : dir) {
                    dv = rng.uniform(-1.0, 1.0);
                    len2 += dv * dv;
                }
                const double len = std::sqrt(len2);
                if (len > 0.0 && norm > 0.0) {
                    for (int a = 0; a < 4; ++a)
                        sum4[a] += dir[a] / len * norm;
                    h_norms[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = norm;
                } else {
                    h_norms[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = 0.0;
                }
            }
            group[static_cast<std::size_t>(k)] =
                std::sqrt(sum4[0] * sum4[0] + sum4[1] * sum4[1] + sum4[2] * sum4[2] + sum4[3] * sum4[3]);
        }
        const auto rep = aol_check(h_norms, delta, omega, r, group);
        if (!rep.hypothesis_ok || !rep.conclusion_ok)
            ++bad;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "failing instances %d", bad);
    return {"almost_orthogonality", bad == 0, buf};
}

SelfTestLine tail_suite(const SelfTestOptions& opt)
{
    const CubeFamily fam{CubeConvention::Uncentered};
    double sup_coarse = 0.0, sup_fine = 0.0;
    bool all_finite = true;
    for (int s = 0; s < opt.tail_instances; ++s) {
        const std::uint64_t iseed = mix_seed(opt.seed, 0x40000u + static_cast<std::uint64_t>(s));
        for (int pass = 0; pass < 2; ++pass) {
            Rng rng(iseed);
            const int n = pass == 0 ? 128 : 256;
            const Grid grid = Grid::centered(1, n, 2.0 / n);
            const int kindpick = rng.uniform_int(0, 2);
            Weight w = kindpick == 0 ? a1_battery_weight(grid, "unit")
                       : kindpick == 1
                           ? a1_battery_weight(grid, "power", -rng.uniform(0.0, 0.95))
                           : a1_battery_weight(grid, "truncated");
            const double x0 = rng.uniform(-0.5, 0.5);
            const double r = rng.log_uniform(2.0 / 32.0, 2.0 / 8.0);
            const double alpha = rng.uniform() < 0.5 ? 0.5 : 1.0;
            const double ratio = standard_lemma_ratio(w, std::span<const double>{&x0, 1}, r,
                                                      alpha, fam);
            if (!std::isfinite(ratio) || !(ratio >= 0.0))
                all_finite = false;
            (pass == 0 ? sup_coarse : sup_fine) = std::max(pass == 0 ? sup_coarse : sup_fine, ratio);
        }
    }
    const double factor = sym_factor(sup_fine, sup_coarse);
    char buf[96];
    std::snprintf(buf, sizeof buf, "sup ratio %.4f -> %.4f, change factor %.3f", sup_coarse,
                  sup_fine, factor);
    return {"weighted_tail_ratio", all_finite && factor <= 2.0, buf};
}

SelfTestLine domination_suite(const SelfTestOptions& opt)
{
    ExperimentConfig cfg;
    cfg.id = "selftest-domination";
    cfg.mode = "domination";
    cfg.grid = GridSpec{1, 128, 0.0, std::nullopt};
    cfg.ladder.rungs_per_octave = 4;
    cfg.op.kind = OperatorSpec::Kind::Mollifier;
    cfg.battery.count = std::max(1, opt.domination_instances);
    cfg.battery.seed = mix_seed(opt.seed, 0x50000u);
    cfg.refine = false;
    double worst = -std::numeric_limits<double>::infinity();
    for (int combo = 0; combo < 2; ++combo) {
        cfg.op.phi.terms.clear();
        if (combo == 0) {
            cfg.op.phi.terms.push_back({1.0, 0.5});
        } else {
            cfg.op.phi.terms.push_back({0.75, 0.5});
            cfg.op.phi.terms.push_back({0.5, 1.25});
        }
        for (double q : {2.5, 3.0}) {
            cfg.q = q;
            const auto rep = run_domination(cfg);
            worst = std::max(worst, rep.max_violation);
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max violation %.3e", worst);
    return {"mollifier_domination", worst <= kDominationTol, buf};
}

} // namespace

SelfTestReport run_selftest(const SelfTestOptions& opt)
{
    if (opt.vq_sequences < 1 || opt.czd_instances < 1 || opt.aol_instances < 1 ||
        opt.tail_instances < 1 || opt.domination_instances < 1)
        throw ConfigError("selftest batteries must be nonempty");
    const double t0 = now_seconds();
    SelfTestReport rep;
    rep.lines.push_back(vq_suite(opt, false));
    rep.lines.push_back(vq_suite(opt, true));
    const auto [czd_main, czd_rep] = czd_suite(opt);
    rep.lines.push_back(czd_main);
    rep.lines.push_back(czd_rep);
    rep.lines.push_back(aol_suite(opt));
    rep.lines.push_back(tail_suite(opt));
    rep.lines.push_back(domination_suite(opt));
    rep.runtime_seconds = now_seconds() - t0;
    return rep;
}

} // namespace varops
