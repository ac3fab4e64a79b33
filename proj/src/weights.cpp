#include "varops/weights.hpp"

#include "varops/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varops {

namespace {

int log2_int(int n)
{
    int g = 0;
    while ((1 << (g + 1)) <= n)
        ++g;
    return g;
}

void window_sums(const double* v, int n, int w, double* out)
{
    double acc = 0.0;
    for (int i = 0; i < w; ++i)
        acc += v[i];
    out[0] = acc;
    for (int p = 1; p + w <= n; ++p) {
        acc += v[p + w - 1] - v[p - 1];
        out[p] = acc;
    }
}

double sample_norm(const Grid& g, std::size_t flat)
{
    const auto x = g.point(flat);
    return g.dim == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]);
}

// sup over admissible cubes of avgU * avgV^(p-1)
double pair_average_sup(const Grid& grid, const std::vector<double>& u,
                        const std::vector<double>& v, double pm1, const CubeFamily& fam)
{
    const int n = grid.n;
    const int G = log2_int(n);
    double best = 0.0;
    if (grid.dim == 1) {
        std::vector<double> su(static_cast<std::size_t>(n)), sv(static_cast<std::size_t>(n));
        for (int g = 0; g <= G; ++g) {
            const int w = 1 << g;
            const int P = n - w + 1;
            window_sums(u.data(), n, w, su.data());
            window_sums(v.data(), n, w, sv.data());
            const int step = fam.convention == CubeConvention::Dyadic ? w : 1;
            for (int p = 0; p < P; p += step) {
                const double au = su[static_cast<std::size_t>(p)] / w;
                const double av = sv[static_cast<std::size_t>(p)] / w;
                best = std::max(best, au * std::pow(av, pm1));
            }
        }
        return best;
    }
    const std::size_t un = static_cast<std::size_t>(n);
    for (int g = 0; g <= G; ++g) {
        const int w = 1 << g;
        const int P = n - w + 1;
        const int step = fam.convention == CubeConvention::Dyadic ? w : 1;
        // row window sums for both arrays
        std::vector<double> ru(un * static_cast<std::size_t>(P)), rv(un * static_cast<std::size_t>(P));
        for (int i0 = 0; i0 < n; ++i0) {
            window_sums(u.data() + static_cast<std::size_t>(i0) * un, n, w,
                        ru.data() + static_cast<std::size_t>(i0) * static_cast<std::size_t>(P));
            window_sums(v.data() + static_cast<std::size_t>(i0) * un, n, w,
                        rv.data() + static_cast<std::size_t>(i0) * static_cast<std::size_t>(P));
        }
        const double cells = static_cast<double>(w) * static_cast<double>(w);
        for (int p1 = 0; p1 < P; p1 += step) {
            double au = 0.0, av = 0.0;
            for (int i0 = 0; i0 < w; ++i0) {
                au += ru[static_cast<std::size_t>(i0) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
                av += rv[static_cast<std::size_t>(i0) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
            }
            best = std::max(best, (au / cells) * std::pow(av / cells, pm1));
            for (int p0 = step; p0 < P; p0 += step) {
                if (step == 1) {
                    au += ru[static_cast<std::size_t>(p0 + w - 1) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)] -
                          ru[static_cast<std::size_t>(p0 - 1) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
                    av += rv[static_cast<std::size_t>(p0 + w - 1) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)] -
                          rv[static_cast<std::size_t>(p0 - 1) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
                } else {
                    au = 0.0;
                    av = 0.0;
                    for (int i0 = p0; i0 < p0 + w; ++i0) {
                        au += ru[static_cast<std::size_t>(i0) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
                        av += rv[static_cast<std::size_t>(i0) * static_cast<std::size_t>(P) + static_cast<std::size_t>(p1)];
                    }
                }
                best = std::max(best, (au / cells) * std::pow(av / cells, pm1));
            }
        }
    }
    return best;
}

} // namespace

Weight::Weight(GridFunction w) : w_(std::move(w))
{
    for (double v : w_.values())
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParamError("weights must be strictly positive and finite");
}

Weight Weight::unit(const Grid& grid)
{
    return Weight(GridFunction(grid, std::vector<double>(grid.point_count(), 1.0)));
}

double Weight::ap_constant(double p, const CubeFamily& fam) const
{
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParamError("ap_constant needs p > 1");
    const std::pair<double, int> key{p, static_cast<int>(fam.convention)};
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end())
            return it->second;
    }
    const auto wv = w_.values();
    std::vector<double> u(wv.begin(), wv.end());
    std::vector<double> v(wv.size());
    const double dualexp = -1.0 / (p - 1.0);
    for (std::size_t i = 0; i < wv.size(); ++i)
        v[i] = std::pow(wv[i], dualexp);
    const double c = pair_average_sup(w_.grid(), u, v, p - 1.0, fam);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values[key] = c;
    return c;
}

double Weight::a1_constant(const CubeFamily& fam) const
{
    const std::pair<double, int> key{1.0, static_cast<int>(fam.convention)};
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end())
            return it->second;
    }
    const GridFunction m = hl_maximal(w_, fam);
    double best = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        best = std::max(best, m[i] / w_[i]);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values[key] = best;
    return best;
}

double ap_constant(const Weight& w, double p, const CubeFamily& fam)
{
    return w.ap_constant(p, fam);
}

double a1_constant(const Weight& w, const CubeFamily& fam)
{
    return w.a1_constant(fam);
}

Weight power_weight(const Grid& grid, double alpha)
{
    std::vector<double> vals(grid.point_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double r = sample_norm(grid, i);
        if (r == 0.0)
            throw ParamError("power weight undefined at the origin sample; "
                             "shift the grid origin so no sample sits at 0");
        vals[i] = std::pow(r, alpha);
    }
    return Weight(GridFunction(grid, std::move(vals)));
}

double standard_lemma_ratio(const Weight& w, std::span<const double> x0, double r,
                            double alpha, const CubeFamily& fam)
{
    const Grid& grid = w.grid();
    if (x0.size() != static_cast<std::size_t>(grid.dim))
        throw ParamError("center has wrong dimension");
    if (!(r > 0.0))
        throw ParamError("radius must be positive");
    if (!(alpha > 0.0))
        throw ParamError("tail exponent must be positive");
    const double cell = grid.cell_measure();
    const auto wf = w.function();
    double tail = 0.0;
    bool ball_nonempty = false;
    double min_m = std::numeric_limits<double>::infinity();
    const GridFunction m = hl_maximal(w.function(), fam);
    for (std::size_t i = 0; i < wf.size(); ++i) {
        const auto x = grid.point(i);
        const double dist = grid.dim == 1 ? std::fabs(x[0] - x0[0])
                                          : std::hypot(x[0] - x0[0], x[1] - x0[1]);
        if (dist > r) {
            tail += wf[i] * cell / std::pow(dist, grid.dim + alpha);
        } else if (dist < r) {
            ball_nonempty = true;
            min_m = std::min(min_m, m[i]);
        }
    }
    if (!ball_nonempty)
        throw ParamError("ball around the center contains no grid sample");
    const double denom = std::pow(r, -alpha) * min_m;
    return tail / denom;
}

Weight a1_battery_weight(const Grid& grid, const std::string& kind, double alpha)
{
    if (kind == "unit")
        return Weight::unit(grid);
    if (kind == "power") {
        if (!(alpha > -grid.dim) || alpha > 0.0)
            throw ParamError("battery power exponent must lie in (-d, 0]");
        return power_weight(grid, alpha);
    }
    if (kind == "truncated") {
        std::vector<double> vals(grid.point_count());
        const double ex = -0.5 * grid.dim;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double r = sample_norm(grid, i);
            if (r == 0.0)
                throw ParamError("truncated battery weight undefined at the origin sample");
            vals[i] = std::min(1.0, std::pow(r, ex));
        }
        return Weight(GridFunction(grid, std::move(vals)));
    }
    throw ParamError("unknown battery weight kind: " + kind);
}

namespace {

RefinementStability stability_impl(const std::function<double(int)>& constant_at_size,
                                   std::span<const int> sizes)
{
    if (sizes.size() < 2)
        throw ParamError("stability chain needs at least two sizes");
    RefinementStability out;
    for (int n : sizes) {
        out.sizes.push_back(n);
        out.constants.push_back(constant_at_size(n));
    }
    out.growth = out.constants.back() / out.constants.front();
    out.pass = out.growth <= 2.0;
    return out;
}

} // namespace

RefinementStability ap_stability(const std::function<Weight(int)>& weight_at_size, double p,
                                 const CubeFamily& fam, std::span<const int> sizes)
{
    return stability_impl(
        [&](int n) { return weight_at_size(n).ap_constant(p, fam); }, sizes);
}

RefinementStability a1_stability(const std::function<Weight(int)>& weight_at_size,
                                 const CubeFamily& fam, std::span<const int> sizes)
{
    return stability_impl(
        [&](int n) { return weight_at_size(n).a1_constant(fam); }, sizes);
}

std::vector<int> default_stability_sizes(int dim)
{
    if (dim == 1)
        return {64, 128, 256, 512};
    return {8, 16, 32, 64};
}

} // namespace varops
