#include "varops/grid.hpp"

#include "varops/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace varops {

namespace {

bool is_pow2(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

void validate_grid(const Grid& g)
{
    if (g.dim != 1 && g.dim != 2)
        throw ParamError("grid dimension must be 1 or 2, got " + std::to_string(g.dim));
    if (!is_pow2(g.n))
        throw ParamError("grid size per axis must be a power of two, got " + std::to_string(g.n));
    if (!(g.h > 0.0) || !std::isfinite(g.h))
        throw ParamError("grid spacing must be positive and finite");
}

void require_same_grid(const GridFunction& a, const GridFunction& b)
{
    if (!(a.grid() == b.grid()))
        throw MismatchError("operands live on different grids");
}

} // namespace

Grid Grid::centered(int dim, int n, double h)
{
    Grid g;
    g.dim = dim;
    g.n = n;
    g.h = h;
    const double o = -(n / 2) * h + h / 2.0;
    g.origin = {o, o};
    validate_grid(g);
    return g;
}

Grid Grid::with_origin(int dim, int n, double h, std::array<double, 2> origin)
{
    Grid g;
    g.dim = dim;
    g.n = n;
    g.h = h;
    g.origin = origin;
    validate_grid(g);
    return g;
}

Grid Grid::refined() const
{
    Grid g = *this;
    g.n = n * 2;
    g.h = h / 2.0;
    for (int a = 0; a < dim; ++a)
        g.origin[static_cast<std::size_t>(a)] = origin[static_cast<std::size_t>(a)] - h / 4.0;
    validate_grid(g);
    return g;
}

std::size_t Grid::point_count() const
{
    std::size_t c = static_cast<std::size_t>(n);
    if (dim == 2)
        c *= static_cast<std::size_t>(n);
    return c;
}

double Grid::cell_measure() const
{
    return dim == 1 ? h : h * h;
}

std::size_t Grid::flatten(int i0, int i1) const
{
    if (dim == 1)
        return static_cast<std::size_t>(i0);
    return static_cast<std::size_t>(i0) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i1);
}

std::array<int, 2> Grid::unflatten(std::size_t flat) const
{
    if (dim == 1)
        return {static_cast<int>(flat), 0};
    return {static_cast<int>(flat / static_cast<std::size_t>(n)),
            static_cast<int>(flat % static_cast<std::size_t>(n))};
}

std::array<double, 2> Grid::point(std::size_t flat) const
{
    const auto idx = unflatten(flat);
    if (dim == 1)
        return {coord(0, idx[0]), 0.0};
    return {coord(0, idx[0]), coord(1, idx[1])};
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    validate_grid(grid_);
    if (values_.size() != grid_.point_count())
        throw ParamError("value count " + std::to_string(values_.size()) +
                         " does not match grid with " + std::to_string(grid_.point_count()) +
                         " points");
    for (double v : values_)
        if (!std::isfinite(v))
            throw ParamError("grid function values must be finite");
}

GridFunction GridFunction::zeros(const Grid& grid)
{
    return GridFunction(grid, std::vector<double>(grid.point_count(), 0.0));
}

SequenceGridFunction::SequenceGridFunction(std::vector<GridFunction> comps)
    : components(std::move(comps))
{
    if (components.empty())
        throw ParamError("sequence needs at least one component");
    for (const auto& c : components)
        if (!(c.grid() == components.front().grid()))
            throw MismatchError("sequence components live on different grids");
}

double lp_norm(const GridFunction& f, double p, const GridFunction& w)
{
    require_same_grid(f, w);
    if (std::isinf(p)) {
        return sup_abs(f);
    }
    if (!(p >= 1.0))
        throw ParamError("lp_norm needs p >= 1");
    const double cell = f.grid().cell_measure();
    double acc = 0.0;
    const auto fv = f.values();
    const auto wv = w.values();
    for (std::size_t i = 0; i < fv.size(); ++i)
        acc += std::pow(std::fabs(fv[i]), p) * wv[i] * cell;
    return std::pow(acc, 1.0 / p);
}

double weighted_measure_above(const GridFunction& f, const GridFunction& w, double lambda)
{
    require_same_grid(f, w);
    if (!(lambda > 0.0))
        throw ParamError("level must be positive");
    const double cell = f.grid().cell_measure();
    double acc = 0.0;
    const auto fv = f.values();
    const auto wv = w.values();
    for (std::size_t i = 0; i < fv.size(); ++i)
        if (std::fabs(fv[i]) > lambda)
            acc += wv[i] * cell;
    return acc;
}

double weak_l1_constant(const GridFunction& f, const GridFunction& w,
                        std::span<const double> lambda_grid)
{
    require_same_grid(f, w);
    if (lambda_grid.empty())
        throw ParamError("level grid must be nonempty");
    double prev = 0.0;
    for (double l : lambda_grid) {
        if (!(l > 0.0))
            throw ParamError("levels must be positive");
        if (!(l > prev))
            throw ParamError("levels must be strictly increasing");
        prev = l;
    }
    double best = 0.0;
    for (double l : lambda_grid)
        best = std::max(best, l * weighted_measure_above(f, w, l));
    return best;
}

GridFunction scaled(const GridFunction& f, double c)
{
    std::vector<double> out(f.values().begin(), f.values().end());
    for (double& v : out)
        v *= c;
    return GridFunction(f.grid(), std::move(out));
}

GridFunction sum(const GridFunction& a, const GridFunction& b)
{
    require_same_grid(a, b);
    std::vector<double> out(a.values().begin(), a.values().end());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += b[i];
    return GridFunction(a.grid(), std::move(out));
}

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b)
{
    require_same_grid(a, b);
    std::vector<double> out(a.values().begin(), a.values().end());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= b[i];
    return GridFunction(a.grid(), std::move(out));
}

double sup_abs(const GridFunction& f)
{
    double m = 0.0;
    for (double v : f.values())
        m = std::max(m, std::fabs(v));
    return m;
}

} // namespace varops
