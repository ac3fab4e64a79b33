#include "varops/battery.hpp"

#include "varops/errors.hpp"

#include <algorithm>
#include <cmath>

namespace varops {

std::uint64_t Rng::next()
{
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double Rng::log_uniform(double lo, double hi)
{
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

int Rng::uniform_int(int lo, int hi)
{
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    Rng r(seed ^ (0xA24BAED4963EE407ull * (salt + 1)));
    return r.next();
}

std::uint64_t instance_component_seed(std::uint64_t battery_seed, int instance, int component)
{
    return mix_seed(mix_seed(battery_seed, static_cast<std::uint64_t>(instance)),
                    static_cast<std::uint64_t>(component));
}

namespace {

struct Box {
    int dim;
    double start[2];
    double length; // per axis (grids are square)
};

Box box_of(const Grid& g)
{
    Box b;
    b.dim = g.dim;
    b.length = g.box_length();
    for (int a = 0; a < g.dim; ++a)
        b.start[a] = g.origin[static_cast<std::size_t>(a)] - g.h / 2.0;
    return b;
}

GridFunction sample_spike(const Grid& g, Rng& rng)
{
    const Box b = box_of(g);
    double xi[2] = {0.0, 0.0};
    for (int a = 0; a < b.dim; ++a)
        xi[a] = b.start[a] + b.length * rng.uniform(0.1, 0.9);
    const double width = rng.log_uniform(b.length / 64.0, b.length / 8.0);
    const double height = b.dim == 1 ? 1.0 / width : 1.0 / (width * width);
    GridFunction f = GridFunction::zeros(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = g.point(i);
        bool inside = std::fabs(x[0] - xi[0]) <= width / 2.0;
        if (b.dim == 2)
            inside = inside && std::fabs(x[1] - xi[1]) <= width / 2.0;
        if (inside)
            f[i] = height;
    }
    return f;
}

GridFunction sample_bump(const Grid& g, Rng& rng)
{
    const Box b = box_of(g);
    double xi[2] = {0.0, 0.0};
    for (int a = 0; a < b.dim; ++a)
        xi[a] = b.start[a] + b.length * rng.uniform(0.2, 0.8);
    const double sigma = rng.log_uniform(b.length / 32.0, b.length / 8.0);
    GridFunction f = GridFunction::zeros(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = g.point(i);
        double d2 = (x[0] - xi[0]) * (x[0] - xi[0]);
        if (b.dim == 2)
            d2 += (x[1] - xi[1]) * (x[1] - xi[1]);
        f[i] = std::exp(-d2 / (2.0 * sigma * sigma));
    }
    return f;
}

GridFunction sample_step(const Grid& g, Rng& rng)
{
    const Box b = box_of(g);
    const int axis = b.dim == 2 ? rng.uniform_int(0, 1) : 0;
    const int nbreak = rng.uniform_int(1, 4);
    std::vector<double> breaks(static_cast<std::size_t>(nbreak));
    for (auto& v : breaks)
        v = b.start[axis] + b.length * rng.uniform(0.1, 0.9);
    std::sort(breaks.begin(), breaks.end());
    double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    GridFunction f = GridFunction::zeros(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = g.point(i);
        const double c = axis == 0 ? x[0] : x[1];
        double s = sign;
        for (double br : breaks)
            if (c >= br)
                s = -s;
        f[i] = s;
    }
    return f;
}

GridFunction sample_dyadic(const Grid& g, Rng& rng)
{
    const Box b = box_of(g);
    const int level = rng.uniform_int(1, 4);
    const int cells = 1 << level;
    const double side = b.length / cells;
    double lo[2] = {0.0, 0.0};
    for (int a = 0; a < b.dim; ++a)
        lo[a] = b.start[a] + side * rng.uniform_int(0, cells - 1);
    GridFunction f = GridFunction::zeros(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = g.point(i);
        bool inside = x[0] >= lo[0] && x[0] < lo[0] + side;
        if (b.dim == 2)
            inside = inside && x[1] >= lo[1] && x[1] < lo[1] + side;
        if (inside)
            f[i] = 1.0;
    }
    return f;
}

} // namespace

GridFunction battery_function(const Grid& grid, const std::string& generator,
                              std::uint64_t seed)
{
    Rng rng(seed);
    if (generator == "spike")
        return sample_spike(grid, rng);
    if (generator == "bump")
        return sample_bump(grid, rng);
    if (generator == "step")
        return sample_step(grid, rng);
    if (generator == "dyadic")
        return sample_dyadic(grid, rng);
    if (generator == "constant") {
        GridFunction f = GridFunction::zeros(grid);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = 1.0;
        return f;
    }
    throw ConfigError("unknown battery generator: " + generator);
}

const std::vector<std::string>& battery_generator_names()
{
    static const std::vector<std::string> names{"spike", "bump", "step", "dyadic"};
    return names;
}

} // namespace varops
