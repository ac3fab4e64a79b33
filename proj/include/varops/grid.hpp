#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace varops {

// Uniform grid on an axis-aligned box in dimension 1 or 2. Samples sit at
// origin + index*h per axis; each sample owns a cell of measure h^dim, so the
// box is [origin - h/2, origin + (n-1)h + h/2] per axis. Functions are
// extended by zero outside the box. The default origin straddles zero so no
// sample coincides with the origin.
struct Grid {
    int dim = 1;
    int n = 0;          // samples per axis, power of two
    double h = 0.0;     // spacing
    std::array<double, 2> origin{0.0, 0.0};

    static Grid centered(int dim, int n, double h);
    static Grid with_origin(int dim, int n, double h, std::array<double, 2> origin);

    // Halves h and doubles n keeping the box fixed.
    Grid refined() const;

    std::size_t point_count() const;
    double cell_measure() const;
    double box_length() const { return static_cast<double>(n) * h; }
    double coord(int axis, int index) const { return origin[static_cast<std::size_t>(axis)] + index * h; }

    std::size_t flatten(int i0, int i1 = 0) const;
    std::array<int, 2> unflatten(std::size_t flat) const;
    std::array<double, 2> point(std::size_t flat) const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);
    static GridFunction zeros(const Grid& grid);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Finite sequence of functions sharing one grid (vector-valued data).
struct SequenceGridFunction {
    explicit SequenceGridFunction(std::vector<GridFunction> components);
    const Grid& grid() const { return components.front().grid(); }
    std::size_t count() const { return components.size(); }
    std::vector<GridFunction> components;
};

// Weighted L^p norm (midpoint quadrature): (sum |f_i|^p w_i h^d)^(1/p) for
// finite p >= 1; p = infinity gives the plain sup of |f| (weights strictly
// positive do not change the essential sup).
double lp_norm(const GridFunction& f, double p, const GridFunction& w);

// w-measure of the strict super-level set { |f| > lambda }.
double weighted_measure_above(const GridFunction& f, const GridFunction& w, double lambda);

// sup over the given levels of lambda * w({ |f| > lambda }).
double weak_l1_constant(const GridFunction& f, const GridFunction& w,
                        std::span<const double> lambda_grid);

GridFunction scaled(const GridFunction& f, double c);
GridFunction sum(const GridFunction& a, const GridFunction& b);
GridFunction pointwise_product(const GridFunction& a, const GridFunction& b);
double sup_abs(const GridFunction& f);

} // namespace varops
