#pragma once

#include "varops/grid.hpp"
#include "varops/maximal.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace varops {

// Strictly positive grid function with cached Muckenhoupt constant estimates.
class Weight {
public:
    explicit Weight(GridFunction w);
    static Weight unit(const Grid& grid);

    const GridFunction& function() const { return w_; }
    const Grid& grid() const { return w_.grid(); }

    double ap_constant(double p, const CubeFamily& fam) const;
    double a1_constant(const CubeFamily& fam) const;

private:
    GridFunction w_;
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<double, int>, double> values;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// sup over admissible cubes of avg(w) * avg(w^(-1/(p-1)))^(p-1), p > 1.
double ap_constant(const Weight& w, double p, const CubeFamily& fam);

// sup over points of M w / w with the family's maximal operator.
double a1_constant(const Weight& w, const CubeFamily& fam);

// w(x) = |x|^alpha. Errors out if a sample sits exactly at the origin
// (shift the grid origin in that case).
Weight power_weight(const Grid& grid, double alpha);

// Ratio of the weighted tail integral sum_{|x - x0| > r} w(x) h^d / |x - x0|^(d+alpha)
// against r^(-alpha) * min over samples in the open ball B(x0, r) of M w.
// alpha > 0; the ball must contain at least one sample.
double standard_lemma_ratio(const Weight& w, std::span<const double> x0, double r,
                            double alpha, const CubeFamily& fam);

// Test battery members: "unit", "power" (exponent in (-d, 0]), and
// "truncated" = min(1, |x|^(-d/2)).
Weight a1_battery_weight(const Grid& grid, const std::string& kind, double alpha = 0.0);

// Weighted L^p overloads matching the grid-level functionals.
inline double lp_norm(const GridFunction& f, double p, const Weight& w)
{
    return lp_norm(f, p, w.function());
}
inline double weighted_measure_above(const GridFunction& f, const Weight& w, double lambda)
{
    return weighted_measure_above(f, w.function(), lambda);
}
inline double weak_l1_constant(const GridFunction& f, const Weight& w,
                               std::span<const double> lambda_grid)
{
    return weak_l1_constant(f, w.function(), lambda_grid);
}

// Refinement behavior of a Muckenhoupt constant over a chain of grid sizes on
// a fixed box. A genuine A_p (resp. A_1) member keeps its constant essentially
// flat; for power weights outside the admissible range the constant keeps
// growing with resolution. The criterion bounds the total growth across the
// chain (three doublings by default) by a factor 2.
struct RefinementStability {
    std::vector<int> sizes;
    std::vector<double> constants;
    double growth = 0.0; // constants.back() / constants.front()
    bool pass = false;   // growth <= 2
};

RefinementStability ap_stability(const std::function<Weight(int)>& weight_at_size, double p,
                                 const CubeFamily& fam, std::span<const int> sizes);
RefinementStability a1_stability(const std::function<Weight(int)>& weight_at_size,
                                 const CubeFamily& fam, std::span<const int> sizes);

// Default chains: 64..512 in dimension 1, 8..64 in dimension 2.
std::vector<int> default_stability_sizes(int dim);

} // namespace varops
