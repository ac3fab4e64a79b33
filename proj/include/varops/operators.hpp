#pragma once

#include "varops/grid.hpp"
#include "varops/variation.hpp"

#include <optional>
#include <vector>

namespace varops {

// Kernel K(x, y) = omega((x-y)/|x-y|) / |x-y|^d with omega sampled on the unit
// sphere: two values [omega(-1), omega(+1)] in dimension 1, M uniformly spaced
// angle samples with periodic piecewise-linear interpolation in dimension 2.
// The quadrature mean of omega is subtracted at construction so the stored
// profile integrates to zero on the sphere.
class HomogeneousKernel {
public:
    static HomogeneousKernel hilbert();          // d=1, omega(+1)=1, omega(-1)=-1
    static HomogeneousKernel riesz(int axis);    // d=2, omega(theta)=theta_axis, 64 samples
    static HomogeneousKernel from_samples(int dim, std::vector<double> omega,
                                          double hoelder_alpha,
                                          std::optional<double> size_constant = std::nullopt);

    int dim() const { return dim_; }
    double hoelder_alpha() const { return alpha_; }
    double size_constant() const { return size_; }
    // largest |omega(a) - omega(b)| / |chord|^alpha over adjacent samples
    double hoelder_constant() const { return hoelder_; }
    const std::vector<double>& omega_samples() const { return omega_; }

    double omega_on_direction(double ux, double uy) const;
    // K evaluated on the displacement x - y
    double eval(double dx, double dy) const;

private:
    HomogeneousKernel() = default;
    int dim_ = 1;
    std::vector<double> omega_;
    double alpha_ = 1.0;
    double size_ = 0.0;
    double hoelder_ = 0.0;
};

// Finite combination phi = sum_k alpha_k 1_{B(0, r_k)}.
struct BallCombination {
    struct Term {
        double alpha = 0.0;
        double radius = 0.0;
    };
    std::vector<Term> terms;
    // sum_k alpha_k |B_{r_k}| (continuum ball volumes)
    double l1_norm(int dim) const;
};

// Continuum volume of the ball of radius r (2r in d=1, pi r^2 in d=2).
double ball_volume(int dim, double r);

// K_t f(x): midpoint quadrature of K(x, y) f(y) over samples with |x-y| > t.
GridFunction truncated_singular(const GridFunction& f, const HomogeneousKernel& K, double t);

// Quadrature over the annulus s < |x-y| <= t; equals K_s f - K_t f.
GridFunction annulus_apply(const GridFunction& f, const HomogeneousKernel& K, double s, double t);

// Samples t -> K_t f(x) over the ladder.
VariationFamily singular_family(const GridFunction& f, const HomogeneousKernel& K,
                                const TruncationLadder& ladder);

// Average of f over the grid points with |y-x| < t; the normalization is the
// discrete point count, so constants are preserved exactly for every t.
GridFunction ball_average(const GridFunction& f, double t);

// Samples t -> A_t f(x) over the ladder.
VariationFamily average_family(const GridFunction& f, const TruncationLadder& ladder);

// Axis-aligned cube averages: the cube of side t centered at x holds the
// samples with max_axis |y-x| < t/2.
VariationFamily cube_average_family(const GridFunction& f, const TruncationLadder& ladder);

// Samples of t -> sum_k alpha_k |B_{r_k}| A_{r_k t} f(x), the ball-combination
// mollifier evaluated over the ladder.
VariationFamily approx_identity_family(const GridFunction& f, const BallCombination& phi,
                                       const TruncationLadder& ladder);

} // namespace varops
