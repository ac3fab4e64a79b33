#include "varops/operators.hpp"

#include "varops/errors.hpp"
#include "varops/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace varops {

namespace {

// chord distance between unit vectors at angles a and b
double chord(double a, double b)
{
    return 2.0 * std::fabs(std::sin((a - b) / 2.0));
}

void check_radius(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw ParamError("truncation radius must be positive and finite");
}

} // namespace

HomogeneousKernel HomogeneousKernel::from_samples(int dim, std::vector<double> omega,
                                                  double hoelder_alpha,
                                                  std::optional<double> size_constant)
{
    if (dim != 1 && dim != 2)
        throw ParamError("kernel dimension must be 1 or 2");
    if (dim == 1 && omega.size() != 2)
        throw ParamError("dimension 1 needs exactly two sphere samples");
    if (dim == 2 && omega.size() < 4)
        throw ParamError("dimension 2 needs at least four sphere samples");
    if (!(hoelder_alpha > 0.0) || hoelder_alpha > 1.0)
        throw ParamError("kernel regularity exponent must lie in (0, 1]");
    for (double v : omega)
        if (!std::isfinite(v))
            throw ParamError("sphere samples must be finite");

    // enforce mean zero against the uniform sphere quadrature
    double mean = 0.0;
    for (double v : omega)
        mean += v;
    mean /= static_cast<double>(omega.size());
    for (double& v : omega)
        v -= mean;

    double sup = 0.0;
    for (double v : omega)
        sup = std::max(sup, std::fabs(v));

    HomogeneousKernel k;
    k.dim_ = dim;
    k.omega_ = std::move(omega);
    k.alpha_ = hoelder_alpha;
    if (size_constant) {
        if (sup > *size_constant * (1.0 + 1e-12))
            throw ParamError("declared size constant is below sup |omega|");
        k.size_ = *size_constant;
    } else {
        k.size_ = sup;
    }

    double hoelder = 0.0;
    if (dim == 1) {
        // S^0 = {-1, +1}, chord distance 2
        hoelder = std::fabs(k.omega_[1] - k.omega_[0]) / std::pow(2.0, k.alpha_);
    } else {
        const std::size_t m = k.omega_.size();
        const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = (i + 1) % m;
            const double dist = chord(0.0, step);
            hoelder = std::max(hoelder,
                               std::fabs(k.omega_[j] - k.omega_[i]) / std::pow(dist, k.alpha_));
        }
    }
    k.hoelder_ = hoelder;
    return k;
}

HomogeneousKernel HomogeneousKernel::hilbert()
{
    return from_samples(1, {-1.0, 1.0}, 1.0);
}

HomogeneousKernel HomogeneousKernel::riesz(int axis)
{
    if (axis != 0 && axis != 1)
        throw ParamError("plane has axes 0 and 1");
    const std::size_t m = 64;
    std::vector<double> omega(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        omega[i] = axis == 0 ? std::cos(a) : std::sin(a);
    }
    return from_samples(2, std::move(omega), 1.0);
}

double HomogeneousKernel::omega_on_direction(double ux, double uy) const
{
    if (dim_ == 1)
        return ux > 0.0 ? omega_[1] : omega_[0];
    double a = std::atan2(uy, ux);
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    const std::size_t m = omega_.size();
    const double pos = a * static_cast<double>(m) / (2.0 * std::numbers::pi);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= m)
        i = m - 1;
    const double frac = pos - static_cast<double>(i);
    const std::size_t j = (i + 1) % m;
    return omega_[i] * (1.0 - frac) + omega_[j] * frac;
}

double HomogeneousKernel::eval(double dx, double dy) const
{
    if (dim_ == 1) {
        const double r = std::fabs(dx);
        return omega_on_direction(dx, 0.0) / r;
    }
    const double r = std::hypot(dx, dy);
    return omega_on_direction(dx / r, dy / r) / (r * r);
}

double ball_volume(int dim, double r)
{
    if (dim == 1)
        return 2.0 * r;
    if (dim == 2)
        return std::numbers::pi * r * r;
    throw ParamError("ball volume defined for dimensions 1 and 2");
}

double BallCombination::l1_norm(int dim) const
{
    double acc = 0.0;
    for (const auto& term : terms)
        acc += term.alpha * ball_volume(dim, term.radius);
    return acc;
}

namespace {

void check_kernel_grid(const GridFunction& f, const HomogeneousKernel& K)
{
    if (K.dim() != f.grid().dim)
        throw MismatchError("kernel dimension differs from grid dimension");
}

// Euclidean distance between samples p and yp.
inline double sample_distance(const Grid& g, std::size_t p, std::size_t yp)
{
    if (g.dim == 1) {
        const double d = (static_cast<double>(static_cast<int>(p)) -
                          static_cast<double>(static_cast<int>(yp))) * g.h;
        return std::fabs(d);
    }
    const auto a = g.unflatten(p);
    const auto b = g.unflatten(yp);
    const double dx = (a[0] - b[0]) * g.h;
    const double dy = (a[1] - b[1]) * g.h;
    return std::hypot(dx, dy);
}

// cube "entry scale": smallest side t at which y lies in the open cube of
// side t centered at x
inline double cube_scale(const Grid& g, std::size_t p, std::size_t yp)
{
    const auto a = g.unflatten(p);
    const auto b = g.unflatten(yp);
    double m = std::fabs(static_cast<double>(a[0] - b[0])) * g.h;
    if (g.dim == 2)
        m = std::max(m, std::fabs(static_cast<double>(a[1] - b[1])) * g.h);
    return 2.0 * m;
}

} // namespace

GridFunction truncated_singular(const GridFunction& f, const HomogeneousKernel& K, double t)
{
    check_kernel_grid(f, K);
    check_radius(t);
    const Grid& g = f.grid();
    const std::size_t npts = g.point_count();
    const double cell = g.cell_measure();
    GridFunction out = GridFunction::zeros(g);
    auto& ov = out.mutable_values();
    detail::parallel_for(npts, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto xp = g.point(p);
            double acc = 0.0;
            for (std::size_t yp = 0; yp < npts; ++yp) {
                if (yp == p)
                    continue;
                const double r = sample_distance(g, p, yp);
                if (!(r > t))
                    continue;
                const auto yq = g.point(yp);
                acc += K.eval(xp[0] - yq[0], xp[1] - yq[1]) * f[yp] * cell;
            }
            ov[p] = acc;
        }
    });
    return out;
}

GridFunction annulus_apply(const GridFunction& f, const HomogeneousKernel& K, double s, double t)
{
    check_kernel_grid(f, K);
    check_radius(s);
    if (!(t > s))
        throw ParamError("annulus needs s < t");
    const Grid& g = f.grid();
    const std::size_t npts = g.point_count();
    const double cell = g.cell_measure();
    GridFunction out = GridFunction::zeros(g);
    auto& ov = out.mutable_values();
    detail::parallel_for(npts, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto xp = g.point(p);
            double acc = 0.0;
            for (std::size_t yp = 0; yp < npts; ++yp) {
                if (yp == p)
                    continue;
                const double r = sample_distance(g, p, yp);
                if (!(r > s) || r > t)
                    continue;
                const auto yq = g.point(yp);
                acc += K.eval(xp[0] - yq[0], xp[1] - yq[1]) * f[yp] * cell;
            }
            ov[p] = acc;
        }
    });
    return out;
}

VariationFamily singular_family(const GridFunction& f, const HomogeneousKernel& K,
                                const TruncationLadder& ladder)
{
    check_kernel_grid(f, K);
    const Grid& g = f.grid();
    const std::size_t npts = g.point_count();
    const std::size_t m = ladder.size();
    const double cell = g.cell_measure();
    const auto& t = ladder.rungs();
    VariationFamily fam(g, ladder);
    detail::parallel_for(npts, [&](std::size_t begin, std::size_t end) {
        std::vector<double> bucket(m + 1, 0.0);
        for (std::size_t p = begin; p < end; ++p) {
            std::fill(bucket.begin(), bucket.end(), 0.0);
            const auto xp = g.point(p);
            for (std::size_t yp = 0; yp < npts; ++yp) {
                if (yp == p)
                    continue;
                const double r = sample_distance(g, p, yp);
                // y contributes to every rung with t_k < r
                const std::size_t k = static_cast<std::size_t>(
                    std::lower_bound(t.begin(), t.end(), r) - t.begin());
                if (k == 0)
                    continue;
                const auto yq = g.point(yp);
                bucket[k] += K.eval(xp[0] - yq[0], xp[1] - yq[1]) * f[yp] * cell;
            }
            auto row = fam.at(p);
            double suffix = 0.0;
            for (std::size_t k = m; k-- > 0;) {
                suffix += bucket[k + 1];
                row[k] = suffix;
            }
        }
    });
    return fam;
}

GridFunction ball_average(const GridFunction& f, double t)
{
    check_radius(t);
    const Grid& g = f.grid();
    const std::size_t npts = g.point_count();
    GridFunction out = GridFunction::zeros(g);
    auto& ov = out.mutable_values();
    detail::parallel_for(npts, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t yp = 0; yp < npts; ++yp) {
                if (sample_distance(g, p, yp) < t) {
                    acc += f[yp];
                    ++count;
                }
            }
            ov[p] = acc / static_cast<double>(count);
        }
    });
    return out;
}

namespace {

enum class AverageShape { Ball, Cube };

VariationFamily average_family_impl(const GridFunction& f, const TruncationLadder& ladder,
                                    AverageShape shape)
{
    const Grid& g = f.grid();
    const std::size_t npts = g.point_count();
    const std::size_t m = ladder.size();
    const auto& t = ladder.rungs();
    VariationFamily fam(g, ladder);
    detail::parallel_for(npts, [&](std::size_t begin, std::size_t end) {
        std::vector<double> bucket_sum(m + 1, 0.0);
        std::vector<std::size_t> bucket_cnt(m + 1, 0);
        for (std::size_t p = begin; p < end; ++p) {
            std::fill(bucket_sum.begin(), bucket_sum.end(), 0.0);
            std::fill(bucket_cnt.begin(), bucket_cnt.end(), std::size_t{0});
            for (std::size_t yp = 0; yp < npts; ++yp) {
                const double r = shape == AverageShape::Ball ? sample_distance(g, p, yp)
                                                             : cube_scale(g, p, yp);
                // y is inside the rung-k region when r < t_k: first such k
                // (k == m lands in the overflow bucket and is never used)
                const std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(t.begin(), t.end(), r) - t.begin());
                bucket_sum[k] += f[yp];
                bucket_cnt[k] += 1;
            }
            // a sample with entry index k belongs to every rung j >= k
            auto row = fam.at(p);
            double acc = 0.0;
            std::size_t cnt = 0;
            for (std::size_t k = 0; k < m; ++k) {
                acc += bucket_sum[k];
                cnt += bucket_cnt[k];
                row[k] = acc / static_cast<double>(cnt);
            }
        }
    });
    return fam;
}

} // namespace

VariationFamily average_family(const GridFunction& f, const TruncationLadder& ladder)
{
    return average_family_impl(f, ladder, AverageShape::Ball);
}

VariationFamily cube_average_family(const GridFunction& f, const TruncationLadder& ladder)
{
    return average_family_impl(f, ladder, AverageShape::Cube);
}

VariationFamily approx_identity_family(const GridFunction& f, const BallCombination& phi,
                                       const TruncationLadder& ladder)
{
    if (phi.terms.empty())
        throw ParamError("ball combination must have at least one term");
    for (const auto& term : phi.terms)
        if (!(term.radius > 0.0))
            throw ParamError("ball radii must be positive");
    const Grid& g = f.grid();
    const int dim = g.dim;
    VariationFamily out(g, ladder);
    const std::size_t npts = g.point_count();
    const std::size_t m = ladder.size();
    for (const auto& term : phi.terms) {
        const double coef = term.alpha * ball_volume(dim, term.radius);
        const VariationFamily part = average_family(f, ladder.scaled_by(term.radius));
        for (std::size_t p = 0; p < npts; ++p) {
            auto row = out.at(p);
            const auto src = part.at(p);
            for (std::size_t k = 0; k < m; ++k)
                row[k] += coef * src[k];
        }
    }
    return out;
}

} // namespace varops
