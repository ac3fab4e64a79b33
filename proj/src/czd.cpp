#include "varops/czd.hpp"

#include "varops/errors.hpp"
#include "varops/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace varops {

namespace {

int log2_int(int n)
{
    int g = 0;
    while ((1 << (g + 1)) <= n)
        ++g;
    return g;
}

struct CubeView {
    const Grid* grid;
    const GridFunction* f;

    std::size_t cells(const DyadicCube& q) const
    {
        const std::size_t side = static_cast<std::size_t>(1) << q.generation;
        return grid->dim == 1 ? side : side * side;
    }

    double abs_average(const DyadicCube& q) const
    {
        const int side = 1 << q.generation;
        double acc = 0.0;
        if (grid->dim == 1) {
            for (int i = q.corner[0]; i < q.corner[0] + side; ++i)
                acc += std::fabs((*f)[static_cast<std::size_t>(i)]);
        } else {
            for (int i0 = q.corner[0]; i0 < q.corner[0] + side; ++i0)
                for (int i1 = q.corner[1]; i1 < q.corner[1] + side; ++i1)
                    acc += std::fabs((*f)[grid->flatten(i0, i1)]);
        }
        return acc / static_cast<double>(cells(q));
    }

    double signed_average(const DyadicCube& q) const
    {
        const int side = 1 << q.generation;
        double acc = 0.0;
        if (grid->dim == 1) {
            for (int i = q.corner[0]; i < q.corner[0] + side; ++i)
                acc += (*f)[static_cast<std::size_t>(i)];
        } else {
            for (int i0 = q.corner[0]; i0 < q.corner[0] + side; ++i0)
                for (int i1 = q.corner[1]; i1 < q.corner[1] + side; ++i1)
                    acc += (*f)[grid->flatten(i0, i1)];
        }
        return acc / static_cast<double>(cells(q));
    }

    template <typename Fn>
    void for_each_sample(const DyadicCube& q, Fn&& fn) const
    {
        const int side = 1 << q.generation;
        if (grid->dim == 1) {
            for (int i = q.corner[0]; i < q.corner[0] + side; ++i)
                fn(static_cast<std::size_t>(i));
        } else {
            for (int i0 = q.corner[0]; i0 < q.corner[0] + side; ++i0)
                for (int i1 = q.corner[1]; i1 < q.corner[1] + side; ++i1)
                    fn(grid->flatten(i0, i1));
        }
    }
};

void select_cubes(const CubeView& view, const DyadicCube& q, double lambda,
                  std::vector<DyadicCube>& out)
{
    const int half = 1 << (q.generation - 1);
    const int children0[2] = {q.corner[0], q.corner[0] + half};
    const int children1[2] = {q.corner[1], q.corner[1] + half};
    const int nsplit = view.grid->dim == 1 ? 1 : 2;
    for (int c0 = 0; c0 < 2; ++c0) {
        for (int c1 = 0; c1 < (nsplit == 2 ? 2 : 1); ++c1) {
            DyadicCube child;
            child.generation = q.generation - 1;
            child.corner = {children0[c0], nsplit == 2 ? children1[c1] : 0};
            const double avg = view.abs_average(child);
            if (avg > lambda)
                out.push_back(child);
            else if (child.generation > 0)
                select_cubes(view, child, lambda, out);
        }
    }
}

// samples of the 5*sqrt(d) dilate of q, rounded outward to whole cells and
// clipped to the box
void dilate_samples(const Grid& grid, const DyadicCube& q, std::vector<std::size_t>& out)
{
    const int side = 1 << q.generation;
    const double factor = 5.0 * std::sqrt(static_cast<double>(grid.dim));
    const double half = factor * (side * grid.h) / 2.0;
    std::array<int, 2> lo{0, 0}, hi{0, 0};
    for (int axis = 0; axis < grid.dim; ++axis) {
        const double center = grid.coord(axis, q.corner[static_cast<std::size_t>(axis)]) +
                              (side - 1) * grid.h / 2.0;
        // sample index range with |x_i - center| <= half + h/2
        const double lo_x = center - half - grid.h / 2.0;
        const double hi_x = center + half + grid.h / 2.0;
        const double o = grid.origin[static_cast<std::size_t>(axis)];
        int li = static_cast<int>(std::ceil((lo_x - o) / grid.h - 1e-12));
        int hi_i = static_cast<int>(std::floor((hi_x - o) / grid.h + 1e-12));
        li = std::max(li, 0);
        hi_i = std::min(hi_i, grid.n - 1);
        lo[static_cast<std::size_t>(axis)] = li;
        hi[static_cast<std::size_t>(axis)] = hi_i;
    }
    if (grid.dim == 1) {
        for (int i = lo[0]; i <= hi[0]; ++i)
            out.push_back(static_cast<std::size_t>(i));
    } else {
        for (int i0 = lo[0]; i0 <= hi[0]; ++i0)
            for (int i1 = lo[1]; i1 <= hi[1]; ++i1)
                out.push_back(grid.flatten(i0, i1));
    }
}

} // namespace

CZDecomposition cz_decompose(const GridFunction& f, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ParamError("decomposition level must be positive and finite");
    const Grid& grid = f.grid();
    CubeView view{&grid, &f};

    DyadicCube root;
    root.generation = log2_int(grid.n);
    root.corner = {0, 0};
    const double root_avg = view.abs_average(root);
    if (root_avg > lambda)
        throw LevelError("level " + std::to_string(lambda) +
                             " is below the box average of |f|; minimal admissible level is " +
                             std::to_string(root_avg),
                         root_avg);

    CZDecomposition dec;
    dec.lambda = lambda;
    if (root.generation > 0)
        select_cubes(view, root, lambda, dec.cubes);

    dec.good = f;
    auto& gv = dec.good.mutable_values();
    std::vector<std::size_t> omega;
    for (const auto& q : dec.cubes) {
        BadPart part;
        part.cube = q;
        part.average = view.signed_average(q);
        part.values.reserve(view.cells(q));
        view.for_each_sample(q, [&](std::size_t i) {
            part.values.push_back(f[i] - part.average);
            gv[i] = part.average;
            omega.push_back(i);
        });
        dec.bad.push_back(std::move(part));
    }
    std::sort(omega.begin(), omega.end());
    dec.omega = std::move(omega);

    std::vector<std::size_t> tilde;
    for (const auto& q : dec.cubes)
        dilate_samples(grid, q, tilde);
    std::sort(tilde.begin(), tilde.end());
    tilde.erase(std::unique(tilde.begin(), tilde.end()), tilde.end());
    dec.omega_tilde = std::move(tilde);
    return dec;
}

bool CZDReport::all_asserted_pass() const
{
    for (const auto& c : checks)
        if (c.asserted && !c.pass)
            return false;
    return true;
}

CZDReport verify_czd(const CZDecomposition& dec, const GridFunction& f)
{
    const Grid& grid = f.grid();
    const double lambda = dec.lambda;
    const double dfac = grid.dim == 1 ? 2.0 : 4.0;   // 2^d
    const double slack = 1.0 + 1e-12;
    CubeView view{&grid, &f};
    CZDReport rep;

    std::vector<bool> in_omega(grid.point_count(), false);
    for (std::size_t i : dec.omega)
        in_omega[i] = true;

    { // (i) |f| <= lambda off the selected cubes
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!in_omega[i])
                worst = std::max(worst, std::fabs(f[i]));
        rep.checks.push_back({"off_region_bound", worst <= lambda * slack, true,
                              lambda - worst, ""});
    }

    { // (ii) lambda < avg_Q |f| <= 2^d lambda on every selected cube
        bool ok = true;
        double worst_lo = std::numeric_limits<double>::infinity();
        double worst_hi = -std::numeric_limits<double>::infinity();
        for (const auto& q : dec.cubes) {
            const double avg = view.abs_average(q);
            worst_lo = std::min(worst_lo, avg - lambda);
            worst_hi = std::max(worst_hi, avg);
            if (!(avg > lambda) || avg > dfac * lambda * slack)
                ok = false;
        }
        const double margin = dec.cubes.empty()
                                  ? 0.0
                                  : std::min(worst_lo, dfac * lambda - worst_hi);
        rep.checks.push_back({"selected_average_window", ok, true, margin, ""});
    }

    { // maximality: the parent of every selected cube has average <= lambda
        bool ok = true;
        const int rootgen = log2_int(grid.n);
        for (const auto& q : dec.cubes) {
            if (q.generation >= rootgen)
                continue;
            DyadicCube parent;
            parent.generation = q.generation + 1;
            const int pside = 1 << parent.generation;
            parent.corner = {(q.corner[0] / pside) * pside, (q.corner[1] / pside) * pside};
            if (view.abs_average(parent) > lambda * slack)
                ok = false;
        }
        rep.checks.push_back({"parent_average_bound", ok, true, 0.0, ""});
    }

    { // selected cubes are pairwise disjoint
        std::vector<std::size_t> all;
        for (const auto& q : dec.cubes)
            view.for_each_sample(q, [&](std::size_t i) { all.push_back(i); });
        std::sort(all.begin(), all.end());
        const bool ok = std::adjacent_find(all.begin(), all.end()) == all.end();
        rep.checks.push_back({"cube_disjointness", ok, true, 0.0, ""});
    }

    { // (iii) selected region inside {M f > lambda}, dyadic maximal operator
        CubeFamily dy{CubeConvention::Dyadic};
        const GridFunction m = hl_maximal(f, dy);
        bool ok = true;
        for (std::size_t i : dec.omega)
            if (!(m[i] > lambda))
                ok = false;
        rep.checks.push_back({"region_in_superlevel", ok, true, 0.0, ""});

        // reported direction: {M f > 4^d lambda} within the dilated region
        std::vector<bool> in_tilde(grid.point_count(), false);
        for (std::size_t i : dec.omega_tilde)
            in_tilde[i] = true;
        const double threshold = dfac * dfac * lambda; // 4^d
        std::size_t violations = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > threshold && !in_tilde[i])
                ++violations;
        rep.checks.push_back({"superlevel_in_dilates", violations == 0, false,
                              -static_cast<double>(violations),
                              "dyadic-restricted maximal function"});
    }

    { // (iv) f = good + sum of bad parts
        GridFunction recon = dec.good;
        auto& rv = recon.mutable_values();
        for (const auto& part : dec.bad) {
            std::size_t k = 0;
            view.for_each_sample(part.cube, [&](std::size_t i) {
                rv[i] += part.values[k++];
            });
        }
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::fabs(rv[i] - f[i]));
        rep.reconstruction_error = err;
        rep.checks.push_back({"reconstruction", err <= 1e-12, true, 1e-12 - err, ""});
    }

    { // (v) good part bounded by 2^d lambda
        const double sup = sup_abs(dec.good);
        rep.checks.push_back({"good_part_bound", sup <= dfac * lambda * slack, true,
                              dfac * lambda - sup, ""});
    }

    { // (vi) bad parts have mean zero and average size at most 2^(d+1) lambda
        bool ok = true;
        double worst_mean = 0.0;
        double worst_avg_margin = std::numeric_limits<double>::infinity();
        for (const auto& part : dec.bad) {
            double total = 0.0, abs_total = 0.0, scale = 0.0;
            for (double v : part.values) {
                total += v;
                abs_total += std::fabs(v);
            }
            view.for_each_sample(part.cube, [&](std::size_t i) { scale += std::fabs(f[i]); });
            const double cells = static_cast<double>(part.values.size());
            const double mean_resid = std::fabs(total) / std::max(1.0, scale);
            worst_mean = std::max(worst_mean, mean_resid);
            if (mean_resid > 1e-12)
                ok = false;
            const double avg_abs = abs_total / cells;
            worst_avg_margin = std::min(worst_avg_margin, 2.0 * dfac * lambda - avg_abs);
            if (avg_abs > 2.0 * dfac * lambda * slack)
                ok = false;
        }
        rep.checks.push_back({"bad_part_bounds", ok, true,
                              dec.bad.empty() ? 0.0 : worst_avg_margin, ""});
    }

    return rep;
}

double OffsetSequence::at(int offset) const
{
    const int idx = offset - min_offset;
    if (idx < 0 || idx >= static_cast<int>(values.size()))
        return 0.0;
    return values[static_cast<std::size_t>(idx)];
}

double OffsetSequence::sum() const
{
    double acc = 0.0;
    for (double v : values)
        acc += v;
    return acc;
}

AOLReport aol_check(const std::vector<std::vector<double>>& h_norms,
                    const std::vector<double>& delta, const OffsetSequence& omega,
                    double r, const std::vector<double>& group_norms)
{
    if (!(r > 1.0) || !std::isfinite(r))
        throw ParamError("aol_check needs r > 1");
    const std::size_t K = h_norms.size();
    if (K == 0 || group_norms.size() != K)
        throw ParamError("group norm count must match the row count");
    const std::size_t J = delta.size();
    for (const auto& row : h_norms)
        if (row.size() != J)
            throw ParamError("every row needs one entry per delta_j");
    for (double d : delta)
        if (!(d >= 0.0))
            throw ParamError("delta entries must be nonnegative");
    for (double o : omega.values)
        if (!(o >= 0.0))
            throw ParamError("omega entries must be nonnegative");

    AOLReport rep;
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < K; ++k) {
        double rowsum = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            const double bound = omega.at(static_cast<int>(k) - static_cast<int>(j)) *
                                 std::pow(delta[j], 1.0 / r);
            const double excess = h_norms[k][j] - bound;
            worst = std::max(worst, excess);
            if (excess > 1e-12 * (1.0 + bound))
                ok = false;
            rowsum += h_norms[k][j];
        }
        // supplied group norms must be consistent with the triangle inequality
        if (group_norms[k] > rowsum * (1.0 + 1e-12))
            ok = false;
    }
    rep.hypothesis_ok = ok;
    rep.worst_hypothesis_violation = worst;
    if (!ok)
        return rep;

    double lhs = 0.0;
    for (double gn : group_norms)
        lhs += std::pow(gn, r);
    double dsum = 0.0;
    for (double d : delta)
        dsum += d;
    const double rhs = std::pow(omega.sum(), r) * dsum;
    rep.conclusion_checked = true;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.conclusion_ok = lhs <= rhs * (1.0 + 1e-10);
    return rep;
}

} // namespace varops
