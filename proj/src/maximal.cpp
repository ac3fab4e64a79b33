#include "varops/maximal.hpp"

#include "varops/errors.hpp"
#include "varops/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace varops {

namespace {

// sums over windows of length w: out[p] = sum v[p .. p+w)
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

// out[i] = max of pos[p] over the window positions containing i:
// p in [i-w+1, i] clipped to [0, P-1]
void sliding_max(const double* pos, int P, int w, int n, double* out)
{
    std::vector<int> dq(static_cast<std::size_t>(P));
    int head = 0, tail = 0; // [head, tail)
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int hi = std::min(i, P - 1);
        for (; next <= hi; ++next) {
            while (tail > head && pos[dq[tail - 1]] <= pos[next])
                --tail;
            dq[tail++] = next;
        }
        const int lo = i - w + 1;
        while (head < tail && dq[head] < lo)
            ++head;
        out[i] = pos[dq[head]];
    }
}

int log2_int(int n)
{
    int g = 0;
    while ((1 << (g + 1)) <= n)
        ++g;
    return g;
}

// Applies, for every admissible generation, a per-position statistic and
// folds it into out via max over the cubes containing each point.
template <typename PositionStat>
void fold_cubes(const Grid& grid, const CubeFamily& fam, GridFunction& out,
                PositionStat&& stat)
{
    const int n = grid.n;
    const int G = log2_int(n);
    auto& ov = out.mutable_values();
    std::fill(ov.begin(), ov.end(), 0.0);
    if (grid.dim == 1) {
        std::vector<double> pos(static_cast<std::size_t>(n));
        std::vector<double> cand(static_cast<std::size_t>(n));
        for (int g = 0; g <= G; ++g) {
            const int w = 1 << g;
            const int P = n - w + 1;
            for (int p = 0; p < P; ++p)
                pos[static_cast<std::size_t>(p)] = stat(g, p, 0);
            if (fam.convention == CubeConvention::Uncentered) {
                sliding_max(pos.data(), P, w, n, cand.data());
                for (int i = 0; i < n; ++i)
                    ov[static_cast<std::size_t>(i)] =
                        std::max(ov[static_cast<std::size_t>(i)], cand[static_cast<std::size_t>(i)]);
            } else {
                for (int i = 0; i < n; ++i) {
                    const int p = (i / w) * w;
                    ov[static_cast<std::size_t>(i)] =
                        std::max(ov[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(p)]);
                }
            }
        }
        return;
    }
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> pos(un * un);
    std::vector<double> rowmax(un * un);
    std::vector<double> col(un), colout(un);
    for (int g = 0; g <= G; ++g) {
        const int w = 1 << g;
        const int P = n - w + 1;
        detail::parallel_for(static_cast<std::size_t>(P), [&](std::size_t b, std::size_t e) {
            for (std::size_t p0 = b; p0 < e; ++p0)
                for (int p1 = 0; p1 < P; ++p1)
                    pos[p0 * un + static_cast<std::size_t>(p1)] =
                        stat(g, static_cast<int>(p0), p1);
        });
        if (fam.convention == CubeConvention::Uncentered) {
            // slide along axis 1 for each position row, then along axis 0
            for (int p0 = 0; p0 < P; ++p0)
                sliding_max(pos.data() + static_cast<std::size_t>(p0) * un, P, w, n,
                            rowmax.data() + static_cast<std::size_t>(p0) * un);
            for (int i1 = 0; i1 < n; ++i1) {
                for (int p0 = 0; p0 < P; ++p0)
                    col[static_cast<std::size_t>(p0)] =
                        rowmax[static_cast<std::size_t>(p0) * un + static_cast<std::size_t>(i1)];
                sliding_max(col.data(), P, w, n, colout.data());
                for (int i0 = 0; i0 < n; ++i0) {
                    auto& slot = ov[static_cast<std::size_t>(i0) * un + static_cast<std::size_t>(i1)];
                    slot = std::max(slot, colout[static_cast<std::size_t>(i0)]);
                }
            }
        } else {
            for (int i0 = 0; i0 < n; ++i0)
                for (int i1 = 0; i1 < n; ++i1) {
                    const int p0 = (i0 / w) * w;
                    const int p1 = (i1 / w) * w;
                    auto& slot = ov[static_cast<std::size_t>(i0) * un + static_cast<std::size_t>(i1)];
                    slot = std::max(slot, pos[static_cast<std::size_t>(p0) * un + static_cast<std::size_t>(p1)]);
                }
        }
    }
}

} // namespace

GridFunction hl_maximal(const GridFunction& f, const CubeFamily& fam)
{
    const Grid& grid = f.grid();
    const int n = grid.n;
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> absf(f.values().begin(), f.values().end());
    for (double& v : absf)
        v = std::fabs(v);

    GridFunction out = GridFunction::zeros(grid);
    if (grid.dim == 1) {
        // per-generation window sums, reused across positions
        const int G = log2_int(n);
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(G) + 1);
        for (int g = 0; g <= G; ++g) {
            const int w = 1 << g;
            sums[static_cast<std::size_t>(g)].resize(static_cast<std::size_t>(n - w + 1));
            window_sums(absf.data(), n, w, sums[static_cast<std::size_t>(g)].data());
        }
        fold_cubes(grid, fam, out, [&](int g, int p0, int) {
            const int w = 1 << g;
            return sums[static_cast<std::size_t>(g)][static_cast<std::size_t>(p0)] /
                   static_cast<double>(w);
        });
        return out;
    }
    // 2-D window sums from per-row sums
    const int G = log2_int(n);
    std::vector<std::vector<double>> sums2(static_cast<std::size_t>(G) + 1);
    for (int g = 0; g <= G; ++g) {
        const int w = 1 << g;
        const int P = n - w + 1;
        std::vector<double> rowsums(un * static_cast<std::size_t>(P));
        for (int i0 = 0; i0 < n; ++i0)
            window_sums(absf.data() + static_cast<std::size_t>(i0) * un, n, w,
                        rowsums.data() + static_cast<std::size_t>(i0) * static_cast<std::size_t>(P));
        auto& S = sums2[static_cast<std::size_t>(g)];
        S.assign(static_cast<std::size_t>(P) * static_cast<std::size_t>(P), 0.0);
        for (int p1 = 0; p1 < P; ++p1) {
            double acc = 0.0;
            for (int i0 = 0; i0 < w; ++i0)
                acc += rowsums[static_cast<std::size_t>(i0) * static_cast<std::size_t>(P) +
                               static_cast<std::size_t>(p1)];
            S[static_cast<std::size_t>(p1)] = acc; // p0 = 0
            for (int p0 = 1; p0 < P; ++p0) {
                acc += rowsums[static_cast<std::size_t>(p0 + w - 1) * static_cast<std::size_t>(P) +
                               static_cast<std::size_t>(p1)] -
                       rowsums[static_cast<std::size_t>(p0 - 1) * static_cast<std::size_t>(P) +
                               static_cast<std::size_t>(p1)];
                S[static_cast<std::size_t>(p0) * static_cast<std::size_t>(P) +
                  static_cast<std::size_t>(p1)] = acc;
            }
        }
    }
    fold_cubes(grid, fam, out, [&](int g, int p0, int p1) {
        const int w = 1 << g;
        const int P = n - w + 1;
        return sums2[static_cast<std::size_t>(g)][static_cast<std::size_t>(p0) * static_cast<std::size_t>(P) +
                                                  static_cast<std::size_t>(p1)] /
               static_cast<double>(w * w);
    });
    return out;
}

GridFunction mr_maximal(const GridFunction& f, double r, const CubeFamily& fam)
{
    if (!(r > 1.0) || !std::isfinite(r))
        throw ParamError("mr_maximal needs r > 1");
    std::vector<double> powed(f.values().begin(), f.values().end());
    for (double& v : powed)
        v = std::pow(std::fabs(v), r);
    GridFunction m = hl_maximal(GridFunction(f.grid(), std::move(powed)), fam);
    auto& mv = m.mutable_values();
    for (double& v : mv)
        v = std::pow(v, 1.0 / r);
    return m;
}

GridFunction sharp_maximal(const GridFunction& f, const CubeFamily& fam)
{
    const Grid& grid = f.grid();
    const int n = grid.n;
    const std::size_t un = static_cast<std::size_t>(n);
    const auto fv = f.values();
    GridFunction out = GridFunction::zeros(grid);
    if (grid.dim == 1) {
        fold_cubes(grid, fam, out, [&](int g, int p0, int) {
            const int w = 1 << g;
            double mean = 0.0;
            for (int i = p0; i < p0 + w; ++i)
                mean += fv[static_cast<std::size_t>(i)];
            mean /= static_cast<double>(w);
            double dev = 0.0;
            for (int i = p0; i < p0 + w; ++i)
                dev += std::fabs(fv[static_cast<std::size_t>(i)] - mean);
            return dev / static_cast<double>(w);
        });
        return out;
    }
    fold_cubes(grid, fam, out, [&](int g, int p0, int p1) {
        const int w = 1 << g;
        double mean = 0.0;
        for (int i0 = p0; i0 < p0 + w; ++i0)
            for (int i1 = p1; i1 < p1 + w; ++i1)
                mean += fv[static_cast<std::size_t>(i0) * un + static_cast<std::size_t>(i1)];
        mean /= static_cast<double>(w * w);
        double dev = 0.0;
        for (int i0 = p0; i0 < p0 + w; ++i0)
            for (int i1 = p1; i1 < p1 + w; ++i1)
                dev += std::fabs(fv[static_cast<std::size_t>(i0) * un + static_cast<std::size_t>(i1)] - mean);
        return dev / static_cast<double>(w * w);
    });
    return out;
}

double bmo_seminorm(const GridFunction& f, const CubeFamily& fam)
{
    return sup_abs(sharp_maximal(f, fam));
}

} // namespace varops
