#pragma once

#include "varops/grid.hpp"

namespace varops {

// Admissible cubes are sample-aligned windows of 2^g points per axis,
// g = 0 .. log2(n), entirely inside the box. Uncentered: every position
// containing the evaluation point. Dyadic: only the lattice-aligned position
// (corner a multiple of the side), one cube per generation.
enum class CubeConvention { Uncentered, Dyadic };

struct CubeFamily {
    CubeConvention convention = CubeConvention::Uncentered;
};

// Hardy-Littlewood maximal function over the cube family: sup of the discrete
// average of |f| over admissible cubes containing the point.
GridFunction hl_maximal(const GridFunction& f, const CubeFamily& fam);

// M_r f = (M |f|^r)^(1/r), r > 1.
GridFunction mr_maximal(const GridFunction& f, double r, const CubeFamily& fam);

// Sharp function: sup over admissible cubes containing the point of the mean
// absolute deviation of f from its cube average.
GridFunction sharp_maximal(const GridFunction& f, const CubeFamily& fam);

// sup of the sharp function.
double bmo_seminorm(const GridFunction& f, const CubeFamily& fam);

} // namespace varops
