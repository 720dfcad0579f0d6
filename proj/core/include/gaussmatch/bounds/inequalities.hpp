#pragma once

#include "gaussmatch/hermite.hpp"

namespace gaussmatch::bounds {

/// (4/c^2)(1 - sqrt(1-c))^2 for 0 < c <= 1.
double contraction_coefficient(double c);

/// theta(s) = ((1 - sqrt(1-c))/c)(2s - (1 - sqrt(1-c)) s^2), s in [0, 1].
double contraction_profile(double s, double c);

struct DualLowerOptions {
  double grid_half_width = 8.0;  // sup of h checked on [-w, w]
  int grid_points = 4001;
};

/// 2 int g (-L)^{-1} h dmu - ((e^c - 1)/c) int h (-L)^{-1} h dmu in d = 1,
/// by coefficient arithmetic. h must be mean-zero with max h <= c on the grid.
double dual_lower_bound(const HermiteExpansion& g, const HermiteExpansion& h, double c, const DualLowerOptions& opts = {});

}  // namespace gaussmatch::bounds
