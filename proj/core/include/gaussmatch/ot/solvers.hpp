#pragma once

#include <functional>
#include <vector>

#include "gaussmatch/ot/measure.hpp"

namespace gaussmatch::ot {

/// Minimum-cost perfect matching on a square matrix by shortest augmenting
/// paths with dual potentials, O(n^3). Cost is the matching mean (weights 1/n).
TransportResult solve_assignment(const CostMatrix& cost);

/// Exact OT between arbitrary discrete measures by the network simplex method
/// on the bipartite transportation graph. Weights are scaled to integers
/// (1e12 per unit of mass); the reported cost is in the original units.
TransportResult solve_general_ot(const DiscreteMeasure& X, const DiscreteMeasure& Y, double p);
TransportResult solve_general_ot(const CostMatrix& cost, const std::vector<double>& a, const std::vector<double>& b);

/// Mean p-cost of the monotone matching. Inputs need not be sorted.
double sorted_1d_wp(std::vector<double> x, std::vector<double> y, double p);
double sorted_1d_wp(const PointCloud& X, const PointCloud& Y, double p);

/// Minimum over all n! permutations; n <= 8.
double brute_force_wp(const PointCloud& X, const PointCloud& Y, double p);
double brute_force_wp(const CostMatrix& cost);

/// Signature shared by assignment-style solvers, so checks can run against a
/// substitute implementation.
using AssignmentSolver = std::function<TransportResult(const CostMatrix&)>;

}  // namespace gaussmatch::ot
