#pragma once

#include "gaussmatch/ot/measure.hpp"

namespace gaussmatch::ot {

struct SinkhornSettings {
  double epsilon_min = 1e-3;       // final regularization
  double epsilon_start = 0.0;      // 0: mean cost-matrix entry
  double scaling_factor = 0.7;     // epsilon multiplier per stage
  double tolerance = 1e-6;         // L1 marginal violation at the final epsilon
  double stage_tolerance = 1e-3;   // looser target for the intermediate stages
  int max_iterations_per_stage = 10000;
  double absorb_threshold = 1e30;  // scaling magnitude that triggers absorption
  bool debiased = false;           // divergence form S = OT(X,Y) - (OT(X,X) + OT(Y,Y)) / 2
};

/// Entropic OT by log-stabilized Sinkhorn scaling with epsilon annealing.
/// cost = <P, C> for the final plan; with `debiased` the divergence form of
/// the entropic objective <P,C> + eps KL(P | a x b) is reported instead.
/// Failure to reach the tolerance is reported in diagnostics, not thrown.
TransportResult sinkhorn(const DiscreteMeasure& X, const DiscreteMeasure& Y, double p,
                         const SinkhornSettings& settings = {});

/// Core iteration on an explicit cost matrix. `entropic_objective`, when
/// non-null, receives <P,C> + eps KL(P | a x b) at the final epsilon.
TransportResult sinkhorn(const CostMatrix& cost, const std::vector<double>& a, const std::vector<double>& b,
                         const SinkhornSettings& settings = {}, double* entropic_objective = nullptr);

}  // namespace gaussmatch::ot
