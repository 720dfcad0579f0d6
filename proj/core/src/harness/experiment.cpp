#include "gaussmatch/harness/experiment.hpp"

#include <chrono>
#include <cmath>

#include "gaussmatch/bounds/trace.hpp"
#include "gaussmatch/harness/worker_pool.hpp"
#include "gaussmatch/ot/proxy.hpp"
#include "gaussmatch/ot/sinkhorn.hpp"
#include "gaussmatch/ot/solvers.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/certificate.hpp"

namespace gaussmatch::harness {

std::vector<Aggregate> ResultTable::aggregate() const {
  std::vector<Aggregate> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].n == rows[i].n) sum += rows[j++].cost;
    Aggregate a;
    a.n = rows[i].n;
    a.count = static_cast<int>(j - i);
    a.mean = sum / a.count;
    if (a.count > 1) {
      double ss = 0.0;
      for (std::size_t k = i; k < j; ++k) ss += (rows[k].cost - a.mean) * (rows[k].cost - a.mean);
      a.se = std::sqrt(ss / (a.count - 1) / a.count);
    }
    out.push_back(a);
    i = j;
  }
  return out;
}

SolverChoice resolve_solver(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.solver != SolverChoice::auto_select) return cfg.solver;
  if (cfg.d == 1) return SolverChoice::sorted_1d;
  if (n <= 1024) return SolverChoice::exact;
  return SolverChoice::sinkhorn;
}

namespace {

double matching_cost(const ExperimentConfig& cfg, std::size_t n, int rep, std::vector<std::string>& warnings) {
  Stream sx = Stream::derive(cfg.seed, n, rep, StreamPurpose::sample_x);
  Stream sy = Stream::derive(cfg.seed, n, rep, StreamPurpose::sample_y);
  const auto d = static_cast<std::size_t>(cfg.d);
  const EmpiricalSample X = sample_gaussian(n, d, sx);
  const EmpiricalSample Y = sample_gaussian(n, d, sy);
  switch (resolve_solver(cfg, n)) {
    case SolverChoice::sorted_1d:
      return ot::sorted_1d_wp(X.points, Y.points, cfg.p);
    case SolverChoice::exact:
      return ot::solve_assignment(ot::cost_matrix(X.points, Y.points, cfg.p)).cost;
    case SolverChoice::sinkhorn: {
      ot::SinkhornSettings s;
      s.epsilon_min = cfg.epsilon_min;
      const auto r = ot::sinkhorn(ot::DiscreteMeasure::uniform(X.points), ot::DiscreteMeasure::uniform(Y.points), cfg.p, s);
      if (!r.diagnostics.converged)
        warnings.push_back("n=" + std::to_string(n) + " replicate " + std::to_string(rep) +
                           ": sinkhorn stopped at marginal violation " + std::to_string(r.diagnostics.marginal_violation));
      return r.cost;
    }
    case SolverChoice::auto_select:
      break;
  }
  throw InvalidArgument("matching_cost: unresolved solver");
}

}  // namespace

double replicate_cost(const ExperimentConfig& cfg, std::size_t n, int rep, std::vector<std::string>& warnings) {
  switch (cfg.estimator) {
    case Estimator::matching:
      return matching_cost(cfg, n, rep, warnings);
    case Estimator::proxy: {
      Stream sx = Stream::derive(cfg.seed, n, rep, StreamPurpose::sample_x);
      Stream ref = Stream::derive(cfg.seed, n, rep, StreamPurpose::reference);
      const EmpiricalSample X = sample_gaussian(n, static_cast<std::size_t>(cfg.d), sx);
      return ot::gaussian_proxy_wp(X, cfg.p, cfg.proxy_multiplier, ref).cost;
    }
    case Estimator::certificate: {
      Stream sx = Stream::derive(cfg.seed, n, rep, StreamPurpose::sample_x);
      Stream aux = Stream::derive(cfg.seed, n, rep, StreamPurpose::localize);
      const EmpiricalSample X = sample_gaussian(n, static_cast<std::size_t>(cfg.d), sx);
      smoothing::CertificateOptions opt;
      opt.variant = cfg.variant;
      opt.c = cfg.c;
      opt.min_n = cfg.min_n;
      opt.y_samples = cfg.y_samples;
      return smoothing::upper_bound_certificate(X, cfg.p, opt, aux).total;
    }
    case Estimator::lower_bound:
      return bounds::lower_bound_main_term(bounds::LowerBoundConfig::defaults(static_cast<double>(n), cfg.d));
  }
  throw InvalidArgument("replicate_cost: unknown estimator");
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Cell {
    std::size_t n;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t n : cfg.n_grid)
    for (int r = 0; r < cfg.replicates_for(n); ++r) cells.push_back({n, r});

  ResultTable table;
  table.rows.resize(cells.size());
  std::vector<std::vector<std::string>> cell_warnings(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    ResultRow& row = table.rows[i];
    row.n = cells[i].n;
    row.replicate = cells[i].rep;
    row.seed = Stream::derive(cfg.seed, row.n, row.replicate, StreamPurpose::sample_x).key();
    row.estimator = to_string(cfg.estimator);
    row.cost = replicate_cost(cfg, row.n, row.replicate, cell_warnings[i]);
    if (cfg.timing)
      row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });

  for (std::size_t n : cfg.n_grid)
    if (cfg.estimator == Estimator::matching && cfg.solver == SolverChoice::auto_select &&
        resolve_solver(cfg, n) == SolverChoice::sinkhorn)
      table.warnings.push_back("n=" + std::to_string(n) + ": auto solver fell back to sinkhorn (epsilon_min " +
                               std::to_string(cfg.epsilon_min) + ")");
  for (auto& w : cell_warnings) table.warnings.insert(table.warnings.end(), w.begin(), w.end());
  return table;
}

}  // namespace gaussmatch::harness
