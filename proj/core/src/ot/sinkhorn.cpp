#include "gaussmatch/ot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace gaussmatch::ot {
namespace {

// Entries with (f_i + g_j - C_ij)/eps below this are dropped once the kernel
// is sparse enough; e^{-100} stays negligible while u, v are kept within
// [1e-10, 1e10] by absorption.
constexpr double kTruncateExponent = -100.0;
constexpr double kSparseFraction = 0.25;
constexpr double kSparseAbsorb = 1e10;

struct Scaling {
  std::size_t n, m;
  const CostMatrix& C;
  std::vector<double> f, g, u, v, Kv, KTu;
  double eps = 1.0;
  bool sparse = false;
  std::vector<double> K;               // dense n x m, or CSR values
  std::vector<std::size_t> row_start;  // CSR
  std::vector<std::uint32_t> col;

  Scaling(const CostMatrix& cost) : n(cost.rows()), m(cost.cols()), C(cost) {
    f.assign(n, 0.0);
    g.assign(m, 0.0);
    u.assign(n, 1.0);
    v.assign(m, 1.0);
    Kv.resize(n);
    KTu.resize(m);
  }

  void rebuild_kernel() {
    const double inv = 1.0 / eps;
    const double* c = C.values().data();
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* crow = c + i * m;
      for (std::size_t j = 0; j < m; ++j)
        if ((f[i] + g[j] - crow[j]) * inv > kTruncateExponent) ++kept;
    }
    sparse = static_cast<double>(kept) < kSparseFraction * static_cast<double>(n * m) && m <= UINT32_MAX;
    K.clear();
    col.clear();
    row_start.assign(n + 1, 0);
    if (sparse) {
      K.reserve(kept);
      col.reserve(kept);
    } else {
      K.resize(n * m);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double* crow = c + i * m;
      const double fi = f[i];
      if (sparse) {
        for (std::size_t j = 0; j < m; ++j) {
          const double e = (fi + g[j] - crow[j]) * inv;
          if (e > kTruncateExponent) {
            K.push_back(std::exp(e));
            col.push_back(static_cast<std::uint32_t>(j));
          }
        }
        row_start[i + 1] = K.size();
      } else {
        double* row = K.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) row[j] = std::exp((fi + g[j] - crow[j]) * inv);
      }
    }
  }

  void absorb() {
    for (std::size_t i = 0; i < n; ++i) f[i] += eps * std::log(u[i]);
    for (std::size_t j = 0; j < m; ++j) g[j] += eps * std::log(v[j]);
    std::fill(u.begin(), u.end(), 1.0);
    std::fill(v.begin(), v.end(), 1.0);
    rebuild_kernel();
  }

  void apply_K() {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      if (sparse) {
        for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) s += K[e] * v[col[e]];
      } else {
        const double* row = K.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      }
      Kv[i] = s;
    }
  }

  void apply_KT() {
    std::fill(KTu.begin(), KTu.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = u[i];
      if (sparse) {
        for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) KTu[col[e]] += ui * K[e];
      } else {
        const double* row = K.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) KTu[j] += ui * row[j];
      }
    }
  }

  /// Calls fn(i, j, K_ij) for every stored entry.
  template <class F>
  void for_each_entry(F&& fn) const {
    for (std::size_t i = 0; i < n; ++i) {
      if (sparse) {
        for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) fn(i, static_cast<std::size_t>(col[e]), K[e]);
      } else {
        const double* row = K.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) fn(i, j, row[j]);
      }
    }
  }

  bool finite_scalings() const {
    for (double x : u)
      if (!std::isfinite(x) || x <= 0.0) return false;
    for (double x : v)
      if (!std::isfinite(x) || x <= 0.0) return false;
    return true;
  }

  bool needs_absorb(double threshold) const {
    if (sparse) threshold = std::min(threshold, kSparseAbsorb);
    for (double x : u)
      if (x > threshold || x < 1.0 / threshold) return true;
    for (double x : v)
      if (x > threshold || x < 1.0 / threshold) return true;
    return false;
  }
};

}  // namespace

TransportResult sinkhorn(const CostMatrix& cost, const std::vector<double>& a, const std::vector<double>& b,
                         const SinkhornSettings& s, double* entropic_objective) {
  require(a.size() == cost.rows() && b.size() == cost.cols(), "sinkhorn: weight/shape mismatch");
  require(s.epsilon_min > 0.0, "sinkhorn: epsilon must be > 0");
  require(s.scaling_factor > 0.0 && s.scaling_factor < 1.0, "sinkhorn: scaling factor must lie in (0, 1)");
  check_dense_size(cost.rows(), cost.cols(), "sinkhorn");

  Scaling st(cost);
  const double mean_cost =
      std::accumulate(cost.values().begin(), cost.values().end(), 0.0) / static_cast<double>(cost.values().size());
  double eps = s.epsilon_start > 0.0 ? s.epsilon_start : std::max(mean_cost, s.epsilon_min);
  eps = std::max(eps, s.epsilon_min);

  TransportResult r;
  r.solver = SolverTag::sinkhorn;
  long total_iterations = 0;
  bool converged = false;
  double violation = 0.0;
  for (;;) {
    st.eps = eps;
    st.rebuild_kernel();
    converged = false;
    const bool last = eps <= s.epsilon_min;
    // intermediate stages only warm-start the next one
    const double stage_tol = last ? s.tolerance : std::max(s.tolerance, s.stage_tolerance);
    for (int it = 0; it < s.max_iterations_per_stage; ++it) {
      st.apply_K();
      for (std::size_t i = 0; i < st.n; ++i) st.u[i] = a[i] / st.Kv[i];
      st.apply_KT();
      for (std::size_t j = 0; j < st.m; ++j) st.v[j] = b[j] / st.KTu[j];
      ++total_iterations;
      if (!st.finite_scalings()) {
        r.diagnostics.note = "scaling underflow at epsilon " + std::to_string(eps);
        break;
      }
      if (it % 5 == 4 || it + 1 == s.max_iterations_per_stage) {
        st.apply_K();
        violation = 0.0;
        for (std::size_t i = 0; i < st.n; ++i) violation += std::abs(st.u[i] * st.Kv[i] - a[i]);
        if (violation <= stage_tol) {
          converged = true;
          break;
        }
      }
      if (st.needs_absorb(s.absorb_threshold)) st.absorb();
    }
    if (!st.finite_scalings()) break;
    st.absorb();
    if (last) break;
    eps = std::max(eps * s.scaling_factor, s.epsilon_min);
  }

  // Plan P_ij = exp((f_i + g_j - C_ij) / eps), held in K after the last absorption.
  double transport = 0.0, kl = 0.0, stored_ref = 0.0;
  std::vector<double> row_mass(st.n, 0.0), col_mass(st.m, 0.0);
  st.for_each_entry([&](std::size_t i, std::size_t j, double pij) {
    row_mass[i] += pij;
    col_mass[j] += pij;
    transport += pij * cost(i, j);
    const double ref = a[i] * b[j];
    stored_ref += ref;
    if (pij > 0.0) kl += pij * std::log(pij / ref) - pij + ref;
    else kl += ref;
    if (pij > 1e-15) r.coupling.push_back({i, j, pij});
  });
  // dropped entries of a truncated kernel count as zero mass
  const double total_ref = std::accumulate(a.begin(), a.end(), 0.0) * std::accumulate(b.begin(), b.end(), 0.0);
  kl += std::max(0.0, total_ref - stored_ref);
  double marginal = 0.0;
  for (std::size_t i = 0; i < st.n; ++i) marginal += std::abs(row_mass[i] - a[i]);
  for (std::size_t j = 0; j < st.m; ++j) marginal += std::abs(col_mass[j] - b[j]);

  r.cost = transport;
  r.diagnostics.iterations = total_iterations;
  r.diagnostics.epsilon = st.eps;
  r.diagnostics.marginal_violation = marginal;
  r.diagnostics.converged = converged && std::isfinite(transport);
  if (entropic_objective) *entropic_objective = transport + st.eps * kl;
  return r;
}

TransportResult sinkhorn(const DiscreteMeasure& X, const DiscreteMeasure& Y, double p, const SinkhornSettings& s) {
  X.validate();
  Y.validate();
  if (X.dim() != Y.dim()) throw DimensionMismatch("sinkhorn: dimension mismatch");
  check_dense_size(X.size(), Y.size(), "sinkhorn");
  double ot_xy = 0.0;
  TransportResult r = sinkhorn(cost_matrix(X, Y, p), X.weights, Y.weights, s, &ot_xy);
  r.p = p;
  if (s.debiased) {
    double ot_xx = 0.0, ot_yy = 0.0;
    const TransportResult rx = sinkhorn(cost_matrix(X, X, p), X.weights, X.weights, s, &ot_xx);
    const TransportResult ry = sinkhorn(cost_matrix(Y, Y, p), Y.weights, Y.weights, s, &ot_yy);
    r.cost = ot_xy - 0.5 * (ot_xx + ot_yy);
    r.diagnostics.converged = r.diagnostics.converged && rx.diagnostics.converged && ry.diagnostics.converged;
    r.diagnostics.note += (r.diagnostics.note.empty() ? "" : "; ") + std::string("debiased divergence cost");
  }
  return r;
}

}  // namespace gaussmatch::ot
