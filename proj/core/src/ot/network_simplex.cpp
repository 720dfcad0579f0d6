#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gaussmatch/ot/solvers.hpp"

namespace gaussmatch::ot {
namespace {

constexpr double kMassScale = 1e12;

// Supplies as integers summing exactly to kMassScale; the rounding residue
// goes to the largest entry.
std::vector<std::int64_t> integerize(const std::vector<double>& w) {
  std::vector<std::int64_t> out(w.size());
  std::int64_t total = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = std::llround(w[i] * kMassScale);
    total += out[i];
    if (out[i] > out[largest]) largest = i;
  }
  out[largest] += static_cast<std::int64_t>(kMassScale) - total;
  require(out[largest] >= 0, "solve_general_ot: weights cannot be integerized");
  return out;
}

// Spanning-tree network simplex on the complete bipartite graph n -> m plus
// one artificial arc per node to a root. Real arc e = i * m + j, so arc costs
// index the row-major cost matrix directly. Reduced cost: c + pi[src] - pi[tgt].
class TransportSimplex {
 public:
  TransportSimplex(const CostMatrix& cost, std::vector<std::int64_t> supply, std::vector<std::int64_t> demand)
      : C_(cost), n_(cost.rows()), m_(cost.cols()), supply_(std::move(supply)), demand_(std::move(demand)) {}

  long run() {
    init();
    long pivots = 0;
    std::int64_t e;
    while ((e = find_entering()) >= 0) {
      pivot(e);
      ++pivots;
    }
    return pivots;
  }

  std::vector<PlanEntry> plan() const {
    std::vector<PlanEntry> out;
    for (std::size_t v = 0; v < nodes_; ++v) {
      const std::int64_t e = pred_[v];
      if (e < 0 || e >= real_arcs_ || flow_[v] == 0) continue;
      out.push_back({static_cast<std::size_t>(e) / m_, static_cast<std::size_t>(e) % m_,
                     static_cast<double>(flow_[v]) / kMassScale});
    }
    std::sort(out.begin(), out.end(), [](const PlanEntry& a, const PlanEntry& b) {
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return out;
  }

  bool artificial_flow_free() const {
    for (std::size_t v = 0; v < nodes_; ++v)
      if (pred_[v] >= real_arcs_ && flow_[v] != 0) return false;
    return true;
  }

  double dual_objective() const {
    // sum_j b_j pi_j - sum_i a_i pi_i, in mass units
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s -= static_cast<double>(supply_[i]) * pi_[i];
    for (std::size_t j = 0; j < m_; ++j) s += static_cast<double>(demand_[j]) * pi_[n_ + j];
    return s / kMassScale;
  }

 private:
  static constexpr int kUp = 1;     // tree arc points child -> parent
  static constexpr int kDown = -1;  // tree arc points parent -> child

  std::size_t src(std::int64_t e) const {
    if (e < real_arcs_) return static_cast<std::size_t>(e) / m_;
    const auto v = static_cast<std::size_t>(e - real_arcs_);
    return v < n_ ? v : root_;
  }
  std::size_t tgt(std::int64_t e) const {
    if (e < real_arcs_) return n_ + static_cast<std::size_t>(e) % m_;
    const auto v = static_cast<std::size_t>(e - real_arcs_);
    return v < n_ ? root_ : v;
  }
  double arc_cost(std::int64_t e) const { return e < real_arcs_ ? C_.values()[e] : big_m_; }

  void init() {
    nodes_ = n_ + m_ + 1;
    root_ = n_ + m_;
    real_arcs_ = static_cast<std::int64_t>(n_ * m_);
    double max_cost = 0.0;
    for (double c : C_.values()) max_cost = std::max(max_cost, std::abs(c));
    big_m_ = (max_cost + 1.0) * static_cast<double>(nodes_);
    tolerance_ = 1e-12 * (max_cost + 1.0);

    parent_.assign(nodes_, root_);
    pred_.assign(nodes_, -1);
    dir_.assign(nodes_, kUp);
    depth_.assign(nodes_, 1);
    flow_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    children_.assign(nodes_, {});
    child_pos_.assign(nodes_, 0);
    in_tree_.assign(static_cast<std::size_t>(real_arcs_), 0);
    parent_[root_] = root_;
    depth_[root_] = 0;
    for (std::size_t v = 0; v < root_; ++v) {
      pred_[v] = real_arcs_ + static_cast<std::int64_t>(v);
      if (v < n_) {
        dir_[v] = kUp;
        flow_[v] = supply_[v];
        pi_[v] = -big_m_;
      } else {
        dir_[v] = kDown;
        flow_[v] = demand_[v - n_];
        pi_[v] = big_m_;
      }
      child_pos_[v] = children_[root_].size();
      children_[root_].push_back(v);
    }
    block_ = std::max<std::int64_t>(10, static_cast<std::int64_t>(std::sqrt(static_cast<double>(real_arcs_))));
    next_arc_ = 0;
  }

  // Block search over real arcs: most negative reduced cost in the first
  // block that has any candidate.
  std::int64_t find_entering() {
    std::int64_t best = -1;
    double best_rc = -tolerance_;
    std::int64_t scanned_in_block = 0;
    const double* cost = C_.values().data();
    for (std::int64_t count = 0; count < real_arcs_; ++count) {
      const std::int64_t e = next_arc_;
      next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
      if (!in_tree_[e]) {
        const std::size_t i = static_cast<std::size_t>(e) / m_;
        const std::size_t j = n_ + static_cast<std::size_t>(e) % m_;
        const double rc = cost[e] + pi_[i] - pi_[j];
        if (rc < best_rc) {
          best_rc = rc;
          best = e;
        }
      }
      if (++scanned_in_block == block_) {
        if (best >= 0) return best;
        scanned_in_block = 0;
      }
    }
    return best;
  }

  std::size_t join_of(std::size_t u, std::size_t v) const {
    while (u != v) {
      if (depth_[u] >= depth_[v])
        u = parent_[u];
      else
        v = parent_[v];
    }
    return u;
  }

  void detach(std::size_t v) {
    auto& siblings = children_[parent_[v]];
    const std::size_t pos = child_pos_[v];
    const std::size_t last = siblings.back();
    siblings[pos] = last;
    child_pos_[last] = pos;
    siblings.pop_back();
  }
  void attach(std::size_t v, std::size_t new_parent) {
    parent_[v] = new_parent;
    child_pos_[v] = children_[new_parent].size();
    children_[new_parent].push_back(v);
  }

  void pivot(std::int64_t in_arc) {
    const std::size_t first = src(in_arc), second = tgt(in_arc);
    const std::size_t join = join_of(first, second);

    // Leaving arc: smallest flow among arcs traversed against their direction.
    std::int64_t delta = INT64_MAX;
    std::size_t u_out = 0;
    int side = 0;
    for (std::size_t u = first; u != join; u = parent_[u]) {
      if (dir_[u] == kUp && flow_[u] < delta) {
        delta = flow_[u];
        u_out = u;
        side = 1;
      }
    }
    for (std::size_t u = second; u != join; u = parent_[u]) {
      if (dir_[u] == kDown && flow_[u] <= delta) {
        delta = flow_[u];
        u_out = u;
        side = 2;
      }
    }
    require(side != 0, "solve_general_ot: unbounded pivot");

    if (delta > 0) {
      for (std::size_t u = first; u != join; u = parent_[u]) flow_[u] -= dir_[u] * delta;
      for (std::size_t u = second; u != join; u = parent_[u]) flow_[u] += dir_[u] * delta;
    }

    const std::size_t u_in = side == 1 ? first : second;
    const std::size_t v_in = side == 1 ? second : first;
    const double rc = arc_cost(in_arc) + pi_[first] - pi_[second];
    const double sigma = u_in == second ? rc : -rc;

    // Re-hang the path u_in .. u_out so that u_in becomes the subtree root.
    if (pred_[u_out] < real_arcs_) in_tree_[pred_[u_out]] = 0;
    std::vector<std::size_t>& path = path_buf_;
    path.clear();
    for (std::size_t u = u_in;; u = parent_[u]) {
      path.push_back(u);
      if (u == u_out) break;
    }
    for (std::size_t k = path.size(); k-- > 0;) detach(path[k]);
    for (std::size_t k = path.size() - 1; k >= 1; --k) {
      const std::size_t w = path[k], below = path[k - 1];
      pred_[w] = pred_[below];
      dir_[w] = -dir_[below];
      flow_[w] = flow_[below];
      attach(w, below);
    }
    pred_[u_in] = in_arc;
    dir_[u_in] = u_in == first ? kUp : kDown;
    flow_[u_in] = delta;
    in_tree_[in_arc] = 1;
    attach(u_in, v_in);

    // Depths and potentials of the moved subtree.
    std::vector<std::size_t>& stack = stack_buf_;
    stack.assign(1, u_in);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      depth_[v] = depth_[parent_[v]] + 1;
      pi_[v] += sigma;
      for (std::size_t c : children_[v]) stack.push_back(c);
    }
  }

  const CostMatrix& C_;
  std::size_t n_, m_;
  std::vector<std::int64_t> supply_, demand_;
  std::size_t nodes_ = 0, root_ = 0;
  std::int64_t real_arcs_ = 0;
  double big_m_ = 0.0, tolerance_ = 0.0;

  // Per-node tree data; flow_[v] is the flow on pred_[v].
  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<int> dir_;
  std::vector<std::size_t> depth_;
  std::vector<std::int64_t> flow_;
  std::vector<double> pi_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> child_pos_;
  std::vector<char> in_tree_;
  std::vector<std::size_t> path_buf_, stack_buf_;

  std::int64_t block_ = 10, next_arc_ = 0;
};

}  // namespace

TransportResult solve_general_ot(const CostMatrix& cost, const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == cost.rows() && b.size() == cost.cols(), "solve_general_ot: weight/shape mismatch");
  require(!a.empty() && !b.empty(), "solve_general_ot: empty measure");
  require(all_finite(cost.values()), "solve_general_ot: non-finite cost");
  auto check = [](const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) {
      require(x >= 0.0, "solve_general_ot: negative weight");
      s += x;
    }
    require(std::abs(s - 1.0) <= 1e-12, "solve_general_ot: weights must sum to 1");
  };
  check(a);
  check(b);

  TransportSimplex simplex(cost, integerize(a), integerize(b));
  TransportResult r;
  r.solver = SolverTag::general_exact;
  r.diagnostics.iterations = simplex.run();
  require(simplex.artificial_flow_free(), "solve_general_ot: infeasible weights");
  r.coupling = simplex.plan();
  double total = 0.0;
  for (const auto& e : r.coupling) total += e.mass * cost(e.i, e.j);
  r.cost = total;
  r.diagnostics.duality_gap = std::abs(total - simplex.dual_objective());
  return r;
}

TransportResult solve_general_ot(const DiscreteMeasure& X, const DiscreteMeasure& Y, double p) {
  X.validate();
  Y.validate();
  if (X.dim() != Y.dim()) throw DimensionMismatch("solve_general_ot: dimension mismatch");
  check_dense_size(X.size(), Y.size(), "solve_general_ot");
  TransportResult r = solve_general_ot(cost_matrix(X, Y, p), X.weights, Y.weights);
  r.p = p;
  return r;
}

}  // namespace gaussmatch::ot
