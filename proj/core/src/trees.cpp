#include "rdsmc/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rdsmc {

namespace {

void check_roots(std::size_t n, std::span<const State> roots) {
  for (State r : roots) {
    if (r >= n) throw DimensionError("root outside the state space");
  }
}

std::vector<bool> root_mask(std::size_t n, std::span<const State> roots) {
  std::vector<bool> mask(n, false);
  for (State r : roots) mask[r] = true;
  return mask;
}

struct ForestSearch {
  const StochasticMatrix& m;
  const std::vector<bool>& is_root;
  const std::function<void(const RootedForest&, double)>& visit;
  RootedForest forest;
  std::vector<State> free_states;
  static constexpr State kUnset = static_cast<State>(-1);

  // Adding v -> u closes a loop iff the parent chain from u returns to v.
  bool creates_loop(State v, State u) const {
    State x = u;
    while (!is_root[x] && forest.parent[x] != kUnset) {
      if (x == v) return true;
      x = forest.parent[x];
    }
    return x == v;
  }

  void descend(std::size_t k, double weight) {
    if (k == free_states.size()) {
      visit(forest, weight);
      return;
    }
    const State v = free_states[k];
    const std::size_t n = m.size();
    for (State u = 0; u < n; ++u) {
      const double w = m(v, u);
      if (u == v || !(w > 0.0) || creates_loop(v, u)) continue;
      forest.parent[v] = u;
      descend(k + 1, weight * w);
      forest.parent[v] = kUnset;
    }
  }
};

// States that can reach the root set along positive edges.
std::vector<bool> reaches_roots(const StochasticMatrix& m, const std::vector<bool>& is_root) {
  const std::size_t n = m.size();
  std::vector<bool> reach = is_root;
  bool changed = true;
  while (changed) {
    changed = false;
    for (State v = 0; v < n; ++v) {
      if (reach[v]) continue;
      for (State u = 0; u < n; ++u) {
        if (u != v && reach[u] && m(v, u) > 0.0) {
          reach[v] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return reach;
}

}  // namespace

void for_each_forest(const StochasticMatrix& m, std::span<const State> roots,
                     const std::function<void(const RootedForest&, double)>& visit) {
  const std::size_t n = m.size();
  if (n > kTreeEnumerationCap) {
    throw CapExceededError("forest enumeration refused for n = " + std::to_string(n) + " (cap " +
                           std::to_string(kTreeEnumerationCap) + ")");
  }
  check_roots(n, roots);
  const auto is_root = root_mask(n, roots);
  if (std::none_of(is_root.begin(), is_root.end(), [](bool b) { return b; })) return;
  const auto reach = reaches_roots(m, is_root);
  if (std::find(reach.begin(), reach.end(), false) != reach.end()) return;

  ForestSearch search{m, is_root, visit, {}, {}};
  search.forest.parent.assign(n, ForestSearch::kUnset);
  for (State v = 0; v < n; ++v) {
    if (is_root[v]) {
      search.forest.parent[v] = v;
      search.forest.roots.push_back(v);
    } else {
      search.free_states.push_back(v);
    }
  }
  search.descend(0, 1.0);
}

std::vector<std::pair<RootedTree, double>> enumerate_rooted_trees(const StochasticMatrix& m, State root) {
  std::vector<std::pair<RootedTree, double>> trees;
  const State roots[] = {root};
  for_each_forest(m, roots, [&](const RootedForest& f, double w) {
    trees.push_back({RootedTree{root, f.parent}, w});
  });
  return trees;
}

double forest_weight_enumerated(const StochasticMatrix& m, std::span<const State> roots) {
  double total = 0.0;
  for_each_forest(m, roots, [&](const RootedForest&, double w) { total += w; });
  return total;
}

namespace {

// Partial-pivot LU; a pivot below tol counts as zero.
double lu_determinant(Matrix a, double tol) {
  const Eigen::Index n = a.rows();
  double det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (std::abs(a(pivot, k)) <= tol) return 0.0;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      a.row(i).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
    }
  }
  return det;
}

}  // namespace

double determinant(Matrix a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DimensionError("determinant of a non-square matrix");
  if (n == 0) return 1.0;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * norm;
  return lu_determinant(std::move(a), tol);
}

ForestWeight forest_weight_det(const StochasticMatrix& m, std::span<const State> roots) {
  const std::size_t n = m.size();
  check_roots(n, roots);
  const auto is_root = root_mask(n, roots);
  std::vector<Eigen::Index> keep;
  for (State i = 0; i < n; ++i) {
    if (!is_root[i]) keep.push_back(static_cast<Eigen::Index>(i));
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  Matrix d(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      d(a, b) = a == b ? 0.0 : -m.matrix()(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
    }
    // Out-weight of the row, summed off the diagonal to avoid cancellation in 1 - M_vv.
    const Eigen::Index v = keep[static_cast<std::size_t>(a)];
    double out = 0.0;
    for (Eigen::Index u = 0; u < m.matrix().cols(); ++u) {
      if (u != v) out += m.matrix()(v, u);
    }
    d(a, a) = out;
  }
  ForestWeight fw;
  fw.roots.assign(roots.begin(), roots.end());
  std::sort(fw.roots.begin(), fw.roots.end());
  fw.roots.erase(std::unique(fw.roots.begin(), fw.roots.end()), fw.roots.end());
  // The submatrix of I - M is an M-matrix; it is singular exactly when some
  // non-root state cannot reach the roots.
  const auto reach = reaches_roots(m, is_root);
  const bool spanning = std::all_of(reach.begin(), reach.end(), [](bool r) { return r; });
  fw.value = spanning ? std::max(0.0, lu_determinant(std::move(d), 0.0)) : 0.0;
  return fw;
}

HillStationary hill_stationary(const StochasticMatrix& m) {
  if (!m.irreducible()) throw NotErgodicError("matrix-tree stationary distribution needs an irreducible chain");
  const std::size_t n = m.size();
  std::vector<double> weights(n);
  double sigma = 0.0;
  for (State i = 0; i < n; ++i) {
    const State root[] = {i};
    weights[i] = forest_weight_det(m, root).value;
    sigma += weights[i];
  }
  if (!(sigma > 0.0)) throw NotErgodicError("all rooted-tree weights vanish");
  std::vector<double> pi(n);
  for (State i = 0; i < n; ++i) pi[i] = weights[i] / sigma;
  return HillStationary{ProbVector(std::move(pi)), sigma, std::move(weights)};
}

double tree_normalization(const StochasticMatrix& m) { return hill_stationary(m).sigma; }

}  // namespace rdsmc
