#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rdsmc/core.hpp"

namespace rdsmc {

/// Spanning in-tree: every non-root state has one outgoing edge
/// i -> parent[i], and following edges reaches the root. parent[root] == root.
struct RootedTree {
  State root = 0;
  std::vector<State> parent;
};

/// Rooted spanning forest: parent[r] == r exactly for the roots r.
struct RootedForest {
  std::vector<State> roots;
  std::vector<State> parent;
};

struct ForestWeight {
  std::vector<State> roots;
  double value = 0.0;
};

/// Largest n accepted by the enumeration routes.
inline constexpr std::size_t kTreeEnumerationCap = 8;

/// Calls visit(forest, weight) for every spanning forest whose root set is
/// exactly `roots` and whose edges all have positive weight in M. Weight is
/// the product of edge weights. Depth-first over states in increasing order,
/// pruned by reachability of the root set.
void for_each_forest(const StochasticMatrix& m, std::span<const State> roots,
                     const std::function<void(const RootedForest&, double)>& visit);

/// Every positive-weight spanning in-tree rooted at `root`.
std::vector<std::pair<RootedTree, double>> enumerate_rooted_trees(const StochasticMatrix& m, State root);

/// Sum of all forest weights rooted at `roots`, by enumeration.
double forest_weight_enumerated(const StochasticMatrix& m, std::span<const State> roots);

/// Matrix-tree route: det of (I - M) with the rows and columns of `roots`
/// deleted. Empty submatrix has determinant 1.
ForestWeight forest_weight_det(const StochasticMatrix& m, std::span<const State> roots);

/// Determinant by partially pivoted elimination. Magnitudes below
/// 1e-14 * (product of row infinity norms) are returned as 0.
double determinant(Matrix a);

struct HillStationary {
  ProbVector pi;
  /// Sum over states of the rooted-tree weights.
  double sigma = 0.0;
  /// e(T_i) for each root i.
  std::vector<double> tree_weights;
};

/// pi_i = e(T_i) / sigma, tree weights from forest_weight_det(M, {i}).
/// Throws NotErgodicError for reducible chains.
HillStationary hill_stationary(const StochasticMatrix& m);

/// sigma = sum_i e(T_i).
double tree_normalization(const StochasticMatrix& m);

}  // namespace rdsmc
