#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rdsmc/core.hpp"

namespace rdsmc {

/// The trajectory from the initial state with every completed cycle popped:
/// a duplicate-free sequence [i1, ..., it] whose first entry is the initial
/// state and whose last entry is the current state.
struct DerivedChainState {
  std::vector<State> seq;

  State initial() const { return seq.front(); }
  State current() const { return seq.back(); }
  std::size_t size() const noexcept { return seq.size(); }

  friend bool operator==(const DerivedChainState&, const DerivedChainState&) = default;
  friend auto operator<=>(const DerivedChainState& a, const DerivedChainState& b) {
    if (a.seq.size() != b.seq.size()) return a.seq.size() <=> b.seq.size();
    return a.seq <=> b.seq;
  }
};

struct DerivedStep {
  DerivedChainState next;
  /// The cycle completed by this move, if any.
  std::optional<Cycle> cycle;
};

/// Moves the derived chain to state j. If j is new it is appended; if
/// j = i_s already occurs, the tail is truncated back to [i1..is] and the
/// cycle (is, ..., it) is emitted. j == current() emits the self-loop (j).
DerivedStep derived_step(const DerivedChainState& eta, State j);
/// As above, additionally requiring M(current, j) > 0.
DerivedStep derived_step(const StochasticMatrix& m, const DerivedChainState& eta, State j);

/// Default cap on the number of derived states.
inline constexpr std::size_t kDerivedStateCap = 100000;

/// The derived chain restricted to the class of one initial state. States are
/// ordered by size, then lexicographically.
struct DerivedChain {
  State initial = 0;
  std::vector<DerivedChainState> states;
  /// Sparse rows: (target index, weight).
  std::vector<std::vector<std::pair<std::size_t, double>>> transitions;

  std::size_t size() const noexcept { return states.size(); }
  /// Throws PreconditionError for unknown states.
  std::size_t index_of(const DerivedChainState& s) const;
  Matrix dense() const;
};

/// All simple paths from `initial` along positive edges, with transition
/// weights M(current, j) per derived_step. Throws CapExceededError above
/// `cap` states.
DerivedChain build_derived_chain(const StochasticMatrix& m, State initial, std::size_t cap = kDerivedStateCap);

/// Unnormalized e(T_[i1..it]) = M(i1,i2) ... M(i_{t-1},i_t) * F_{n,{i1..it}}(M).
double derived_tree_weight(const StochasticMatrix& m, std::span<const State> path);

/// Pi([i1..it]) = e(T_[i1..it]) / sigma over the reachable class of
/// `initial`, sigma being the rooted-tree normalization.
std::map<DerivedChainState, double> derived_stationary(const StochasticMatrix& m, State initial,
                                                       std::size_t cap = kDerivedStateCap);

struct CycleWeight {
  Cycle cycle;
  /// Mean occurrences per step.
  double w = 0.0;
  /// w / sum of all w.
  double p = 0.0;
};

struct CycleWeights {
  /// Canonical-order list of every simple cycle of the support digraph.
  std::vector<CycleWeight> entries;
  /// Mean number of steps per completed cycle, 1 / sum w.
  double lambda = 0.0;
  /// Rooted-tree normalization used for all weights.
  double sigma = 0.0;

  /// 0 for cycles absent from the support.
  double weight(const Cycle& c) const;
  double probability(const Cycle& c) const;
  /// Entries by descending w, ties broken lexicographically.
  std::vector<CycleWeight> ranked() const;
};

/// w_c evaluated from the given rotation of the cycle (no canonicalization):
/// M(s1,s2)...M(s_{t-1},s_t) F({s}) M(s_t,s1) / sigma.
double cycle_weight_at(const StochasticMatrix& m, std::span<const State> rotation, double sigma);

/// Cycle weights of an ergodic chain. Each cycle is generated as a
/// truncation event of the derived chain rooted at its smallest state.
CycleWeights cycle_weights(const StochasticMatrix& m, std::size_t cap = kDerivedStateCap);

struct CirculationDefects {
  /// max_i |sum_c w_c J_c(i) - pi_i|
  double node = 0.0;
  /// max_ij |sum_c w_c J_c(i,j) - pi_i M_ij|
  double edge = 0.0;
};

CirculationDefects circulation_identities(const StochasticMatrix& m, const CycleWeights& weights, const ProbVector& pi);
CirculationDefects circulation_identities(const StochasticMatrix& m);

struct CycleEp {
  /// sum_c w_c log(w_c / w_{c-})
  double weight_form = 0.0;
  /// H(p_c, p_{c-}) / lambda
  double relative_entropy_form = 0.0;
};

/// Entropy production in cycle coordinates. Requires an ergodic chain with
/// symmetric support; a weighted cycle with an unweighted reversal raises
/// ConsistencyError.
CycleEp cycle_ep(const StochasticMatrix& m, const CycleWeights& weights);
CycleEp cycle_ep(const StochasticMatrix& m);

}  // namespace rdsmc
