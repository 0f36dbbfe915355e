#include "rdsmc/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdsmc/trees.hpp"

namespace rdsmc {

DerivedStep derived_step(const DerivedChainState& eta, State j) {
  if (eta.seq.empty()) throw PreconditionError("derived chain state is empty");
  DerivedStep out;
  auto it = std::find(eta.seq.begin(), eta.seq.end(), j);
  if (it == eta.seq.end()) {
    out.next.seq = eta.seq;
    out.next.seq.push_back(j);
    return out;
  }
  out.cycle = Cycle(std::vector<State>(it, eta.seq.end()));
  out.next.seq.assign(eta.seq.begin(), it + 1);
  return out;
}

DerivedStep derived_step(const StochasticMatrix& m, const DerivedChainState& eta, State j) {
  if (eta.seq.empty() || j >= m.size() || eta.current() >= m.size()) {
    throw DimensionError("derived step outside the state space");
  }
  if (!(m(eta.current(), j) > 0.0)) {
    throw PreconditionError("derived step along a zero-probability transition " + std::to_string(eta.current() + 1) +
                            " -> " + std::to_string(j + 1));
  }
  return derived_step(eta, j);
}

std::size_t DerivedChain::index_of(const DerivedChainState& s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) throw PreconditionError("state not in this derived chain");
  return static_cast<std::size_t>(it - states.begin());
}

Matrix DerivedChain::dense() const {
  const auto k = static_cast<Eigen::Index>(states.size());
  Matrix d = Matrix::Zero(k, k);
  for (std::size_t a = 0; a < states.size(); ++a) {
    for (const auto& [b, w] : transitions[a]) d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += w;
  }
  return d;
}

namespace {

// Depth-first walk over simple paths starting at `initial`, restricted to
// states accepted by `allowed`. Visits each path once.
template <class Allowed, class Visit>
void walk_simple_paths(const StochasticMatrix& m, State initial, Allowed&& allowed, Visit&& visit, std::size_t cap) {
  const std::size_t n = m.size();
  std::vector<State> path{initial};
  std::vector<bool> on_path(n, false);
  on_path[initial] = true;
  std::size_t count = 0;
  auto rec = [&](auto&& self) -> void {
    if (++count > cap) {
      throw CapExceededError("derived chain exceeds " + std::to_string(cap) + " states");
    }
    visit(std::span<const State>(path));
    const State last = path.back();
    for (State j = 0; j < n; ++j) {
      if (on_path[j] || !allowed(j) || !(m(last, j) > 0.0)) continue;
      on_path[j] = true;
      path.push_back(j);
      self(self);
      path.pop_back();
      on_path[j] = false;
    }
  };
  rec(rec);
}

}  // namespace

DerivedChain build_derived_chain(const StochasticMatrix& m, State initial, std::size_t cap) {
  if (initial >= m.size()) throw DimensionError("initial state outside the state space");
  DerivedChain chain;
  chain.initial = initial;
  walk_simple_paths(
      m, initial, [](State) { return true; },
      [&](std::span<const State> p) { chain.states.push_back({std::vector<State>(p.begin(), p.end())}); }, cap);
  std::sort(chain.states.begin(), chain.states.end());
  chain.transitions.resize(chain.states.size());
  for (std::size_t a = 0; a < chain.states.size(); ++a) {
    const auto& s = chain.states[a];
    for (State j = 0; j < m.size(); ++j) {
      const double w = m(s.current(), j);
      if (!(w > 0.0)) continue;
      chain.transitions[a].emplace_back(chain.index_of(derived_step(s, j).next), w);
    }
  }
  return chain;
}

double derived_tree_weight(const StochasticMatrix& m, std::span<const State> path) {
  if (path.empty()) throw PreconditionError("derived state must be non-empty");
  double w = 1.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) w *= m(path[k], path[k + 1]);
  if (w == 0.0) return 0.0;
  return w * forest_weight_det(m, path).value;
}

std::map<DerivedChainState, double> derived_stationary(const StochasticMatrix& m, State initial, std::size_t cap) {
  if (initial >= m.size()) throw DimensionError("initial state outside the state space");
  m.require_ergodic();
  const double sigma = tree_normalization(m);
  std::map<DerivedChainState, double> pi;
  walk_simple_paths(
      m, initial, [](State) { return true; },
      [&](std::span<const State> p) {
        pi.emplace(DerivedChainState{std::vector<State>(p.begin(), p.end())}, derived_tree_weight(m, p) / sigma);
      },
      cap);
  return pi;
}

// ---------------------------------------------------------------------------

double CycleWeights::weight(const Cycle& c) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const CycleWeight& e, const Cycle& key) { return e.cycle < key; });
  return (it != entries.end() && it->cycle == c) ? it->w : 0.0;
}

double CycleWeights::probability(const Cycle& c) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const CycleWeight& e, const Cycle& key) { return e.cycle < key; });
  return (it != entries.end() && it->cycle == c) ? it->p : 0.0;
}

std::vector<CycleWeight> CycleWeights::ranked() const {
  auto out = entries;
  std::stable_sort(out.begin(), out.end(), [](const CycleWeight& a, const CycleWeight& b) {
    if (a.w != b.w) return a.w > b.w;
    return a.cycle < b.cycle;
  });
  return out;
}

double cycle_weight_at(const StochasticMatrix& m, std::span<const State> rotation, double sigma) {
  if (rotation.empty()) throw PreconditionError("cycle must be non-empty");
  const double closing = m(rotation.back(), rotation.front());
  if (closing == 0.0) return 0.0;
  return derived_tree_weight(m, rotation) * closing / sigma;
}

CycleWeights cycle_weights(const StochasticMatrix& m, std::size_t cap) {
  m.require_ergodic();
  const std::size_t n = m.size();
  CycleWeights cw;
  cw.sigma = tree_normalization(m);
  std::size_t budget = cap;
  for (State i1 = 0; i1 < n; ++i1) {
    // Derived class of i1 restricted to states above i1: every cycle whose
    // smallest state is i1 closes exactly once as [i1..it] -> [i1].
    std::size_t used = 0;
    walk_simple_paths(
        m, i1, [i1](State j) { return j > i1; },
        [&](std::span<const State> p) {
          ++used;
          if (m(p.back(), i1) > 0.0) {
            cw.entries.push_back({Cycle(std::vector<State>(p.begin(), p.end())), cycle_weight_at(m, p, cw.sigma), 0.0});
          }
        },
        budget);
    budget -= std::min(budget, used);
  }
  std::sort(cw.entries.begin(), cw.entries.end(),
            [](const CycleWeight& a, const CycleWeight& b) { return a.cycle < b.cycle; });
  double total = 0.0;
  for (const auto& e : cw.entries) total += e.w;
  for (auto& e : cw.entries) e.p = e.w / total;
  cw.lambda = 1.0 / total;
  return cw;
}

CirculationDefects circulation_identities(const StochasticMatrix& m, const CycleWeights& weights, const ProbVector& pi) {
  const std::size_t n = m.size();
  std::vector<double> node(n, 0.0);
  Matrix edge = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : weights.entries) {
    const auto& s = e.cycle.states();
    for (std::size_t k = 0; k < s.size(); ++k) {
      node[s[k]] += e.w;
      edge(static_cast<Eigen::Index>(s[k]), static_cast<Eigen::Index>(s[(k + 1) % s.size()])) += e.w;
    }
  }
  CirculationDefects d;
  for (State i = 0; i < n; ++i) {
    d.node = std::max(d.node, std::abs(node[i] - pi[i]));
    for (State j = 0; j < n; ++j) {
      d.edge = std::max(d.edge, std::abs(edge(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - pi[i] * m(i, j)));
    }
  }
  return d;
}

CirculationDefects circulation_identities(const StochasticMatrix& m) {
  const auto weights = cycle_weights(m);
  return circulation_identities(m, weights, hill_stationary(m).pi);
}

CycleEp cycle_ep(const StochasticMatrix& m, const CycleWeights& weights) {
  m.require_support_symmetric();
  CycleEp ep;
  double kl = 0.0;
  for (const auto& e : weights.entries) {
    if (e.cycle.self_reverse() || e.w <= 0.0) continue;
    const Cycle rev = e.cycle.reversed();
    const double w_rev = weights.weight(rev);
    const double p_rev = weights.probability(rev);
    if (w_rev <= 0.0) {
      throw ConsistencyError("cycle has positive weight but its reversal does not");
    }
    ep.weight_form += e.w * std::log(e.w / w_rev);
    kl += e.p * std::log(e.p / p_rev);
  }
  ep.relative_entropy_form = kl / weights.lambda;
  return ep;
}

CycleEp cycle_ep(const StochasticMatrix& m) {
  m.require_support_symmetric();
  return cycle_ep(m, cycle_weights(m));
}

}  // namespace rdsmc
