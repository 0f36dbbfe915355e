#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdsmc/core.hpp"
#include "rdsmc/cycles.hpp"
#include "rdsmc/rds.hpp"

namespace rdsmc {

/// Counter-based generator: a SplitMix64 sequence whose starting point is a
/// hash of (seed, stream key). Two generators built from the same seed and
/// key produce identical draws, which is what lets coupling from the past
/// reuse the noise of a past time slot exactly.
class CounterRng {
 public:
  static constexpr std::string_view kGeneratorId = "ctr-splitmix64";

  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Index drawn from unnormalized non-negative weights.
  std::size_t categorical(std::span<const double> weights) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Trajectory {
  std::vector<State> states;
  std::uint64_t seed = 0;
  std::string generator{CounterRng::kGeneratorId};
};

/// X0 ~ p0, X_{t+1} ~ M(X_t, .), for t < steps. `replica` selects an
/// independent stream under the same seed.
Trajectory simulate_mc(const StochasticMatrix& m, const ProbVector& p0, std::size_t steps, std::uint64_t seed,
                       std::uint64_t replica = 0);

/// Maps drawn independently from Q at every step.
struct IidSource {
  RDSMeasure q;
};

/// Maps drawn by a Markov chain over a finite list of atoms.
struct MarkovDrivenSource {
  std::vector<DeterministicMap> atoms;
  StochasticMatrix transition;
  ProbVector initial;

  /// Validates sizes: transition and initial index the atoms.
  MarkovDrivenSource(std::vector<DeterministicMap> atoms, StochasticMatrix transition, ProbVector initial);
};

using MapSequenceSource = std::variant<IidSource, MarkovDrivenSource>;

struct RdsRun {
  /// One trajectory per starting point, all driven by `maps`.
  std::vector<Trajectory> points;
  /// maps[t] moves every point from time t to t + 1.
  std::vector<DeterministicMap> maps;
};

/// Grand coupling: every starting point follows the same map sequence.
RdsRun simulate_rds(const MapSequenceSource& source, std::span<const State> starts, std::size_t steps,
                    std::uint64_t seed, std::uint64_t replica = 0);

/// The map occupying past slot k >= 1 (time -k) for the given seed/replica.
/// Pullback and CFTP both read the past through this function.
DeterministicMap past_map(const RDSMeasure& q, std::uint64_t seed, std::uint64_t replica, std::size_t slot);

/// |alpha_{-1} o ... o alpha_{-t} (S)| for t = 0..steps. Non-increasing.
std::vector<std::size_t> pullback_support(const RDSMeasure& q, std::size_t steps, std::uint64_t seed,
                                          std::uint64_t replica = 0);

struct CftpResult {
  State state = 0;
  /// Past horizon at which the whole state space had coalesced.
  std::size_t horizon = 0;
};

/// Coupling from the past with the all-states grand coupling, horizons
/// 1, 2, 4, ... up to max_horizon, reusing the same past maps across
/// doublings. Throws NoCoalescenceError if no horizon coalesces.
CftpResult cftp_sample(const RDSMeasure& q, std::uint64_t seed, std::size_t max_horizon, std::uint64_t replica = 0);

/// Derived-chain replay of an observed trajectory.
struct CycleReplay {
  /// derived[t] is the derived state after observing states[0..t].
  std::vector<DerivedChainState> derived;
  /// cycles[t] is the cycle completed at time t (none at t = 0).
  std::vector<std::optional<Cycle>> cycles;
};

CycleReplay replay_cycles(std::span<const State> trajectory);

struct EmpiricalCycles {
  std::map<Cycle, std::size_t> counts;
  std::size_t steps = 0;
  std::size_t total = 0;

  /// counts / steps
  double w(const Cycle& c) const;
  /// counts / total
  double p(const Cycle& c) const;
  /// Mean cycle length over completed cycles; estimates lambda.
  double mean_length() const;
};

EmpiricalCycles count_cycles(std::span<const State> trajectory);

/// Simulates `steps` transitions from `initial` and counts derived-chain
/// cycle completions.
EmpiricalCycles empirical_cycles(const StochasticMatrix& m, State initial, std::size_t steps, std::uint64_t seed);

/// Header `# seed=<seed> generator=<id>`, then one 1-indexed state per line.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);

}  // namespace rdsmc
