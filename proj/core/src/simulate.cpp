#include "rdsmc/simulate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rdsmc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stream tags keep the different consumers of one seed independent.
enum StreamTag : std::uint64_t {
  kChainStream = 1,
  kForwardMapStream = 2,
  kPastMapStream = 3,
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> support_weights(const RDSMeasure& q) {
  std::vector<double> w;
  w.reserve(q.support().size());
  for (const auto& wm : q.support()) w.push_back(wm.weight);
  return w;
}

std::vector<double> row_weights(const StochasticMatrix& m, State i) {
  std::vector<double> w(m.size());
  for (State j = 0; j < m.size(); ++j) w[j] = m(i, j);
  return w;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key) : key_(mix64(seed + kGolden)) {
  for (std::uint64_t part : key) key_ = mix64(key_ ^ mix64(part + kGolden));
}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_positive = k;
    acc += weights[k];
    if (u < acc) return k;
  }
  return last_positive;
}

Trajectory simulate_mc(const StochasticMatrix& m, const ProbVector& p0, std::size_t steps, std::uint64_t seed,
                       std::uint64_t replica) {
  if (p0.size() != m.size()) throw DimensionError("initial law and matrix sizes differ");
  CounterRng rng(seed, {kChainStream, replica});
  std::vector<std::vector<double>> rows(m.size());
  for (State i = 0; i < m.size(); ++i) rows[i] = row_weights(m, i);
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(steps + 1);
  traj.states.push_back(rng.categorical(p0.entries()));
  for (std::size_t t = 0; t < steps; ++t) traj.states.push_back(rng.categorical(rows[traj.states.back()]));
  return traj;
}

MarkovDrivenSource::MarkovDrivenSource(std::vector<DeterministicMap> atoms_in, StochasticMatrix transition_in,
                                       ProbVector initial_in)
    : atoms(std::move(atoms_in)), transition(std::move(transition_in)), initial(std::move(initial_in)) {
  if (atoms.empty()) throw PreconditionError("map chain needs at least one atom");
  if (transition.size() != atoms.size() || initial.size() != atoms.size()) {
    throw DimensionError("map chain transition/initial law do not index the atoms");
  }
  for (const auto& a : atoms) {
    if (a.size() != atoms.front().size()) throw DimensionError("map chain atoms act on different state spaces");
  }
}

namespace {

std::size_t source_state_count(const MapSequenceSource& source) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, IidSource>) {
          return s.q.state_count();
        } else {
          return s.atoms.front().size();
        }
      },
      source);
}

std::vector<DeterministicMap> draw_maps(const MapSequenceSource& source, std::size_t steps, CounterRng& rng) {
  std::vector<DeterministicMap> maps;
  maps.reserve(steps);
  if (const auto* iid = std::get_if<IidSource>(&source)) {
    const auto w = support_weights(iid->q);
    for (std::size_t t = 0; t < steps; ++t) maps.push_back(iid->q.support()[rng.categorical(w)].map);
    return maps;
  }
  const auto& chain = std::get<MarkovDrivenSource>(source);
  std::vector<std::vector<double>> rows(chain.atoms.size());
  for (State a = 0; a < chain.atoms.size(); ++a) rows[a] = row_weights(chain.transition, a);
  std::size_t atom = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    atom = (t == 0) ? rng.categorical(chain.initial.entries()) : rng.categorical(rows[atom]);
    maps.push_back(chain.atoms[atom]);
  }
  return maps;
}

}  // namespace

RdsRun simulate_rds(const MapSequenceSource& source, std::span<const State> starts, std::size_t steps,
                    std::uint64_t seed, std::uint64_t replica) {
  const std::size_t n = source_state_count(source);
  for (State s : starts) {
    if (s >= n) throw DimensionError("starting point outside the state space");
  }
  CounterRng rng(seed, {kForwardMapStream, replica});
  RdsRun run;
  run.maps = draw_maps(source, steps, rng);
  run.points.reserve(starts.size());
  for (State s : starts) {
    Trajectory traj;
    traj.seed = seed;
    traj.states.reserve(steps + 1);
    traj.states.push_back(s);
    for (const auto& alpha : run.maps) traj.states.push_back(alpha(traj.states.back()));
    run.points.push_back(std::move(traj));
  }
  return run;
}

DeterministicMap past_map(const RDSMeasure& q, std::uint64_t seed, std::uint64_t replica, std::size_t slot) {
  CounterRng rng(seed, {kPastMapStream, replica, slot});
  const auto w = support_weights(q);
  return q.support()[rng.categorical(w)].map;
}

std::vector<std::size_t> pullback_support(const RDSMeasure& q, std::size_t steps, std::uint64_t seed,
                                          std::uint64_t replica) {
  const std::size_t n = q.state_count();
  // composite(i) = alpha_{-1}( ... alpha_{-t}(i))
  std::vector<State> composite(n);
  for (State i = 0; i < n; ++i) composite[i] = i;
  std::vector<std::size_t> sizes{n};
  std::vector<bool> hit(n);
  for (std::size_t t = 1; t <= steps; ++t) {
    const auto alpha = past_map(q, seed, replica, t);
    std::vector<State> next(n);
    for (State i = 0; i < n; ++i) next[i] = composite[alpha(i)];
    composite = std::move(next);
    std::fill(hit.begin(), hit.end(), false);
    std::size_t size = 0;
    for (State x : composite) {
      if (!hit[x]) {
        hit[x] = true;
        ++size;
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

CftpResult cftp_sample(const RDSMeasure& q, std::uint64_t seed, std::size_t max_horizon, std::uint64_t replica) {
  const std::size_t n = q.state_count();
  std::vector<DeterministicMap> past;  // past[k - 1] is the map at slot k
  std::size_t horizon = 1;
  while (true) {
    const std::size_t t = std::min(horizon, max_horizon);
    while (past.size() < t) past.push_back(past_map(q, seed, replica, past.size() + 1));
    // Run every state forward from time -t to 0.
    std::vector<State> points(n);
    for (State i = 0; i < n; ++i) points[i] = i;
    for (std::size_t k = t; k >= 1; --k) {
      for (auto& x : points) x = past[k - 1](x);
    }
    if (std::all_of(points.begin(), points.end(), [&](State x) { return x == points.front(); })) {
      return CftpResult{points.front(), t};
    }
    if (t >= max_horizon) break;
    horizon *= 2;
  }
  throw NoCoalescenceError("coupling from the past did not coalesce within " + std::to_string(max_horizon) +
                           " past steps");
}

CycleReplay replay_cycles(std::span<const State> trajectory) {
  CycleReplay replay;
  if (trajectory.empty()) return replay;
  replay.derived.push_back({{trajectory.front()}});
  replay.cycles.emplace_back(std::nullopt);
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    auto s = derived_step(replay.derived.back(), trajectory[t]);
    replay.derived.push_back(std::move(s.next));
    replay.cycles.push_back(std::move(s.cycle));
  }
  return replay;
}

double EmpiricalCycles::w(const Cycle& c) const {
  auto it = counts.find(c);
  return it == counts.end() || steps == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(steps);
}

double EmpiricalCycles::p(const Cycle& c) const {
  auto it = counts.find(c);
  return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double EmpiricalCycles::mean_length() const {
  if (total == 0) return 0.0;
  double len = 0.0;
  for (const auto& [c, k] : counts) len += static_cast<double>(c.length() * k);
  return len / static_cast<double>(total);
}

EmpiricalCycles count_cycles(std::span<const State> trajectory) {
  EmpiricalCycles ec;
  if (trajectory.empty()) return ec;
  ec.steps = trajectory.size() - 1;
  DerivedChainState eta{{trajectory.front()}};
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    auto s = derived_step(eta, trajectory[t]);
    eta = std::move(s.next);
    if (s.cycle) {
      ++ec.counts[*s.cycle];
      ++ec.total;
    }
  }
  return ec;
}

EmpiricalCycles empirical_cycles(const StochasticMatrix& m, State initial, std::size_t steps, std::uint64_t seed) {
  const auto traj = simulate_mc(m, ProbVector::point_mass(m.size(), initial), steps, seed);
  return count_cycles(traj.states);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "# seed=" << traj.seed << " generator=" << traj.generator << '\n';
  for (State s : traj.states) out << s + 1 << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory traj;
  std::string header;
  if (!std::getline(in, header) || header.rfind("# seed=", 0) != 0) {
    throw ParseError("trajectory must start with '# seed=<seed> generator=<id>'");
  }
  std::istringstream hs(header.substr(7));
  std::string gen;
  if (!(hs >> traj.seed >> gen) || gen.rfind("generator=", 0) != 0) {
    throw ParseError("malformed trajectory header");
  }
  traj.generator = gen.substr(10);
  long long label = 0;
  while (in >> label) {
    if (label < 1) throw ParseError("trajectory labels are 1-indexed");
    traj.states.push_back(static_cast<State>(label - 1));
  }
  if (!in.eof()) throw ParseError("non-numeric trajectory entry");
  return traj;
}

}  // namespace rdsmc
