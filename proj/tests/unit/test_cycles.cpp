#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "rdsmc/cycles.hpp"
#include "rdsmc/entropy.hpp"
#include "rdsmc/rds.hpp"
#include "rdsmc/trees.hpp"

using namespace rdsmc;
using testing::Rng;

namespace {

DerivedChainState ds(std::vector<State> seq) { return DerivedChainState{std::move(seq)}; }

}  // namespace

TEST_CASE("derived_step") {
  auto s = derived_step(ds({1}), 0);
  CHECK(s.next == ds({1, 0}));
  CHECK_FALSE(s.cycle.has_value());

  s = derived_step(ds({1, 0, 2}), 0);
  CHECK(s.next == ds({1, 0}));
  REQUIRE(s.cycle.has_value());
  CHECK(*s.cycle == Cycle({0, 2}));

  s = derived_step(ds({1}), 1);
  CHECK(s.next == ds({1}));
  REQUIRE(s.cycle.has_value());
  CHECK(*s.cycle == Cycle({1}));

  s = derived_step(ds({0, 1, 2, 3}), 1);
  CHECK(s.next == ds({0, 1}));
  CHECK(*s.cycle == Cycle({1, 2, 3}));

  const auto m = testing::from_rows({{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}});
  CHECK_THROWS_AS(derived_step(m, ds({0}), 2), PreconditionError);
  CHECK_NOTHROW(derived_step(m, ds({0}), 1));
}

TEST_CASE("derived chain of the complete 3-state chain") {
  const auto m = testing::complete3();
  const auto chain = build_derived_chain(m, 1);
  const std::vector<DerivedChainState> expected{ds({1}), ds({1, 0}), ds({1, 2}), ds({1, 0, 2}), ds({1, 2, 0})};
  REQUIRE(chain.states == expected);

  Matrix want = Matrix::Zero(5, 5);
  // Rows/cols: [2] [2,1] [2,3] [2,1,3] [2,3,1] in 1-based labels.
  want(0, 0) = m(1, 1), want(0, 1) = m(1, 0), want(0, 2) = m(1, 2);
  want(1, 0) = m(0, 1), want(1, 1) = m(0, 0), want(1, 3) = m(0, 2);
  want(2, 0) = m(2, 1), want(2, 2) = m(2, 2), want(2, 4) = m(2, 0);
  want(3, 0) = m(2, 1), want(3, 1) = m(2, 0), want(3, 3) = m(2, 2);
  want(4, 0) = m(0, 1), want(4, 2) = m(0, 2), want(4, 4) = m(0, 0);
  CHECK(chain.dense() == want);

  std::size_t total = 0;
  for (State i = 0; i < 3; ++i) total += build_derived_chain(m, i).size();
  CHECK(total == 15);
}

TEST_CASE("derived chain of a single state") {
  const auto chain = build_derived_chain(StochasticMatrix::identity(1), 0);
  REQUIRE(chain.size() == 1);
  CHECK(chain.dense()(0, 0) == 1.0);
  const auto pi = derived_stationary(StochasticMatrix::identity(1), 0);
  CHECK(pi.at(ds({0})) == 1.0);
}

TEST_CASE("derived chain states are the simple paths") {
  // Zero diagonal, no edge between states 1 and 3 (1-based).
  const auto m = testing::from_rows(
      {{0, 0.6, 0, 0.4}, {0.3, 0, 0.3, 0.4}, {0, 0.5, 0, 0.5}, {0.2, 0.3, 0.5, 0}});
  const auto chain = build_derived_chain(m, 0);
  std::set<std::vector<State>> got, want;
  for (const auto& s : chain.states) got.insert(s.seq);
  for (const auto& p : testing::brute_simple_paths(m, 0)) want.insert(p);
  CHECK(got == want);

  const Matrix d = chain.dense();
  for (std::size_t a = 0; a < chain.size(); ++a) {
    CHECK(std::abs(d.row(static_cast<Eigen::Index>(a)).sum() - 1.0) <= Tolerances::sum);
    for (const auto& [b, w] : chain.transitions[a]) {
      const auto& from = chain.states[a];
      const auto& to = chain.states[b];
      CHECK(to.size() <= std::min(from.size() + 1, m.size()));
      if (a != b) CHECK(to.size() != from.size());
      CHECK(w == m(from.current(), to.current()));
    }
  }
  std::size_t full = 0;
  for (const auto& s : chain.states) full += (s.size() == m.size()) ? 1 : 0;
  std::size_t hamiltonian = 0;
  for (const auto& p : want) hamiltonian += (p.size() == m.size()) ? 1 : 0;
  CHECK(full == hamiltonian);
}

TEST_CASE("derived chain cap") {
  Rng rng(137);
  CHECK_THROWS_AS(build_derived_chain(testing::random_positive(rng, 6), 0, 100), CapExceededError);
}

TEST_CASE("derived stationary law") {
  const auto m = testing::complete3();
  const auto chain = build_derived_chain(m, 1);
  const auto tree = derived_stationary(m, 1);
  const Vector oracle = testing::eigen_stationary(chain.dense());
  for (std::size_t k = 0; k < chain.size(); ++k)
    CHECK(std::abs(tree.at(chain.states[k]) - oracle(static_cast<Eigen::Index>(k))) <= 1e-10);

  Rng rng(139);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = testing::random_ergodic(rng, 4, 0.5);
    const auto pi = hill_stationary(r).pi;
    for (State i1 = 0; i1 < 4; ++i1) {
      std::vector<double> marginal(4, 0.0);
      for (const auto& [s, p] : derived_stationary(r, i1)) marginal[s.current()] += p;
      for (State i = 0; i < 4; ++i) CHECK(std::abs(marginal[i] - pi[i]) <= 1e-10);
    }
  }
}

TEST_CASE("two-state cycle weights") {
  const double a = 0.3, b = 0.6;
  const auto m = testing::from_rows({{1 - a, a}, {b, 1 - b}});
  const auto cw = cycle_weights(m);
  REQUIRE(cw.entries.size() == 3);
  const double p0 = b / (a + b), p1 = a / (a + b);
  CHECK(std::abs(cw.weight(Cycle({0})) - p0 * (1 - a)) <= 1e-15);
  CHECK(std::abs(cw.weight(Cycle({1})) - p1 * (1 - b)) <= 1e-15);
  CHECK(std::abs(cw.weight(Cycle({0, 1})) - p0 * a) <= 1e-15);
  double norm = 0.0, total = 0.0, psum = 0.0;
  for (const auto& e : cw.entries) {
    norm += e.w * static_cast<double>(e.cycle.length());
    total += e.w;
    psum += e.p;
  }
  CHECK(std::abs(norm - 1.0) <= Tolerances::alg);
  CHECK(std::abs(cw.lambda - 1.0 / total) <= 1e-15);
  CHECK(std::abs(psum - 1.0) <= Tolerances::sum);
}

TEST_CASE("rotation chain cycle weights") {
  const auto m = testing::biased_rotation(3, 0.6, 0.1);
  const auto cw = cycle_weights(m);
  CHECK(cw.weight(Cycle({0, 1, 2})) > cw.weight(Cycle({0, 2, 1})));
  const auto cep = cycle_ep(m, cw);
  CHECK(std::abs(cep.weight_form - ep_rate(m).ep_rate) <= 1e-10);
  CHECK(std::abs(cep.relative_entropy_form - ep_rate(m).ep_rate) <= 1e-10);
}

TEST_CASE("cycle weights match the maxent attractor law") {
  Rng rng(149);
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto m = testing::random_ergodic(rng, n, 0.5);
    const auto cw = cycle_weights(m);
    const double size = expected_attractor_size(maxent_rds(m));
    for (const auto& e : cw.entries) {
      CHECK(std::abs(e.w * size - testing::brute_attractor_weight(m, e.cycle)) <= 1e-10);
    }
  }
}

TEST_CASE("cycle weights are rotation invariant") {
  Rng rng(151);
  const auto m = testing::random_positive(rng, 5);
  const auto cw = cycle_weights(m);
  for (const auto& e : cw.entries) {
    auto rot = e.cycle.states();
    for (std::size_t k = 0; k < rot.size(); ++k) {
      CHECK(std::abs(cycle_weight_at(m, rot, cw.sigma) - e.w) <= Tolerances::alg);
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }
}

TEST_CASE("cycle ranking") {
  const auto cw = cycle_weights(testing::complete3());
  const auto ranked = cw.ranked();
  for (std::size_t k = 1; k < ranked.size(); ++k) {
    CHECK(ranked[k - 1].w >= ranked[k].w);
    if (ranked[k - 1].w == ranked[k].w) CHECK(ranked[k - 1].cycle < ranked[k].cycle);
  }
}

TEST_CASE("circulation identities") {
  const auto two = testing::from_rows({{0.7, 0.3}, {0.4, 0.6}});
  auto d = circulation_identities(two);
  CHECK(d.node <= 1e-12);
  CHECK(d.edge <= 1e-12);

  Rng rng(157);
  for (int trial = 0; trial < 10; ++trial) {
    d = circulation_identities(testing::random_symmetric_support(rng, 4));
    CHECK(d.node <= 1e-10);
    CHECK(d.edge <= 1e-10);
  }

  const auto one = StochasticMatrix::identity(1);
  const auto cw = cycle_weights(one);
  CHECK(cw.weight(Cycle({0})) == 1.0);
  d = circulation_identities(one);
  CHECK(d.node == 0.0);
  CHECK(d.edge == 0.0);
}

TEST_CASE("cycle_ep") {
  Rng rng(163);
  const auto rev = cycle_ep(testing::random_reversible(rng, 4));
  CHECK(std::abs(rev.weight_form) <= Tolerances::alg);
  CHECK(std::abs(rev.relative_entropy_form) <= Tolerances::alg);

  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_symmetric_support(rng, 4);
    const double ep = ep_rate(m).forms.ratio;
    const auto c = cycle_ep(m);
    CHECK(std::abs(c.weight_form - ep) <= 1e-10);
    CHECK(std::abs(c.relative_entropy_form - ep) <= 1e-10);
  }
  CHECK_THROWS_AS(cycle_ep(testing::biased_rotation(3, 1.0, 0.0)), PreconditionError);
}
