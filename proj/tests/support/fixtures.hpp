#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rdsmc/birkhoff.hpp"
#include "rdsmc/core.hpp"
#include "rdsmc/rds.hpp"
#include "rdsmc/simulate.hpp"

namespace rdsmc::testing {

using Rng = std::mt19937_64;

/// Strictly positive probability vector.
ProbVector random_prob(Rng& rng, std::size_t n);

/// Every entry strictly positive.
StochasticMatrix random_positive(Rng& rng, std::size_t n);

/// Random sparse support containing the ring 0 -> 1 -> ... -> 0 and a self
/// loop at 0, so the chain is ergodic.
StochasticMatrix random_ergodic(Rng& rng, std::size_t n, double density = 0.5);

/// Ergodic with M_ij > 0 iff M_ji > 0; generally not reversible.
StochasticMatrix random_symmetric_support(Rng& rng, std::size_t n, double density = 0.6);

/// Reversible: M_ij = W_ij / sum_k W_ik with W symmetric and positive.
StochasticMatrix random_reversible(Rng& rng, std::size_t n);

/// Sinkhorn scaling of a positive matrix to double stochasticity.
StochasticMatrix sinkhorn(Matrix a, int iterations = 2000);

DeterministicMap random_map(Rng& rng, std::size_t n);
DeterministicMap random_permutation(Rng& rng, std::size_t n);

/// Invertible RDS whose support contains the identity, the rotation
/// i -> i+1 and random permutations, closed under inversion so the induced
/// chain is ergodic with symmetric support. When `self_dual`, every map and
/// its inverse carry equal weight.
InvertibleRDSMeasure random_invertible(Rng& rng, std::size_t n, std::size_t extra, bool self_dual);

/// Biased rotation on n states: forward a, backward b, stay 1 - a - b.
StochasticMatrix biased_rotation(std::size_t n, double a, double b);

StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows);

// ---- brute-force oracles ----

/// Stationary law from the eigenvector of M^T for the eigenvalue closest to 1.
Vector eigen_stationary(const Matrix& m);

/// Sum over all parent assignments of the non-roots; acyclic ones count.
double brute_forest_weight(const StochasticMatrix& m, const std::vector<State>& roots);

/// Total weight of the single-loop graphs whose cycle passes through j:
/// every state has one outgoing non-self edge and there is exactly one cycle.
double brute_single_loop_weight(const StochasticMatrix& m, State j);

/// sum over all n^n maps of prod M(i, a(i)) * single-attractor size.
double brute_attractor_size(const StochasticMatrix& m);

/// Maxent weight of maps whose single attractor is the given cycle.
double brute_attractor_weight(const StochasticMatrix& m, const Cycle& c);

/// Shannon entropy of the path law on [0, t] by summing all n^(t+1) paths.
double brute_path_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t);

/// KL between the path law and the reversed-path law started from p0.
double brute_path_rel_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t);

/// All simple paths from `start` along positive edges.
std::vector<std::vector<State>> brute_simple_paths(const StochasticMatrix& m, State start);

// ---- statistics ----

/// Upper 1% critical value of the chi-square law for df = 1..30.
double chi_square_critical_001(std::size_t df);

struct BatchEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Asymptotic variance of the time average of 1{X_t = i} for a stationary
/// ergodic chain: pi_i (2 Z_ii - 1 - pi_i), Z = (I - M + 1 pi)^-1.
double occupation_variance(const StochasticMatrix& m, const ProbVector& pi, State i);

/// Mean of the batch values and the standard error of that mean.
BatchEstimate batch_means(const std::vector<double>& batches);

// ---- fixtures ----

/// The four maps on two states: identity, swap, all to 1, all to 2.
std::vector<DeterministicMap> two_state_maps();

/// Q = (0.2, 0.2, 0.3, 0.3) on two_state_maps().
RDSMeasure two_state_iid();

/// Map chain over two_state_maps() started from (0.5, 0.5, 0, 0). The
/// identity is never followed by the swap. Every row gives the identity and
/// the swap equal weight and the two constant maps equal weight, so the
/// one-point motion is Markov with M = [[.5,.5],[.5,.5]].
MarkovDrivenSource two_state_markov_source();

/// Dense 3-state fixture with distinct entries.
StochasticMatrix complete3();

}  // namespace rdsmc::testing
