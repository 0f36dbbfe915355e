#pragma once

#include <cstddef>
#include <vector>

#include "rdsmc/core.hpp"

namespace rdsmc {

// All quantities are in nats. Sums follow 0 log 0 = 0; a term p log(p/q) with
// p > 0 and q = 0 makes the result +infinity.

double shannon(const ProbVector& p);

/// H(p, q) = sum p_i log(p_i / q_i); +infinity unless p << q.
double rel_entropy(const ProbVector& p, const ProbVector& q);

/// Solves (I - M^T) pi = 0 with sum(pi) = 1 appended as an extra row, then
/// cross-checks against the matrix-tree route; a max-norm disagreement above
/// 1e-8 raises ConsistencyError. Requires an irreducible chain.
ProbVector stationary_distribution(const StochasticMatrix& m);

/// H(p(t), pi) for t = 0..steps, p(t) = p0 M^t. Requires an ergodic chain.
std::vector<double> check_h_monotone(const StochasticMatrix& m, const ProbVector& p0, std::size_t steps);

/// Entropy balance of one step: delta_s = S(pM) - S(p) splits into a
/// non-negative production term and a heat-exchange term.
struct DeltaSDecomposition {
  double delta_s = 0.0;
  double ep_term = 0.0;
  double heat_term = 0.0;
};

/// Requires symmetric support.
DeltaSDecomposition delta_s_decompose(const StochasticMatrix& m, const ProbVector& p);

/// Mean internal energy sum p_i (-log pi_i) relative to the stationary law.
double internal_energy(const ProbVector& p, const ProbVector& pi);

/// internal_energy(p, pi) - S(p); equals H(p, pi). Throws if some pi_i == 0.
double free_energy(const ProbVector& p, const StochasticMatrix& m);

/// Shannon entropy of the path law on [0, t] started from p0 (closed form).
double hsk(const StochasticMatrix& m, const ProbVector& p0, std::size_t t);

/// h_MC = -sum pi_i M_ij log M_ij.
double metric_entropy_mc(const StochasticMatrix& m, const ProbVector& pi);
double metric_entropy_mc(const StochasticMatrix& m);

/// Transition matrix of the reversed process over one step:
/// M-_ij = p_prev_j M_ji / p_next_i. Requires p_next > 0 entrywise.
StochasticMatrix time_reversed(const StochasticMatrix& m, const ProbVector& p_prev, const ProbVector& p_next);
/// Stationary case M-_ij = pi_j M_ji / pi_i.
StochasticMatrix time_reversed(const StochasticMatrix& m);

/// KL divergence between the path law on [0, t] and its time reversal, using
/// the telescoped closed form. Requires symmetric support and p0 > 0.
double path_rel_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t);

/// The equivalent closed forms of the stationary entropy production rate.
struct EpForms {
  double ratio = 0.0;     // sum pi_i M_ij log(M_ij / M_ji)
  double pi_ratio = 0.0;  // sum pi_i M_ij log(pi_i M_ij / (pi_j M_ji))
  double reversed = 0.0;  // sum pi_i M_ij log(M_ij / M-_ij)
  double half_sum = 0.0;  // 1/2 sum (J_ij - J_ji) log(J_ij / J_ji)
};

struct EpReport {
  /// Reported rate. Snapped to exactly 0 when detailed_balance holds.
  double ep_rate = 0.0;
  bool detailed_balance = false;
  EpForms forms;
  ProbVector pi = ProbVector::uniform(1);
  /// Stationary edge fluxes pi_i M_ij.
  Matrix flux;
};

/// Stationary entropy production rate. All four forms are evaluated and must
/// agree within Tolerances::alg (relative to max(1, e_p)), else
/// ConsistencyError. detailed_balance <=> raw e_p <= Tolerances::alg.
/// Requires an ergodic chain with symmetric support.
EpReport ep_rate(const StochasticMatrix& m);

/// Entropy produced in step t -> t+1 of the path relative entropy:
/// sum p_i(t) M_ij log(p_i(0) M_ij / (p_j(0) M_ji)).
double ep_step(const StochasticMatrix& m, const ProbVector& p0, std::size_t t);

/// sum p_i(t-1) M_ij log(p_i(t-1) M_ij / (p_j(t) M-_ji)) with M- the
/// stationary reversal; equals H(p(t-1), pi) - H(p(t), pi).
double nonstationarity_gap(const StochasticMatrix& m, const ProbVector& p_prev);

/// p M, renormalized against rounding drift.
ProbVector step(const StochasticMatrix& m, const ProbVector& p);

}  // namespace rdsmc
