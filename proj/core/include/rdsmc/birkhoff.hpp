#pragma once

#include "rdsmc/core.hpp"
#include "rdsmc/rds.hpp"

namespace rdsmc {

/// An RDS measure supported on permutations (an invertible RDS). Its induced
/// chain is doubly stochastic.
class InvertibleRDSMeasure {
 public:
  /// Throws PreconditionError if any support map is not a bijection.
  explicit InvertibleRDSMeasure(RDSMeasure q);
  explicit InvertibleRDSMeasure(std::vector<WeightedMap> support)
      : InvertibleRDSMeasure(RDSMeasure(std::move(support))) {}

  const RDSMeasure& measure() const noexcept { return q_; }
  const std::vector<WeightedMap>& support() const noexcept { return q_.support(); }
  std::size_t state_count() const noexcept { return q_.state_count(); }
  double weight_of(const DeterministicMap& alpha) const { return q_.weight_of(alpha); }

 private:
  RDSMeasure q_;
};

/// Time-reversal dual: Q-(alpha) = Q(alpha^-1). Same shape as the original.
using DualMeasure = InvertibleRDSMeasure;

/// Writes a doubly stochastic M as a convex combination of permutation
/// matrices. Each round finds a perfect matching on the positive entries
/// (augmenting paths, smallest column first), peels off its minimum entry and
/// repeats. Entries at or below Tolerances::alg are treated as zero and the
/// weights are renormalized at the end.
InvertibleRDSMeasure birkhoff_decompose(const StochasticMatrix& m);

DualMeasure dual_measure(const InvertibleRDSMeasure& q);

/// H(Q, Q-) = sum Q(alpha) log(Q(alpha) / Q(alpha^-1)). +infinity when some
/// map carries weight but its inverse does not.
double ep_upper_bound(const InvertibleRDSMeasure& q);

}  // namespace rdsmc
