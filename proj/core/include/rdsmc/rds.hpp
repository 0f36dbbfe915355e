#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "rdsmc/core.hpp"

namespace rdsmc {

struct WeightedMap {
  DeterministicMap map;
  double weight = 0.0;
};

/// A probability measure on deterministic maps with finite support.
/// Repeated maps are merged at construction by summing their weights.
class RDSMeasure {
 public:
  explicit RDSMeasure(std::vector<WeightedMap> support);

  static RDSMeasure point_mass(DeterministicMap alpha);

  std::size_t state_count() const noexcept { return n_; }
  const std::vector<WeightedMap>& support() const noexcept { return support_; }
  /// Q(alpha); zero for maps outside the support.
  double weight_of(const DeterministicMap& alpha) const;

 private:
  std::size_t n_ = 0;
  std::vector<WeightedMap> support_;
};

/// The maximum-entropy RDS of a transition matrix. Map weights factor over
/// rows: Q(i -> image(i) for all i) = prod_i M(i, image(i)). The n^n support
/// is never stored; it is streamed in lexicographic image order.
class MaxEntRDS {
 public:
  /// Largest n for which full enumeration is allowed.
  static constexpr std::size_t kEnumerationCap = 7;

  explicit MaxEntRDS(StochasticMatrix base);

  const StochasticMatrix& base() const noexcept { return base_; }
  std::size_t state_count() const noexcept { return base_.size(); }
  double weight(const DeterministicMap& alpha) const;

  /// Single-consumer odometer over the support.
  class Enumerator {
   public:
    /// Writes the next map and its weight; false once exhausted.
    bool next(WeightedMap& out);

   private:
    friend class MaxEntRDS;
    Enumerator(const StochasticMatrix& m, bool include_zero);

    const StochasticMatrix* m_;
    std::vector<std::vector<State>> choices_;
    std::vector<std::size_t> digits_;
    bool done_ = false;
  };

  /// Enumerates positive-weight maps (or all n^n maps when include_zero).
  /// Throws CapExceededError for n > kEnumerationCap.
  Enumerator enumerate(bool include_zero = false) const;
  /// Same as enumerate() without the cap; the caller owns the cost.
  Enumerator stream(bool include_zero = false) const;

  template <class F>
  void for_each(F&& f, bool include_zero = false) const {
    auto e = enumerate(include_zero);
    WeightedMap wm{DeterministicMap::identity(state_count()), 0.0};
    while (e.next(wm)) f(wm.map, wm.weight);
  }

 private:
  StochasticMatrix base_;
};

MaxEntRDS maxent_rds(const StochasticMatrix& m);

/// M(i,j) = Q(alpha : alpha(i) = j).
StochasticMatrix induce_markov(const RDSMeasure& q);
StochasticMatrix induce_markov(const MaxEntRDS& q);

/// -sum Q log Q over the support, in nats.
double rds_metric_entropy(const RDSMeasure& q);
double rds_metric_entropy(const MaxEntRDS& q);

/// E^Q of the single-attractor size (0 for maps with several cycles).
double expected_attractor_size(const RDSMeasure& q);
double expected_attractor_size(const MaxEntRDS& q);

/// Q(alpha : attractor(alpha) = c) for every cycle c that occurs as a single
/// attractor.
std::map<Cycle, double> attractor_law(const RDSMeasure& q);
std::map<Cycle, double> attractor_law(const MaxEntRDS& q);

}  // namespace rdsmc
