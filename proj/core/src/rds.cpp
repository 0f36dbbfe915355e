#include "rdsmc/rds.hpp"

#include <cmath>
#include <string>

namespace rdsmc {

RDSMeasure::RDSMeasure(std::vector<WeightedMap> support) {
  if (support.empty()) throw PreconditionError("RDS measure needs a non-empty support");
  n_ = support.front().map.size();
  std::map<DeterministicMap, std::size_t> index;
  double total = 0.0;
  for (auto& [alpha, w] : support) {
    if (alpha.size() != n_) throw DimensionError("RDS support mixes state-space sizes");
    if (!std::isfinite(w) || w < 0.0) throw PreconditionError("RDS weights must be non-negative");
    total += w;
    auto [it, inserted] = index.try_emplace(alpha, support_.size());
    if (inserted) {
      support_.push_back({std::move(alpha), w});
    } else {
      support_[it->second].weight += w;
    }
  }
  if (std::abs(total - 1.0) > Tolerances::sum) {
    throw PreconditionError("RDS weights sum to " + std::to_string(total));
  }
}

RDSMeasure RDSMeasure::point_mass(DeterministicMap alpha) {
  std::vector<WeightedMap> s;
  s.push_back({std::move(alpha), 1.0});
  return RDSMeasure(std::move(s));
}

double RDSMeasure::weight_of(const DeterministicMap& alpha) const {
  for (const auto& wm : support_) {
    if (wm.map == alpha) return wm.weight;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

MaxEntRDS::MaxEntRDS(StochasticMatrix base) : base_(std::move(base)) {}

double MaxEntRDS::weight(const DeterministicMap& alpha) const {
  if (alpha.size() != base_.size()) throw DimensionError("map and matrix sizes differ");
  double w = 1.0;
  for (State i = 0; i < alpha.size(); ++i) w *= base_(i, alpha(i));
  return w;
}

MaxEntRDS::Enumerator::Enumerator(const StochasticMatrix& m, bool include_zero) : m_(&m) {
  const std::size_t n = m.size();
  choices_.resize(n);
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      if (include_zero || m(i, j) > 0.0) choices_[i].push_back(j);
    }
  }
  digits_.assign(n, 0);
}

bool MaxEntRDS::Enumerator::next(WeightedMap& out) {
  if (done_) return false;
  const std::size_t n = choices_.size();
  std::vector<State> image(n);
  double w = 1.0;
  for (State i = 0; i < n; ++i) {
    image[i] = choices_[i][digits_[i]];
    w *= (*m_)(i, image[i]);
  }
  out.map = DeterministicMap(std::move(image));
  out.weight = w;
  // Odometer with the last state as the fastest digit: lexicographic order.
  std::size_t k = n;
  while (k > 0) {
    --k;
    if (++digits_[k] < choices_[k].size()) return true;
    digits_[k] = 0;
  }
  done_ = true;
  return true;
}

MaxEntRDS::Enumerator MaxEntRDS::enumerate(bool include_zero) const {
  if (base_.size() > kEnumerationCap) {
    throw CapExceededError("maximum-entropy enumeration refused for n = " + std::to_string(base_.size()) +
                           " (cap " + std::to_string(kEnumerationCap) + ")");
  }
  return Enumerator(base_, include_zero);
}

MaxEntRDS::Enumerator MaxEntRDS::stream(bool include_zero) const { return Enumerator(base_, include_zero); }

MaxEntRDS maxent_rds(const StochasticMatrix& m) { return MaxEntRDS(m); }

// ---------------------------------------------------------------------------

namespace {

template <class Visit>
void visit_support(const RDSMeasure& q, Visit&& visit) {
  for (const auto& [alpha, w] : q.support()) visit(alpha, w);
}

template <class Visit>
void visit_support(const MaxEntRDS& q, Visit&& visit) {
  q.for_each(visit);
}

template <class Q>
StochasticMatrix induce(const Q& q) {
  const auto n = static_cast<Eigen::Index>(q.state_count());
  Matrix m = Matrix::Zero(n, n);
  visit_support(q, [&](const DeterministicMap& alpha, double w) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(alpha(static_cast<State>(i)))) += w;
  });
  return StochasticMatrix(std::move(m));
}

template <class Q>
double entropy_of(const Q& q) {
  double h = 0.0;
  visit_support(q, [&](const DeterministicMap&, double w) {
    if (w > 0.0) h -= w * std::log(w);
  });
  return h;
}

template <class Q>
double attractor_mean(const Q& q) {
  double e = 0.0;
  visit_support(q, [&](const DeterministicMap& alpha, double w) {
    if (w > 0.0) e += w * static_cast<double>(map_attractor(alpha).size);
  });
  return e;
}

template <class Q>
std::map<Cycle, double> attractors(const Q& q) {
  std::map<Cycle, double> law;
  visit_support(q, [&](const DeterministicMap& alpha, double w) {
    if (w <= 0.0) return;
    auto info = map_attractor(alpha);
    if (info.cycle) law[*info.cycle] += w;
  });
  return law;
}

}  // namespace

StochasticMatrix induce_markov(const RDSMeasure& q) { return induce(q); }
StochasticMatrix induce_markov(const MaxEntRDS& q) { return induce(q); }

double rds_metric_entropy(const RDSMeasure& q) { return entropy_of(q); }
double rds_metric_entropy(const MaxEntRDS& q) { return entropy_of(q); }

double expected_attractor_size(const RDSMeasure& q) { return attractor_mean(q); }
double expected_attractor_size(const MaxEntRDS& q) { return attractor_mean(q); }

std::map<Cycle, double> attractor_law(const RDSMeasure& q) { return attractors(q); }
std::map<Cycle, double> attractor_law(const MaxEntRDS& q) { return attractors(q); }

}  // namespace rdsmc
