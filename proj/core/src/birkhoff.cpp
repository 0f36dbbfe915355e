#include "rdsmc/birkhoff.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace rdsmc {

InvertibleRDSMeasure::InvertibleRDSMeasure(RDSMeasure q) : q_(std::move(q)) {
  for (const auto& wm : q_.support()) {
    if (!wm.map.is_permutation()) throw PreconditionError("invertible RDS contains a non-bijective map");
  }
}

namespace {

// Kuhn's augmenting-path matching on the bipartite graph rows -> columns with
// edges where support(i, j) holds. Rows are processed in order and columns
// tried in increasing order, so the result is deterministic.
class Matcher {
 public:
  explicit Matcher(const Matrix& residual) : r_(residual), n_(static_cast<std::size_t>(residual.rows())) {}

  std::optional<std::vector<State>> perfect_matching() {
    col_owner_.assign(n_, kNone);
    for (State i = 0; i < n_; ++i) {
      seen_.assign(n_, false);
      if (!augment(i)) return std::nullopt;
    }
    std::vector<State> row_to_col(n_);
    for (State j = 0; j < n_; ++j) row_to_col[col_owner_[j]] = j;
    return row_to_col;
  }

 private:
  static constexpr State kNone = static_cast<State>(-1);

  bool augment(State i) {
    for (State j = 0; j < n_; ++j) {
      if (r_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) <= 0.0 || seen_[j]) continue;
      seen_[j] = true;
      if (col_owner_[j] == kNone || augment(col_owner_[j])) {
        col_owner_[j] = i;
        return true;
      }
    }
    return false;
  }

  const Matrix& r_;
  std::size_t n_;
  std::vector<State> col_owner_;
  std::vector<bool> seen_;
};

}  // namespace

InvertibleRDSMeasure birkhoff_decompose(const StochasticMatrix& m) {
  if (!m.doubly_stochastic()) throw PreconditionError("Birkhoff decomposition needs a doubly stochastic matrix");
  const auto n = static_cast<Eigen::Index>(m.size());
  Matrix residual = m.matrix();
  auto scrub = [&] {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (residual(i, j) <= Tolerances::alg) residual(i, j) = 0.0;
  };
  scrub();

  std::vector<WeightedMap> support;
  double total = 0.0;
  const std::size_t max_rounds = static_cast<std::size_t>(n * n) + 1;
  while (residual.maxCoeff() > 0.0 && support.size() < max_rounds) {
    auto matching = Matcher(residual).perfect_matching();
    if (!matching) break;  // only dust without a perfect matching is left
    double theta = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) theta = std::min(theta, residual(i, static_cast<Eigen::Index>((*matching)[static_cast<std::size_t>(i)])));
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& x = residual(i, static_cast<Eigen::Index>((*matching)[static_cast<std::size_t>(i)]));
      x = (x == theta) ? 0.0 : x - theta;
    }
    scrub();
    support.push_back({DeterministicMap(std::move(*matching)), theta});
    total += theta;
  }
  if (support.empty() || total <= 0.0) throw ConsistencyError("Birkhoff decomposition found no permutation");
  for (auto& wm : support) wm.weight /= total;
  return InvertibleRDSMeasure(RDSMeasure(std::move(support)));
}

DualMeasure dual_measure(const InvertibleRDSMeasure& q) {
  std::vector<WeightedMap> dual;
  dual.reserve(q.support().size());
  for (const auto& [alpha, w] : q.support()) dual.push_back({alpha.inverse(), w});
  return DualMeasure(RDSMeasure(std::move(dual)));
}

double ep_upper_bound(const InvertibleRDSMeasure& q) {
  double h = 0.0;
  for (const auto& [alpha, w] : q.support()) {
    if (w <= 0.0) continue;
    const double w_inv = q.weight_of(alpha.inverse());
    if (w_inv <= 0.0) return std::numeric_limits<double>::infinity();
    h += w * std::log(w / w_inv);
  }
  return h;
}

}  // namespace rdsmc
