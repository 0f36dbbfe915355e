#include "rdsmc/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rdsmc {

// ---------------------------------------------------------------------------
// Cycle

Cycle::Cycle(std::vector<std::size_t> states) : seq_(std::move(states)) {
  if (seq_.empty()) throw PreconditionError("cycle must contain at least one state");
  std::vector<std::size_t> sorted = seq_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("cycle states must be distinct");
  }
  std::rotate(seq_.begin(), std::min_element(seq_.begin(), seq_.end()), seq_.end());
}

Cycle Cycle::reversed() const {
  std::vector<std::size_t> rev(seq_.rbegin(), seq_.rend());
  return Cycle(std::move(rev));
}

bool Cycle::contains(std::size_t i) const noexcept {
  return std::find(seq_.begin(), seq_.end(), i) != seq_.end();
}

bool Cycle::has_edge(std::size_t i, std::size_t j) const noexcept {
  const std::size_t t = seq_.size();
  for (std::size_t k = 0; k < t; ++k) {
    if (seq_[k] == i && seq_[(k + 1) % t] == j) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// ProbVector

namespace {

void validate_distribution(std::span<const double> p) {
  if (p.empty()) throw DimensionError("probability vector must be non-empty");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw PreconditionError("probability entry " + std::to_string(i + 1) +
                              " is negative or not finite");
    }
    total += p[i];
  }
  if (std::abs(total - 1.0) > Tolerances::sum) {
    throw PreconditionError("probability vector sums to " + std::to_string(total));
  }
}

}  // namespace

ProbVector::ProbVector(std::vector<double> entries) : p_(std::move(entries)) {
  validate_distribution(p_);
}

ProbVector::ProbVector(const Vector& entries)
    : ProbVector(std::vector<double>(entries.data(), entries.data() + entries.size())) {}

ProbVector ProbVector::uniform(std::size_t n) {
  if (n == 0) throw DimensionError("state space must be non-empty");
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, State i) {
  if (i >= n) throw DimensionError("point mass outside the state space");
  std::vector<double> p(n, 0.0);
  p[i] = 1.0;
  return ProbVector(std::move(p));
}

Vector ProbVector::to_vector() const {
  return Eigen::Map<const Vector>(p_.data(), static_cast<Eigen::Index>(p_.size()));
}

bool ProbVector::strictly_positive() const noexcept {
  return std::all_of(p_.begin(), p_.end(), [](double x) { return x > 0.0; });
}

// ---------------------------------------------------------------------------
// StochasticMatrix

StochasticMatrix::StochasticMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw DimensionError("transition matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const double x = m_(i, j);
      if (!std::isfinite(x) || x < 0.0) {
        throw PreconditionError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") is negative or not finite");
      }
      total += x;
    }
    if (std::abs(total - 1.0) > Tolerances::sum) {
      throw PreconditionError("row " + std::to_string(i + 1) + " sums to " + std::to_string(total));
    }
  }
  for (auto& f : flags_) f.store(-1, std::memory_order_relaxed);
}

void StochasticMatrix::copy_flags(const StochasticMatrix& other) noexcept {
  for (std::size_t k = 0; k < kFlagCount; ++k) {
    flags_[k].store(other.flags_[k].load(std::memory_order_relaxed), std::memory_order_relaxed);
  }
}

StochasticMatrix::StochasticMatrix(const StochasticMatrix& other) : m_(other.m_) { copy_flags(other); }

StochasticMatrix& StochasticMatrix::operator=(const StochasticMatrix& other) {
  if (this != &other) {
    m_ = other.m_;
    copy_flags(other);
  }
  return *this;
}

StochasticMatrix::StochasticMatrix(StochasticMatrix&& other) noexcept : m_(std::move(other.m_)) {
  copy_flags(other);
}

StochasticMatrix& StochasticMatrix::operator=(StochasticMatrix&& other) noexcept {
  if (this != &other) {
    m_ = std::move(other.m_);
    copy_flags(other);
  }
  return *this;
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return StochasticMatrix(Matrix::Identity(k, k));
}

StochasticMatrix StochasticMatrix::transpose() const { return StochasticMatrix(Matrix(m_.transpose())); }

template <class Compute>
bool StochasticMatrix::cached(Flag flag, Compute&& compute) const {
  const std::int8_t known = flags_[flag].load(std::memory_order_acquire);
  if (known >= 0) return known == 1;
  const bool value = compute();
  flags_[flag].store(value ? 1 : 0, std::memory_order_release);
  return value;
}

namespace {

// Breadth-first distances from `source` following positive entries, in the
// forward or reversed direction. Unreached states get -1.
std::vector<long> bfs_levels(const Matrix& m, std::size_t source, bool reverse) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{source};
  level[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v = 0; v < n; ++v) {
      const double w = reverse ? m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u))
                               : m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (w > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level;
}

}  // namespace

bool StochasticMatrix::irreducible() const {
  return cached(kIrreducible, [this] {
    const auto fwd = bfs_levels(m_, 0, false);
    const auto bwd = bfs_levels(m_, 0, true);
    return std::none_of(fwd.begin(), fwd.end(), [](long l) { return l < 0; }) &&
           std::none_of(bwd.begin(), bwd.end(), [](long l) { return l < 0; });
  });
}

bool StochasticMatrix::aperiodic() const {
  return cached(kAperiodic, [this] {
    // Period of the class containing state 0: gcd of level[u] + 1 - level[v]
    // over edges u -> v inside the reachable set.
    const auto level = bfs_levels(m_, 0, false);
    const auto n = static_cast<std::size_t>(m_.rows());
    long g = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (level[u] < 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if ((*this)(u, v) > 0.0 && level[v] >= 0) {
          g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
        }
      }
    }
    return g == 1;
  });
}

bool StochasticMatrix::doubly_stochastic() const {
  return cached(kDoubly, [this] {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (std::abs(m_.col(j).sum() - 1.0) > Tolerances::sum) return false;
    }
    return true;
  });
}

std::optional<std::pair<State, State>> StochasticMatrix::support_asymmetry() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((*this)(i, j) > 0.0 && !((*this)(j, i) > 0.0)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

bool StochasticMatrix::support_symmetric() const {
  return cached(kSymmetric, [this] { return !support_asymmetry().has_value(); });
}

void StochasticMatrix::require_support_symmetric() const {
  if (support_symmetric()) return;
  const auto [i, j] = *support_asymmetry();
  throw SupportAsymmetryError(i, j);
}

void StochasticMatrix::require_ergodic() const {
  if (!irreducible()) throw NotErgodicError("transition matrix is reducible");
  if (!aperiodic()) throw NotErgodicError("transition matrix is periodic");
}

// ---------------------------------------------------------------------------
// DeterministicMap

DeterministicMap::DeterministicMap(std::vector<State> image) : image_(std::move(image)) {
  const std::size_t n = image_.size();
  if (n == 0) throw DimensionError("map must act on a non-empty state space");
  std::vector<bool> hit(n, false);
  permutation_ = true;
  for (State i = 0; i < n; ++i) {
    if (image_[i] >= n) {
      throw PreconditionError("map image of state " + std::to_string(i + 1) + " is outside 1.." +
                              std::to_string(n));
    }
    if (hit[image_[i]]) permutation_ = false;
    hit[image_[i]] = true;
  }
}

DeterministicMap DeterministicMap::identity(std::size_t n) {
  std::vector<State> image(n);
  std::iota(image.begin(), image.end(), State{0});
  return DeterministicMap(std::move(image));
}

DeterministicMap DeterministicMap::constant(std::size_t n, State target) {
  return DeterministicMap(std::vector<State>(n, target));
}

DeterministicMap DeterministicMap::inverse() const {
  if (!permutation_) throw PreconditionError("map is not invertible");
  std::vector<State> inv(image_.size());
  for (State i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return DeterministicMap(std::move(inv));
}

StochasticMatrix map_to_matrix(const DeterministicMap& alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, static_cast<Eigen::Index>(alpha(static_cast<State>(i)))) = 1.0;
  return StochasticMatrix(std::move(p));
}

DeterministicMap compose_maps(const DeterministicMap& alpha, const DeterministicMap& beta) {
  if (alpha.size() != beta.size()) throw DimensionError("composed maps act on different state spaces");
  std::vector<State> image(alpha.size());
  for (State i = 0; i < alpha.size(); ++i) image[i] = beta(alpha(i));
  return DeterministicMap(std::move(image));
}

std::vector<Cycle> functional_cycles(const DeterministicMap& alpha) {
  const std::size_t n = alpha.size();
  // 0 = unvisited, 1 = on the current walk, 2 = finished
  std::vector<std::uint8_t> color(n, 0);
  std::vector<Cycle> cycles;
  std::vector<State> walk;
  for (State start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    walk.clear();
    State x = start;
    while (color[x] == 0) {
      color[x] = 1;
      walk.push_back(x);
      x = alpha(x);
    }
    if (color[x] == 1) {
      auto first = std::find(walk.begin(), walk.end(), x);
      cycles.emplace_back(std::vector<State>(first, walk.end()));
    }
    for (State y : walk) color[y] = 2;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

AttractorInfo map_attractor(const DeterministicMap& alpha) {
  auto cycles = functional_cycles(alpha);
  AttractorInfo info;
  if (cycles.size() != 1) return info;
  info.size = cycles.front().length();
  info.kind = info.size == 1 ? AttractorKind::FixedPoint : AttractorKind::LimitCycle;
  info.cycle = std::move(cycles.front());
  return info;
}

Vector left_multiply(const Vector& v, const StochasticMatrix& m) {
  if (static_cast<std::size_t>(v.size()) != m.size()) throw DimensionError("vector length does not match matrix");
  return m.matrix().transpose() * v;
}

}  // namespace rdsmc
