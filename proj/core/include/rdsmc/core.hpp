#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rdsmc/cycle.hpp"
#include "rdsmc/errors.hpp"

namespace rdsmc {

using State = std::size_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Numeric tolerances shared by the whole library. Statistical bounds are
/// chosen per test and are not listed here.
struct Tolerances {
  /// Normalization of probability vectors and stochastic rows/columns.
  static constexpr double sum = 1e-9;
  /// Algebraic identity checks.
  static constexpr double alg = 1e-10;
};

/// A probability vector over n states.
class ProbVector {
 public:
  /// Validates non-negativity and |sum - 1| <= Tolerances::sum.
  explicit ProbVector(std::vector<double> entries);
  explicit ProbVector(const Vector& entries);

  static ProbVector uniform(std::size_t n);
  static ProbVector point_mass(std::size_t n, State i);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](State i) const { return p_[i]; }
  std::span<const double> entries() const noexcept { return p_; }
  const std::vector<double>& values() const noexcept { return p_; }
  Vector to_vector() const;

  /// True when every entry is strictly positive.
  bool strictly_positive() const noexcept;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> p_;
};

/// Row-stochastic n x n matrix. Structural flags are computed on first use
/// and cached; the cache is idempotent so concurrent readers are safe.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix m);

  StochasticMatrix(const StochasticMatrix& other);
  StochasticMatrix& operator=(const StochasticMatrix& other);
  StochasticMatrix(StochasticMatrix&& other) noexcept;
  StochasticMatrix& operator=(StochasticMatrix&& other) noexcept;
  ~StochasticMatrix() = default;

  static StochasticMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(State i, State j) const { return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const Matrix& matrix() const noexcept { return m_; }
  StochasticMatrix transpose() const;

  bool irreducible() const;
  bool aperiodic() const;
  bool ergodic() const { return irreducible() && aperiodic(); }
  /// Columns also sum to one within Tolerances::sum.
  bool doubly_stochastic() const;
  /// M(i,j) > 0 exactly when M(j,i) > 0.
  bool support_symmetric() const;
  /// First (row-major) pair with M(i,j) > 0 and M(j,i) == 0.
  std::optional<std::pair<State, State>> support_asymmetry() const;

  /// Throws SupportAsymmetryError naming the first violation.
  void require_support_symmetric() const;
  /// Throws NotErgodicError unless irreducible and aperiodic.
  void require_ergodic() const;

 private:
  enum Flag : std::size_t { kIrreducible, kAperiodic, kDoubly, kSymmetric, kFlagCount };
  template <class Compute>
  bool cached(Flag flag, Compute&& compute) const;
  void copy_flags(const StochasticMatrix& other) noexcept;

  Matrix m_;
  // -1 unknown, 0 false, 1 true
  mutable std::array<std::atomic<std::int8_t>, kFlagCount> flags_{};
};

/// Total function on {0..n-1}, stored as its image array.
class DeterministicMap {
 public:
  explicit DeterministicMap(std::vector<State> image);

  static DeterministicMap identity(std::size_t n);
  static DeterministicMap constant(std::size_t n, State target);

  std::size_t size() const noexcept { return image_.size(); }
  State operator()(State i) const { return image_[i]; }
  const std::vector<State>& image() const noexcept { return image_; }

  bool is_permutation() const noexcept { return permutation_; }
  /// Throws PreconditionError for non-bijections.
  DeterministicMap inverse() const;

  friend bool operator==(const DeterministicMap& a, const DeterministicMap& b) {
    return a.image_ == b.image_;
  }
  friend auto operator<=>(const DeterministicMap& a, const DeterministicMap& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<State> image_;
  bool permutation_ = false;
};

/// The 0-1 matrix with a single 1 per row at column alpha(i).
StochasticMatrix map_to_matrix(const DeterministicMap& alpha);

/// (alpha then beta): result(i) = beta(alpha(i)), so that
/// P_result = P_alpha * P_beta.
DeterministicMap compose_maps(const DeterministicMap& alpha, const DeterministicMap& beta);

enum class AttractorKind { FixedPoint, LimitCycle, NonSingle };

struct AttractorInfo {
  AttractorKind kind = AttractorKind::NonSingle;
  std::optional<Cycle> cycle;
  /// Cycle length when single, 0 otherwise.
  std::size_t size = 0;
};

/// Every cycle of the functional graph of alpha, canonicalized, in order of
/// their smallest state.
std::vector<Cycle> functional_cycles(const DeterministicMap& alpha);

/// The attractor is single when the functional graph has exactly one cycle.
AttractorInfo map_attractor(const DeterministicMap& alpha);

/// Row vector times matrix.
Vector left_multiply(const Vector& v, const StochasticMatrix& m);

}  // namespace rdsmc
