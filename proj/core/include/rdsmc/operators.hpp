#pragma once

#include <cstddef>

#include "rdsmc/core.hpp"

namespace rdsmc {

/// Stochastic Perron-Frobenius (F_t) and Koopman (K_t) semigroups of a
/// stationary i.i.d. RDS, both generated by its transition matrix M.
/// F_t acts on row vectors, v -> v M^t; K_t on column vectors, u -> M^t u.
/// Powers are formed by repeated multiplication.
class OperatorPair {
 public:
  explicit OperatorPair(StochasticMatrix generator) : m_(std::move(generator)) {}

  const StochasticMatrix& generator() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }

  Vector forward(const Vector& v, std::size_t t) const;
  Vector backward(const Vector& u, std::size_t t) const;

 private:
  StochasticMatrix m_;
};

/// v M^t for a probability vector; the result is again a probability vector.
ProbVector pf_apply(const StochasticMatrix& m, const ProbVector& v, std::size_t t);
/// v M^t for an arbitrary real row vector.
Vector pf_apply(const StochasticMatrix& m, const Vector& v, std::size_t t);

/// M^t u.
Vector koopman_apply(const StochasticMatrix& m, const Vector& u, std::size_t t);

/// |<F_t v, u> - <v, K_t u>|.
double check_adjoint(const StochasticMatrix& m, const Vector& v, const Vector& u, std::size_t t);

}  // namespace rdsmc
