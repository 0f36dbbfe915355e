#include "rdsmc/operators.hpp"

#include <cmath>

namespace rdsmc {

namespace {

void check_length(const Vector& x, const StochasticMatrix& m) {
  if (static_cast<std::size_t>(x.size()) != m.size()) throw DimensionError("vector length does not match operator");
}

}  // namespace

Vector OperatorPair::forward(const Vector& v, std::size_t t) const { return pf_apply(m_, v, t); }

Vector OperatorPair::backward(const Vector& u, std::size_t t) const { return koopman_apply(m_, u, t); }

Vector pf_apply(const StochasticMatrix& m, const Vector& v, std::size_t t) {
  check_length(v, m);
  Vector row = v;
  for (std::size_t s = 0; s < t; ++s) row = m.matrix().transpose() * row;
  return row;
}

ProbVector pf_apply(const StochasticMatrix& m, const ProbVector& v, std::size_t t) {
  Vector out = pf_apply(m, v.to_vector(), t);
  // products of non-negative entries cannot go negative; clamp signed zeros
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = std::max(out[i], 0.0);
  return ProbVector(out);
}

Vector koopman_apply(const StochasticMatrix& m, const Vector& u, std::size_t t) {
  check_length(u, m);
  Vector col = u;
  for (std::size_t s = 0; s < t; ++s) col = m.matrix() * col;
  return col;
}

double check_adjoint(const StochasticMatrix& m, const Vector& v, const Vector& u, std::size_t t) {
  return std::abs(pf_apply(m, v, t).dot(u) - v.dot(koopman_apply(m, u, t)));
}

}  // namespace rdsmc
