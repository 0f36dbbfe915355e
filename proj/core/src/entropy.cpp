#include "rdsmc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdsmc/trees.hpp"

namespace rdsmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("distribution and matrix sizes differ");
}

// x log(x / y) with the library conventions.
double kl_term(double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return kInf;
  return x * std::log(x / y);
}

double entropy_of_row(const StochasticMatrix& m, State i) {
  double h = 0.0;
  for (State j = 0; j < m.size(); ++j) {
    const double x = m(i, j);
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

// sum_ij M_ij log(M_ij / M_ji) per row i, i.e. the heat log-ratio averaged
// over row i. Requires symmetric support.
std::vector<double> row_log_ratio(const StochasticMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> r(n, 0.0);
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      const double x = m(i, j);
      if (x > 0.0) r[i] += x * std::log(x / m(j, i));
    }
  }
  return r;
}

}  // namespace

ProbVector step(const StochasticMatrix& m, const ProbVector& p) {
  check_same_size(p.size(), m.size());
  Vector next = m.matrix().transpose() * p.to_vector();
  for (Eigen::Index i = 0; i < next.size(); ++i) next[i] = std::max(next[i], 0.0);
  next /= next.sum();
  return ProbVector(next);
}

double shannon(const ProbVector& p) {
  double s = 0.0;
  for (double x : p.entries()) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

double rel_entropy(const ProbVector& p, const ProbVector& q) {
  check_same_size(p.size(), q.size());
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    h += kl_term(p[i], q[i]);
    if (std::isinf(h)) return kInf;
  }
  return std::max(h, 0.0);
}

ProbVector stationary_distribution(const StochasticMatrix& m) {
  if (!m.irreducible()) throw NotErgodicError("stationary distribution needs an irreducible chain");
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n + 1, n);
  a.topRows(n) = Eigen::MatrixXd::Identity(n, n) - m.matrix().transpose();
  a.row(n).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b[n] = 1.0;
  Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
  for (Eigen::Index i = 0; i < n; ++i) pi[i] = std::max(pi[i], 0.0);
  pi /= pi.sum();

  const auto hill = hill_stationary(m);
  double gap = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) gap = std::max(gap, std::abs(pi[i] - hill.pi[static_cast<State>(i)]));
  if (gap > 1e-8) {
    throw ConsistencyError("linear-solve and matrix-tree stationary distributions differ by " + std::to_string(gap));
  }
  return ProbVector(pi);
}

std::vector<double> check_h_monotone(const StochasticMatrix& m, const ProbVector& p0, std::size_t steps) {
  check_same_size(p0.size(), m.size());
  m.require_ergodic();
  const auto pi = stationary_distribution(m);
  std::vector<double> h;
  h.reserve(steps + 1);
  ProbVector p = p0;
  for (std::size_t t = 0; t <= steps; ++t) {
    h.push_back(rel_entropy(p, pi));
    if (t < steps) p = step(m, p);
  }
  return h;
}

DeltaSDecomposition delta_s_decompose(const StochasticMatrix& m, const ProbVector& p) {
  check_same_size(p.size(), m.size());
  m.require_support_symmetric();
  const auto next = step(m, p);
  const std::size_t n = m.size();
  DeltaSDecomposition d;
  d.delta_s = shannon(next) - shannon(p);
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      const double flow = p[i] * m(i, j);
      if (flow <= 0.0) continue;
      d.ep_term += flow * std::log(flow / (next[j] * m(j, i)));
      d.heat_term += flow * std::log(m(j, i) / m(i, j));
    }
  }
  return d;
}

double internal_energy(const ProbVector& p, const ProbVector& pi) {
  check_same_size(p.size(), pi.size());
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (pi[i] <= 0.0) return kInf;
    e -= p[i] * std::log(pi[i]);
  }
  return e;
}

double free_energy(const ProbVector& p, const StochasticMatrix& m) {
  check_same_size(p.size(), m.size());
  const auto pi = stationary_distribution(m);
  if (!pi.strictly_positive()) throw PreconditionError("free energy needs a strictly positive stationary law");
  return internal_energy(p, pi) - shannon(p);
}

double hsk(const StochasticMatrix& m, const ProbVector& p0, std::size_t t) {
  check_same_size(p0.size(), m.size());
  const std::size_t n = m.size();
  std::vector<double> row_h(n);
  for (State i = 0; i < n; ++i) row_h[i] = entropy_of_row(m, i);
  double h = shannon(p0);
  ProbVector p = p0;
  for (std::size_t s = 0; s < t; ++s) {
    for (State i = 0; i < n; ++i) h += p[i] * row_h[i];
    p = step(m, p);
  }
  return h;
}

double metric_entropy_mc(const StochasticMatrix& m, const ProbVector& pi) {
  check_same_size(pi.size(), m.size());
  double h = 0.0;
  for (State i = 0; i < m.size(); ++i) h += pi[i] * entropy_of_row(m, i);
  return h;
}

double metric_entropy_mc(const StochasticMatrix& m) { return metric_entropy_mc(m, stationary_distribution(m)); }

StochasticMatrix time_reversed(const StochasticMatrix& m, const ProbVector& p_prev, const ProbVector& p_next) {
  check_same_size(p_prev.size(), m.size());
  check_same_size(p_next.size(), m.size());
  if (!p_next.strictly_positive()) throw PreconditionError("time reversal needs a strictly positive target law");
  const auto n = static_cast<Eigen::Index>(m.size());
  Matrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      r(i, j) = p_prev[static_cast<State>(j)] * m.matrix()(j, i) / p_next[static_cast<State>(i)];
    }
  }
  return StochasticMatrix(std::move(r));
}

StochasticMatrix time_reversed(const StochasticMatrix& m) {
  const auto pi = stationary_distribution(m);
  return time_reversed(m, pi, pi);
}

double path_rel_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t) {
  check_same_size(p0.size(), m.size());
  m.require_support_symmetric();
  if (!p0.strictly_positive()) throw PreconditionError("path relative entropy needs a strictly positive initial law");
  const std::size_t n = m.size();
  const auto ratio = row_log_ratio(m);
  double h = 0.0;
  ProbVector p = p0;
  for (std::size_t s = 0; s < t; ++s) {
    for (State i = 0; i < n; ++i) h += p[i] * ratio[i];
    p = step(m, p);
  }
  for (State i = 0; i < n; ++i) h += (p0[i] - p[i]) * std::log(p0[i]);
  return h;
}

EpReport ep_rate(const StochasticMatrix& m) {
  m.require_ergodic();
  m.require_support_symmetric();
  const std::size_t n = m.size();
  const auto pi = stationary_distribution(m);
  const auto reversed = time_reversed(m, pi, pi);

  EpReport rep;
  rep.pi = pi;
  rep.flux = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double max_flux_gap = 0.0;
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      const double x = m(i, j);
      const double jij = pi[i] * x;
      rep.flux(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = jij;
      if (x <= 0.0) continue;
      const double jji = pi[j] * m(j, i);
      max_flux_gap = std::max(max_flux_gap, std::abs(jij - jji));
      rep.forms.ratio += jij * std::log(x / m(j, i));
      rep.forms.pi_ratio += jij * std::log(jij / jji);
      rep.forms.reversed += jij * std::log(x / reversed(i, j));
      rep.forms.half_sum += 0.5 * (jij - jji) * std::log(jij / jji);
    }
  }
  const double forms[] = {rep.forms.ratio, rep.forms.pi_ratio, rep.forms.reversed, rep.forms.half_sum};
  const double scale = std::max(1.0, std::abs(rep.forms.ratio));
  for (double a : forms) {
    for (double b : forms) {
      if (std::abs(a - b) > Tolerances::alg * scale) {
        throw ConsistencyError("entropy production forms disagree: " + std::to_string(a) + " vs " + std::to_string(b));
      }
    }
  }
  rep.detailed_balance = rep.forms.ratio <= Tolerances::alg;
  rep.ep_rate = rep.detailed_balance ? 0.0 : rep.forms.ratio;
  return rep;
}

double ep_step(const StochasticMatrix& m, const ProbVector& p0, std::size_t t) {
  check_same_size(p0.size(), m.size());
  m.require_support_symmetric();
  if (!p0.strictly_positive()) throw PreconditionError("entropy production step needs a strictly positive initial law");
  ProbVector p = p0;
  for (std::size_t s = 0; s < t; ++s) p = step(m, p);
  const std::size_t n = m.size();
  double h = 0.0;
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      const double x = m(i, j);
      if (x <= 0.0 || p[i] <= 0.0) continue;
      h += p[i] * x * std::log(p0[i] * x / (p0[j] * m(j, i)));
    }
  }
  return h;
}

double nonstationarity_gap(const StochasticMatrix& m, const ProbVector& p_prev) {
  check_same_size(p_prev.size(), m.size());
  m.require_ergodic();
  const auto pi = stationary_distribution(m);
  if (!pi.strictly_positive()) throw PreconditionError("stationary law has zero entries");
  const auto p_next = step(m, p_prev);
  const std::size_t n = m.size();
  double g = 0.0;
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      const double flow = p_prev[i] * m(i, j);
      if (flow <= 0.0) continue;
      const double reversed_ji = pi[i] * m(i, j) / pi[j];
      g += flow * std::log(flow / (p_next[j] * reversed_ji));
    }
  }
  return g;
}

}  // namespace rdsmc
