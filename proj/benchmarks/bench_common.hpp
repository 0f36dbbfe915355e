#pragma once

#include <random>

#include "rdsmc/core.hpp"

namespace rdsmc::bench {

inline StochasticMatrix dense_chain(std::size_t n, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng);
    m.row(i) /= m.row(i).sum();
  }
  return StochasticMatrix(m);
}

}  // namespace rdsmc::bench
