#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rdsmc::testing {

namespace {

Matrix normalize_rows(Matrix a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= a.row(i).sum();
  return a;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Calls f(image) for every map on n states, in lexicographic order.
void for_each_map(std::size_t n, const std::function<void(const std::vector<State>&)>& f) {
  std::vector<State> image(n, 0);
  while (true) {
    f(image);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++image[k] < n) break;
      image[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

double map_weight(const StochasticMatrix& m, const std::vector<State>& image) {
  double w = 1.0;
  for (State i = 0; i < image.size(); ++i) w *= m(i, image[i]);
  return w;
}

// Cycles of a functional graph, each as the list of states on it.
std::vector<std::vector<State>> cycles_of(const std::vector<State>& image) {
  const std::size_t n = image.size();
  std::vector<int> color(n, 0);
  std::vector<std::vector<State>> out;
  for (State s = 0; s < n; ++s) {
    std::vector<State> path;
    State x = s;
    while (color[x] == 0) {
      color[x] = 1;
      path.push_back(x);
      x = image[x];
    }
    if (color[x] == 1) {
      auto it = std::find(path.begin(), path.end(), x);
      out.emplace_back(it, path.end());
    }
    for (State y : path) color[y] = 2;
  }
  return out;
}

void paths_rec(const StochasticMatrix& m, const ProbVector& p0, std::size_t t, std::vector<State>& path,
               const std::function<void(const std::vector<State>&, double)>& f) {
  if (path.size() == t + 1) {
    double w = p0[path.front()];
    for (std::size_t s = 0; s + 1 < path.size(); ++s) w *= m(path[s], path[s + 1]);
    f(path, w);
    return;
  }
  for (State j = 0; j < m.size(); ++j) {
    path.push_back(j);
    paths_rec(m, p0, t, path, f);
    path.pop_back();
  }
}

}  // namespace

ProbVector random_prob(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  for (double& x : p) x = uniform(rng, 0.05, 1.0);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  return ProbVector(p);
}

StochasticMatrix random_positive(Rng& rng, std::size_t n) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = uniform(rng, 0.05, 1.0);
  return StochasticMatrix(normalize_rows(a));
}

StochasticMatrix random_ergodic(Rng& rng, std::size_t n, double density) {
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = uniform(rng, 0.1, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (uniform(rng, 0.0, 1.0) < density) a(i, j) = uniform(rng, 0.1, 1.0);
    }
  }
  a(0, 0) = uniform(rng, 0.1, 1.0);
  return StochasticMatrix(normalize_rows(a));
}

StochasticMatrix random_symmetric_support(Rng& rng, std::size_t n, double density) {
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    a(i, j) = uniform(rng, 0.1, 1.0);
    a(j, i) = uniform(rng, 0.1, 1.0);
    for (std::size_t k = i; k < n; ++k) {
      if (uniform(rng, 0.0, 1.0) < density) {
        a(i, k) = uniform(rng, 0.1, 1.0);
        a(k, i) = uniform(rng, 0.1, 1.0);
      }
    }
  }
  a(0, 0) = uniform(rng, 0.1, 1.0);
  return StochasticMatrix(normalize_rows(a));
}

StochasticMatrix random_reversible(Rng& rng, std::size_t n) {
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) w(i, j) = w(j, i) = uniform(rng, 0.05, 1.0);
  return StochasticMatrix(normalize_rows(w));
}

StochasticMatrix sinkhorn(Matrix a, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= a.row(i).sum();
    for (Eigen::Index j = 0; j < a.cols(); ++j) a.col(j) /= a.col(j).sum();
  }
  return StochasticMatrix(normalize_rows(a));
}

DeterministicMap random_map(Rng& rng, std::size_t n) {
  std::vector<State> image(n);
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  for (auto& x : image) x = d(rng);
  return DeterministicMap(image);
}

DeterministicMap random_permutation(Rng& rng, std::size_t n) {
  std::vector<State> image(n);
  std::iota(image.begin(), image.end(), State{0});
  std::shuffle(image.begin(), image.end(), rng);
  return DeterministicMap(image);
}

InvertibleRDSMeasure random_invertible(Rng& rng, std::size_t n, std::size_t extra, bool self_dual) {
  std::vector<State> rot(n);
  for (State i = 0; i < n; ++i) rot[i] = (i + 1) % n;
  std::vector<DeterministicMap> base{DeterministicMap::identity(n), DeterministicMap(rot)};
  for (std::size_t k = 0; k < extra; ++k) base.push_back(random_permutation(rng, n));

  std::vector<WeightedMap> support;
  for (const auto& sigma : base) {
    const double w = uniform(rng, 0.1, 1.0);
    support.push_back({sigma, w});
    support.push_back({sigma.inverse(), self_dual ? w : uniform(rng, 0.1, 1.0)});
  }
  // Merge duplicates before normalizing so self-duality survives.
  std::map<DeterministicMap, double> merged;
  for (const auto& wm : support) merged[wm.map] += wm.weight;
  double total = 0.0;
  for (const auto& [a, w] : merged) total += w;
  std::vector<WeightedMap> out;
  for (const auto& [a, w] : merged) out.push_back({a, w / total});
  return InvertibleRDSMeasure(std::move(out));
}

StochasticMatrix biased_rotation(std::size_t n, double a, double b) {
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, (i + 1) % n) += a;
    m(i, (i + n - 1) % n) += b;
    m(i, i) += 1.0 - a - b;
  }
  return StochasticMatrix(m);
}

StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return StochasticMatrix(m);
}

Vector eigen_stationary(const Matrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m.transpose()));
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k) {
    if (std::abs(es.eigenvalues()[k] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = k;
  }
  Vector v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

double brute_forest_weight(const StochasticMatrix& m, const std::vector<State>& roots) {
  const std::size_t n = m.size();
  std::vector<bool> is_root(n, false);
  for (State r : roots) is_root[r] = true;
  std::vector<State> free;
  for (State i = 0; i < n; ++i)
    if (!is_root[i]) free.push_back(i);
  double total = 0.0;
  std::vector<State> parent(n);
  for (State i = 0; i < n; ++i) parent[i] = i;
  // Odometer over parent choices of the free states.
  std::vector<State> digit(free.size(), 0);
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < free.size(); ++k) {
      parent[free[k]] = digit[k];
      w *= (digit[k] == free[k]) ? 0.0 : m(free[k], digit[k]);
    }
    if (w > 0.0) {
      bool ok = true;
      for (State s : free) {
        State x = s;
        std::size_t hops = 0;
        while (!is_root[x] && hops <= n) {
          x = parent[x];
          ++hops;
        }
        if (!is_root[x]) {
          ok = false;
          break;
        }
      }
      if (ok) total += w;
    }
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == n) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return total;
}

double brute_single_loop_weight(const StochasticMatrix& m, State j) {
  double total = 0.0;
  for_each_map(m.size(), [&](const std::vector<State>& image) {
    for (State i = 0; i < image.size(); ++i)
      if (image[i] == i) return;
    const auto cycles = cycles_of(image);
    if (cycles.size() != 1) return;
    if (std::find(cycles[0].begin(), cycles[0].end(), j) == cycles[0].end()) return;
    total += map_weight(m, image);
  });
  return total;
}

double brute_attractor_size(const StochasticMatrix& m) {
  double total = 0.0;
  for_each_map(m.size(), [&](const std::vector<State>& image) {
    const auto cycles = cycles_of(image);
    if (cycles.size() == 1) total += map_weight(m, image) * static_cast<double>(cycles[0].size());
  });
  return total;
}

double brute_attractor_weight(const StochasticMatrix& m, const Cycle& c) {
  double total = 0.0;
  for_each_map(m.size(), [&](const std::vector<State>& image) {
    const auto cycles = cycles_of(image);
    if (cycles.size() == 1 && Cycle(cycles[0]) == c) total += map_weight(m, image);
  });
  return total;
}

double brute_path_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t) {
  double h = 0.0;
  std::vector<State> path;
  paths_rec(m, p0, t, path, [&](const std::vector<State>&, double w) {
    if (w > 0.0) h -= w * std::log(w);
  });
  return h;
}

double brute_path_rel_entropy(const StochasticMatrix& m, const ProbVector& p0, std::size_t t) {
  double h = 0.0;
  std::vector<State> path;
  paths_rec(m, p0, t, path, [&](const std::vector<State>& x, double w) {
    if (w <= 0.0) return;
    double r = p0[x.back()];
    for (std::size_t s = x.size() - 1; s > 0; --s) r *= m(x[s], x[s - 1]);
    h += w * std::log(w / r);
  });
  return h;
}

std::vector<std::vector<State>> brute_simple_paths(const StochasticMatrix& m, State start) {
  std::vector<std::vector<State>> out;
  std::vector<State> path{start};
  std::function<void()> rec = [&]() {
    out.push_back(path);
    for (State j = 0; j < m.size(); ++j) {
      if (m(path.back(), j) <= 0.0 || std::find(path.begin(), path.end(), j) != path.end()) continue;
      path.push_back(j);
      rec();
      path.pop_back();
    }
  };
  rec();
  return out;
}

double chi_square_critical_001(std::size_t df) {
  static const double table[] = {6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894, 18.475307,
                                 20.090235, 21.665994, 23.209251, 24.724970, 26.216967, 27.688250, 29.141238,
                                 30.577914, 31.999927, 33.408664, 34.805306, 36.190869, 37.566235, 38.932173,
                                 40.289360, 41.638398, 42.979820, 44.314105, 45.641683, 46.962942, 48.278236,
                                 49.587884, 50.892181};
  if (df < 1 || df > 30) throw std::out_of_range("chi-square table covers df 1..30");
  return table[df - 1];
}

double occupation_variance(const StochasticMatrix& m, const ProbVector& pi, State i) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(m.matrix());
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) += pi[static_cast<State>(c)];
  const Eigen::MatrixXd z = a.inverse();
  const auto k = static_cast<Eigen::Index>(i);
  return pi[i] * (2.0 * z(k, k) - 1.0 - pi[i]);
}

BatchEstimate batch_means(const std::vector<double>& batches) {
  const double k = static_cast<double>(batches.size());
  const double mean = std::accumulate(batches.begin(), batches.end(), 0.0) / k;
  double var = 0.0;
  for (double b : batches) var += (b - mean) * (b - mean);
  var /= (k - 1.0);
  return BatchEstimate{mean, std::sqrt(var / k)};
}

std::vector<DeterministicMap> two_state_maps() {
  return {DeterministicMap({0, 1}), DeterministicMap({1, 0}), DeterministicMap({0, 0}), DeterministicMap({1, 1})};
}

RDSMeasure two_state_iid() {
  const auto a = two_state_maps();
  return RDSMeasure({{a[0], 0.2}, {a[1], 0.2}, {a[2], 0.3}, {a[3], 0.3}});
}

MarkovDrivenSource two_state_markov_source() {
  return MarkovDrivenSource(two_state_maps(),
                            from_rows({{0.0, 0.0, 0.5, 0.5},
                                       {0.25, 0.25, 0.25, 0.25},
                                       {0.5, 0.5, 0.0, 0.0},
                                       {0.25, 0.25, 0.25, 0.25}}),
                            ProbVector(std::vector<double>{0.5, 0.5, 0.0, 0.0}));
}

StochasticMatrix complete3() {
  return from_rows({{0.2, 0.5, 0.3}, {0.1, 0.6, 0.3}, {0.4, 0.4, 0.2}});
}

}  // namespace rdsmc::testing
