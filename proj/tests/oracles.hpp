// Independent reference computations used by the tests. Nothing here
// calls into the library's numerical kernels.
#ifndef ASLAM_TESTS_ORACLES_HPP
#define ASLAM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t m) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> b(m);
  for (auto& x : b) x = e(gen);
  const double s = std::accumulate(b.begin(), b.end(), 0.0);
  for (auto& x : b) x /= s;
  return b;
}

/// Sparse random belief: some atoms forced to zero.
inline std::vector<double> random_sparse_simplex(std::mt19937_64& gen, std::size_t m) {
  std::bernoulli_distribution keep(0.6);
  auto b = random_simplex(gen, m);
  std::size_t kept = 0;
  for (auto& x : b)
    if (keep(gen)) ++kept; else x = 0.0;
  if (kept == 0) b[gen() % m] = 1.0;
  const double s = std::accumulate(b.begin(), b.end(), 0.0);
  for (auto& x : b) x /= s;
  return b;
}

/// W1 on points of the real line: integral of |F - G|.
inline double w1_line(const std::vector<double>& x, const std::vector<double>& mu, const std::vector<double>& nu) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  double f = 0.0, g = 0.0, w = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    f += mu[order[k]];
    g += nu[order[k]];
    w += std::abs(f - g) * (x[order[k + 1]] - x[order[k]]);
  }
  return w;
}

/// Weighted tree given by parent[i] (parent[0] = -1) and edge weight to parent.
struct Tree {
  std::vector<int> parent;
  std::vector<double> weight;

  std::vector<double> distances() const {
    const std::size_t n = parent.size();
    std::vector<double> depth(n, 0.0);
    std::vector<std::vector<int>> anc(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (int v = static_cast<int>(i); v != -1; v = parent[v]) anc[i].push_back(v);
      for (int v = static_cast<int>(i); parent[v] != -1; v = parent[v]) depth[i] += weight[v];
    }
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        int lca = 0;
        for (int a : anc[i])
          if (std::find(anc[j].begin(), anc[j].end(), a) != anc[j].end()) {
            lca = a;
            break;
          }
        d[i * n + j] = depth[i] + depth[j] - 2.0 * depth[lca];
      }
    return d;
  }

  /// W1 on a tree metric: sum over edges of weight * |mass imbalance below|.
  double w1(const std::vector<double>& mu, const std::vector<double>& nu) const {
    const std::size_t n = parent.size();
    std::vector<double> below(n);
    for (std::size_t i = 0; i < n; ++i) below[i] = mu[i] - nu[i];
    // parents precede children in the generator, so a reverse pass accumulates subtrees.
    double w = 0.0;
    for (std::size_t i = n; i-- > 1;) {
      w += weight[i] * std::abs(below[i]);
      below[parent[i]] += below[i];
    }
    return w;
  }

  static Tree random(std::mt19937_64& gen, std::size_t n) {
    Tree t;
    std::uniform_real_distribution<double> u(0.1, 2.0);
    t.parent.push_back(-1);
    t.weight.push_back(0.0);
    for (std::size_t i = 1; i < n; ++i) {
      t.parent.push_back(static_cast<int>(gen() % i));
      t.weight.push_back(u(gen));
    }
    return t;
  }
};

/// All integer compositions of `total` into `parts` non-negative parts.
inline std::vector<std::vector<int>> compositions(int parts, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, total);
  return out;
}

inline double sq_dist(const std::vector<double>& b, const std::vector<int>& k, int M) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += (b[i] - k[i] / double(M)) * (b[i] - k[i] / double(M));
  return s;
}

/// Nearest composition in Euclidean distance; ties broken by the declared
/// rule are checked by the caller through the distance, not the index.
inline std::vector<int> nearest_grid_point(const std::vector<double>& b, int M) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  for (const auto& k : compositions(static_cast<int>(b.size()), M)) {
    const double d = sq_dist(b, k, M);
    // Ties resolve to the lowest colex rank (compare from the last coordinate).
    if (d < best || (d == best && std::lexicographical_compare(k.rbegin(), k.rend(), arg.rbegin(), arg.rend()))) {
      best = d;
      arg = k;
    }
  }
  return arg;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle

#endif
