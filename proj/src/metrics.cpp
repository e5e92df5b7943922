#include "aslam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aslam {

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double product_distance(const JointState& a, const JointState& b, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("product_distance: metric order p must be >= 1");
  }
  if (a.pose.size() != b.pose.size() || a.map.size() != b.map.size()) {
    throw std::invalid_argument("product_distance: states have different dimensions");
  }
  const double dx = euclidean(a.pose, b.pose);
  const double dm = euclidean(a.map, b.map);
  if (p == 1.0) {
    return dx + dm;
  }
  if (p == 2.0) {
    return std::hypot(dx, dm);
  }
  return std::pow(std::pow(dx, p) + std::pow(dm, p), 1.0 / p);
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), d_(std::move(entries)) {
  if (d_.size() != n * n) {
    throw std::invalid_argument("DistanceMatrix: expected n*n entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0) {
      throw std::invalid_argument("DistanceMatrix: nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d_[i * n + j];
      if (!(v >= 0.0) || v != d_[j * n + i]) {
        throw std::invalid_argument("DistanceMatrix: entries must be nonnegative and symmetric");
      }
      diameter_ = std::max(diameter_, v);
    }
  }
}

DistanceMatrix DistanceMatrix::euclidean(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = aslam::euclidean(points[i], points[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

double total_variation(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) {
    throw std::invalid_argument("total_variation: size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sum += std::abs(mu[i] - nu[i]);
  }
  return 0.5 * sum;
}

namespace {

// Residual network for the transport problem. Node 0 is the super source,
// 1..a are supply atoms, a+1..a+b demand atoms and a+b+1 the super sink.
class TransportSolver {
 public:
  TransportSolver(std::vector<std::size_t> src, std::vector<double> supply, std::vector<std::size_t> dst,
                  std::vector<double> demand, const DistanceMatrix& d)
      : src_(std::move(src)),
        dst_(std::move(dst)),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        a_(src_.size()),
        b_(dst_.size()),
        cost_(a_ * b_),
        flow_(a_ * b_, 0.0) {
    for (std::size_t i = 0; i < a_; ++i) {
      for (std::size_t j = 0; j < b_; ++j) {
        cost_[i * b_ + j] = d(src_[i], dst_[j]);
      }
    }
  }

  double solve() {
    const std::size_t nodes = a_ + b_ + 2;
    const std::size_t sink = nodes - 1;
    std::vector<double> potential(nodes, 0.0);
    std::vector<double> dist(nodes);
    std::vector<std::size_t> parent(nodes);
    std::vector<char> done(nodes);
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Every augmentation exhausts a supply, a demand or a reverse arc.
    const std::size_t max_rounds = 4 * (a_ + 1) * (b_ + 1) + 16;
    for (std::size_t round = 0; round < max_rounds; ++round) {
      if (!has_mass(supply_) || !has_mass(demand_)) {
        break;
      }
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(done.begin(), done.end(), 0);
      dist[0] = 0.0;
      while (true) {
        std::size_t u = nodes;
        double best = inf;
        for (std::size_t v = 0; v < nodes; ++v) {
          if (!done[v] && dist[v] < best) {
            best = dist[v];
            u = v;
          }
        }
        if (u == nodes || u == sink) {
          break;
        }
        done[u] = 1;
        auto relax = [&](std::size_t v, double arc_cost) {
          const double reduced = std::max(0.0, arc_cost + potential[u] - potential[v]);
          if (dist[u] + reduced < dist[v]) {
            dist[v] = dist[u] + reduced;
            parent[v] = u;
          }
        };
        if (u == 0) {
          for (std::size_t i = 0; i < a_; ++i) {
            if (supply_[i] > kMassEps) relax(1 + i, 0.0);
          }
        } else if (u <= a_) {
          const std::size_t i = u - 1;
          for (std::size_t j = 0; j < b_; ++j) relax(1 + a_ + j, cost_[i * b_ + j]);
        } else {
          const std::size_t j = u - 1 - a_;
          for (std::size_t i = 0; i < a_; ++i) {
            if (flow_[i * b_ + j] > kMassEps) relax(1 + i, -cost_[i * b_ + j]);
          }
          if (demand_[j] > kMassEps) relax(sink, 0.0);
        }
      }
      if (dist[sink] == inf) {
        break;
      }
      for (std::size_t v = 0; v < nodes; ++v) {
        potential[v] += std::min(dist[v], dist[sink]);
      }

      // Bottleneck along the path sink <- ... <- source.
      double push = inf;
      std::size_t v = sink;
      while (v != 0) {
        const std::size_t u = parent[v];
        if (v == sink) {
          push = std::min(push, demand_[u - 1 - a_]);
        } else if (u == 0) {
          push = std::min(push, supply_[v - 1]);
        } else if (u > a_) {
          push = std::min(push, flow_[(v - 1) * b_ + (u - 1 - a_)]);
        }
        v = u;
      }
      v = sink;
      while (v != 0) {
        const std::size_t u = parent[v];
        if (v == sink) {
          demand_[u - 1 - a_] -= push;
        } else if (u == 0) {
          supply_[v - 1] -= push;
        } else if (u <= a_) {
          flow_[(u - 1) * b_ + (v - 1 - a_)] += push;
        } else {
          flow_[(v - 1) * b_ + (u - 1 - a_)] -= push;
        }
        v = u;
      }
    }

    double total = 0.0;
    for (std::size_t k = 0; k < flow_.size(); ++k) {
      total += flow_[k] * cost_[k];
    }
    return total;
  }

 private:
  static constexpr double kMassEps = 1e-15;

  static bool has_mass(const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x > kMassEps; });
  }

  std::vector<std::size_t> src_, dst_;
  std::vector<double> supply_, demand_;
  std::size_t a_, b_;
  std::vector<double> cost_;
  std::vector<double> flow_;
};

}  // namespace

double wasserstein1(std::span<const double> mu, std::span<const double> nu, const DistanceMatrix& d) {
  if (mu.size() != nu.size() || mu.size() != d.size()) {
    throw std::invalid_argument("wasserstein1: measures and distance matrix disagree in size");
  }
  const double mass_mu = std::accumulate(mu.begin(), mu.end(), 0.0);
  const double mass_nu = std::accumulate(nu.begin(), nu.end(), 0.0);
  if (std::abs(mass_mu - mass_nu) > kSimplexTolerance) {
    throw std::invalid_argument("wasserstein1: marginal masses differ");
  }
  std::vector<std::size_t> src, dst;
  std::vector<double> supply, demand;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 0.0 || nu[i] < 0.0) {
      throw std::invalid_argument("wasserstein1: negative mass");
    }
    // Mass that stays in place costs nothing; only the net excess moves.
    const double common = std::min(mu[i], nu[i]);
    if (mu[i] - common > 0.0) {
      src.push_back(i);
      supply.push_back(mu[i] - common);
    }
    if (nu[i] - common > 0.0) {
      dst.push_back(i);
      demand.push_back(nu[i] - common);
    }
  }
  if (src.empty() || dst.empty()) {
    return 0.0;
  }
  return TransportSolver(std::move(src), std::move(supply), std::move(dst), std::move(demand), d).solve();
}

double wasserstein_to_dirac(std::span<const double> b, std::size_t m, const DistanceMatrix& d) {
  if (m >= d.size() || b.size() != d.size()) {
    throw std::out_of_range("wasserstein_to_dirac: index or size out of range");
  }
  const auto row = d.row(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    sum += b[i] * row[i];
  }
  return sum;
}

}  // namespace aslam
