#include "aslam/simplex_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace aslam {

std::uint64_t SimplexGrid::cardinality(std::size_t atoms, unsigned denominator) {
  if (atoms == 0) return 0;
  // C(M + m - 1, k) with k = min(m - 1, M), built up multiplicatively.
  const std::uint64_t top = denominator + atoms - 1;
  const std::uint64_t k = std::min<std::uint64_t>(atoms - 1, denominator);
  unsigned __int128 value = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    value = value * (top - k + i) / i;
    if (value > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(value);
}

SimplexGrid::SimplexGrid(std::size_t atoms, unsigned denominator, std::uint64_t cap)
    : atoms_(atoms), denominator_(denominator) {
  if (atoms == 0 || denominator == 0) {
    throw std::invalid_argument("SimplexGrid: need m >= 1 and M >= 1");
  }
  if (denominator > std::numeric_limits<Level>::max()) {
    throw std::invalid_argument("SimplexGrid: M exceeds the level type");
  }
  const std::uint64_t count = cardinality(atoms, denominator);
  if (count > cap) {
    throw GridTooLarge("SimplexGrid: " + std::to_string(count) + " points exceed the cap of " + std::to_string(cap));
  }
  size_ = static_cast<std::size_t>(count);

  const std::size_t stride = denominator + 1;
  compositions_.assign(atoms * stride, 0);
  compositions_[0] = 1;  // zero parts sum to zero in one way
  for (std::size_t p = 1; p < atoms; ++p) {
    for (unsigned s = 0; s <= denominator; ++s) {
      compositions_[p * stride + s] = cardinality(p, s);
    }
  }

  levels_.resize(size_ * atoms_);
  std::vector<Level> current(atoms_, 0);
  std::size_t next = 0;
  // Colex order: the last coordinate varies slowest.
  auto fill = [&](auto&& self, std::size_t position, unsigned remaining) -> void {
    if (position == 0) {
      current[0] = static_cast<Level>(remaining);
      std::copy(current.begin(), current.end(), levels_.begin() + static_cast<std::ptrdiff_t>(next * atoms_));
      ++next;
      return;
    }
    for (unsigned v = 0; v <= remaining; ++v) {
      current[position] = static_cast<Level>(v);
      self(self, position - 1, remaining - v);
    }
  };
  fill(fill, atoms_ - 1, denominator_);
}

std::uint64_t SimplexGrid::compositions(std::size_t parts, unsigned total) const {
  return compositions_[parts * (denominator_ + 1) + total];
}

std::vector<double> SimplexGrid::belief(std::size_t index) const {
  std::vector<double> out(atoms_);
  belief(index, out);
  return out;
}

void SimplexGrid::belief(std::size_t index, std::span<double> out) const {
  const auto k = levels(index);
  const double inv = 1.0 / static_cast<double>(denominator_);
  for (std::size_t i = 0; i < atoms_; ++i) {
    out[i] = static_cast<double>(k[i]) * inv;
  }
}

std::size_t SimplexGrid::index_of(std::span<const Level> levels) const {
  if (levels.size() != atoms_) {
    throw std::invalid_argument("SimplexGrid::index_of: wrong number of levels");
  }
  unsigned remaining = denominator_;
  std::uint64_t index = 0;
  for (std::size_t j = atoms_ - 1; j > 0; --j) {
    if (levels[j] > remaining) {
      throw std::invalid_argument("SimplexGrid::index_of: levels exceed M");
    }
    // Every composition with a smaller value at position j precedes this one.
    for (unsigned v = 0; v < levels[j]; ++v) {
      index += compositions(j, remaining - v);
    }
    remaining -= levels[j];
  }
  if (levels[0] != remaining) {
    throw std::invalid_argument("SimplexGrid::index_of: levels do not sum to M");
  }
  return static_cast<std::size_t>(index);
}

std::vector<Level> reznik_levels(std::span<const double> b, unsigned denominator) {
  const std::size_t m = b.size();
  const auto M = static_cast<double>(denominator);
  std::vector<long> k(m);
  std::vector<double> residual(m);
  long total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    k[i] = static_cast<long>(std::floor(M * b[i] + 0.5));
    residual[i] = static_cast<double>(k[i]) - M * b[i];
    total += k[i];
  }
  const long excess = total - static_cast<long>(denominator);
  if (excess != 0) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (excess > 0) {
      // Among equal residuals take mass from the highest coordinate first.
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        return residual[a] > residual[c] || (residual[a] == residual[c] && a > c);
      });
      for (long t = 0; t < excess; ++t) --k[order[static_cast<std::size_t>(t)]];
    } else {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return residual[a] < residual[c]; });
      for (long t = 0; t < -excess; ++t) ++k[order[static_cast<std::size_t>(t)]];
    }
  }
  std::vector<Level> levels(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (k[i] < 0) {
      throw std::logic_error("reznik_levels: negative level; input is not a probability vector");
    }
    levels[i] = static_cast<Level>(k[i]);
  }
  return levels;
}

std::size_t reznik_quantize(std::span<const double> b, const SimplexGrid& grid) {
  if (b.size() != grid.atoms()) {
    throw std::invalid_argument("reznik_quantize: belief and grid disagree on atom count");
  }
  const auto levels = reznik_levels(b, grid.denominator());
  return grid.index_of(levels);
}

double quantization_error_bound(double n, unsigned denominator, std::size_t atoms, double diameter) {
  const auto m = static_cast<double>(atoms);
  const double a = std::floor(m / 2.0);
  return 1.0 / n + (diameter / static_cast<double>(denominator)) * a * (m - a) / m;
}

}  // namespace aslam
