#ifndef ASLAM_RNG_HPP
#define ASLAM_RNG_HPP

#include <cstdint>
#include <random>

namespace aslam {

/// Purpose of a per-trial random substream.
enum class Stream : std::uint64_t {
  process_noise = 1,
  detection = 2,
  range = 3,
  bearing = 4,
  policy = 5,
  pose_cell = 6,
  observation_cell = 7,
  true_map = 8,
};

/// Seed of substream (master, trial, purpose) via splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream stream);

/// Portable uniform and normal variates on top of mt19937_64.
///
/// Uniforms use the top 53 bits; normals use Box-Muller with two fresh
/// uniforms per variate (no caching), so every call consumes a fixed
/// number of engine outputs.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used for config hashes and draw logs.
class Fnv1a {
 public:
  void update(const void* data, std::size_t bytes);
  template <class T>
  void add(const T& value) {
    update(&value, sizeof(T));
  }
  [[nodiscard]] std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace aslam

#endif
