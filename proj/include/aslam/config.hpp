#ifndef ASLAM_CONFIG_HPP
#define ASLAM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aslam/costs.hpp"
#include "aslam/evaluation.hpp"
#include "aslam/problem.hpp"

namespace aslam {

/// Raised for unreadable files, unknown keys and invalid values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where a configuration value came from.
enum class Provenance { published, default_value, config };

/// Every setting of a run.
///
/// The file format is INI with sections [motion], [sensor], [maps],
/// [quantization], [start], [solver], [cost], [evaluation], [sweep] and
/// [output]; see configs/ for annotated examples.
struct RunConfig {
  ProblemConfig problem;
  /// Explicit map atoms (one landmark list per atom); empty means the
  /// lattice over the landmark space.
  std::vector<std::vector<Vec2>> maps;
  SolveOptions solver;
  CostConfig cost;
  std::size_t trials = 3000;
  std::size_t horizon = 20;
  std::uint64_t seed = 1;
  SimulationMode mode = SimulationMode::continuous;
  SweepPlan sweep;
  std::filesystem::path output_dir = "out";
  int jobs = 0;

  /// Provenance per "section.key".
  std::map<std::string, Provenance> provenance;

  /// Throws ConfigError on the first invalid setting.
  void validate() const;

  /// Canonical "section.key = value" lines, sorted, with a provenance
  /// comment when `annotate` is set.
  [[nodiscard]] std::string echo(bool annotate = true) const;

  /// FNV-1a of the canonical echo without annotations or output settings.
  [[nodiscard]] std::uint64_t hash() const;

  /// Hash of everything the kernels, grid and belief transition depend on.
  [[nodiscard]] std::uint64_t model_hash() const;

  /// Problem with the configured maps.
  [[nodiscard]] KnownPoseProblem make_problem(Exec exec = Exec::parallel) const;
};

/// Defaults with provenance filled in.
RunConfig default_run_config();

/// Reads an INI file over the defaults. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Same from text (used by tests).
RunConfig parse_run_config(const std::string& text);

std::string hex64(std::uint64_t value);

}  // namespace aslam

#endif
