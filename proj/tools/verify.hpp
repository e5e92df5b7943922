#ifndef ASLAM_TOOLS_VERIFY_HPP
#define ASLAM_TOOLS_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aslam/config.hpp"

namespace aslam::cli {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Corrupts one observation row before the stochasticity check, to show
  /// that the checker reports it.
  bool inject_fault = false;
};

/// Oracle suites: OT against the 1-D closed form, Reznik against brute
/// force, the quantization error bound, the prior-averaged cost identity,
/// row stochasticity and value-iteration contraction on the configured model.
std::vector<CheckResult> run_verification(const RunConfig& config, const VerifyOptions& options);

}  // namespace aslam::cli

#endif
