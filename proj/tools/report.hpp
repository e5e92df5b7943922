#ifndef ASLAM_TOOLS_REPORT_HPP
#define ASLAM_TOOLS_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aslam/evaluation.hpp"

namespace aslam::cli {

/// Shortest round-trip decimal form; identical on every run.
std::string num(double v);

/// CSV file with the versioned comment header
/// "# aslam <version> schema=<n> config_hash=<hex>".
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::string buffer_;
};

inline constexpr int kCsvSchema = 1;
inline constexpr int kJsonSchema = 1;

void write_trial_csv(const std::filesystem::path& path, std::uint64_t config_hash, const std::string& policy,
                     std::span<const EpisodeRecord> records);

void write_summary_csv(const std::filesystem::path& path, std::uint64_t config_hash,
                       const std::vector<std::pair<std::string, TrialStats>>& stats);

void write_sweep_outputs(const std::filesystem::path& dir, std::uint64_t config_hash, const SweepResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace aslam::cli

#endif
