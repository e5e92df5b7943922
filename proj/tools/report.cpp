#include "report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "aslam/config.hpp"

namespace aslam::cli {

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash,
                     const std::vector<std::string>& columns)
    : path_(path) {
  buffer_ = "# aslam " ASLAM_VERSION " schema=" + std::to_string(kCsvSchema) + " config_hash=" + hex64(config_hash) +
            "\n";
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() { write_text(path_, buffer_); }

void write_trial_csv(const std::filesystem::path& path, std::uint64_t config_hash, const std::string& policy,
                     std::span<const EpisodeRecord> records) {
  CsvWriter csv(path, config_hash,
                {"policy", "trial", "seed", "true_map", "t", "x", "y", "pose_cell", "belief_index", "action",
                 "observation", "msee", "effort"});
  for (const auto& r : records) {
    for (std::size_t t = 0; t < r.msee.size(); ++t) {
      csv.row({policy, std::to_string(r.trial), std::to_string(r.seed), std::to_string(r.true_map), std::to_string(t),
               num(r.pose[t].x), num(r.pose[t].y), std::to_string(r.pose_cell[t]), std::to_string(r.belief_index[t]),
               std::to_string(r.action[t]), std::to_string(r.observation[t]), num(r.msee[t]), num(r.effort[t])});
    }
  }
  csv.close();
}

void write_summary_csv(const std::filesystem::path& path, std::uint64_t config_hash,
                       const std::vector<std::pair<std::string, TrialStats>>& stats) {
  CsvWriter csv(path, config_hash, {"policy", "t", "mean_msee", "ci95_msee", "mean_effort"});
  for (const auto& [name, s] : stats)
    for (std::size_t t = 0; t < s.mean_msee.size(); ++t)
      csv.row({name, std::to_string(t), num(s.mean_msee[t]), num(s.ci95_msee[t]), num(s.mean_effort[t])});
  csv.close();
}

namespace {

nlohmann::ordered_json stats_json(const TrialStats& s) {
  nlohmann::ordered_json j;
  j["trials"] = s.trials;
  j["terminal_mean_msee"] = s.terminal_mean;
  j["q95"] = s.q95;
  j["q90"] = s.q90;
  j["cvar90"] = s.cvar90;
  j["terminal_effort"] = s.terminal_effort;
  j["mean_msee"] = s.mean_msee;
  j["ci95_msee"] = s.ci95_msee;
  j["mean_effort"] = s.mean_effort;
  return j;
}

std::string cell_name(const SweepRow& r) {
  return "M" + std::to_string(r.denominator) + "_sr" + num(r.sigma_r) + "_sp" + num(r.sigma_phi) + "_" + r.policy +
         "_lambda" + num(r.lambda) + ".json";
}

}  // namespace

void write_sweep_outputs(const std::filesystem::path& dir, std::uint64_t config_hash, const SweepResult& result) {
  std::filesystem::create_directories(dir / "cells");
  CsvWriter table(dir / "sweep.csv", config_hash,
                  {"M", "sigma_r", "sigma_phi", "policy", "lambda", "iterations", "terminal_mean_msee", "q95", "q90",
                   "cvar90", "terminal_effort"});
  CsvWriter curves(dir / "sweep_curves.csv", config_hash,
                   {"M", "sigma_r", "sigma_phi", "policy", "lambda", "t", "mean_msee", "ci95_msee", "mean_effort"});
  for (const auto& r : result.rows) {
    const auto& s = r.stats;
    table.row({std::to_string(r.denominator), num(r.sigma_r), num(r.sigma_phi), r.policy, num(r.lambda),
               std::to_string(r.iterations), num(s.terminal_mean), num(s.q95), num(s.q90), num(s.cvar90),
               num(s.terminal_effort)});
    for (std::size_t t = 0; t < s.mean_msee.size(); ++t)
      curves.row({std::to_string(r.denominator), num(r.sigma_r), num(r.sigma_phi), r.policy, num(r.lambda),
                  std::to_string(t), num(s.mean_msee[t]), num(s.ci95_msee[t]), num(s.mean_effort[t])});

    nlohmann::ordered_json j;
    j["schema"] = kJsonSchema;
    j["version"] = ASLAM_VERSION;
    j["config_hash"] = hex64(config_hash);
    j["M"] = r.denominator;
    j["sigma_r"] = r.sigma_r;
    j["sigma_phi"] = r.sigma_phi;
    j["policy"] = r.policy;
    j["lambda"] = r.lambda;
    j["iterations"] = r.iterations;
    j["stats"] = stats_json(s);
    write_text(dir / "cells" / cell_name(r), j.dump(2) + "\n");
  }
  table.close();
  curves.close();

  CsvWriter best(dir / "sweep_best.csv", config_hash, {"M", "sigma_r", "sigma_phi", "policy", "best_lambda", "cvar90"});
  for (const auto& b : result.best)
    best.row({std::to_string(b.denominator), num(b.sigma_r), num(b.sigma_phi), b.policy, num(b.lambda), num(b.cvar90)});
  best.close();

  CsvWriter gap(dir / "sweep_gap.csv", config_hash,
                {"M", "sigma_r", "sigma_phi", "cvar90_shannon", "cvar90_rao", "gap_shannon_minus_rao"});
  for (const auto& g : result.gaps)
    gap.row({std::to_string(g.denominator), num(g.sigma_r), num(g.sigma_phi), num(g.cvar_shannon), num(g.cvar_rao),
             num(g.gap)});
  gap.close();

  CsvWriter agree(dir / "sweep_agreement.csv", config_hash, {"M", "sigma_r", "sigma_phi", "lambda", "agreement"});
  for (const auto& a : result.agreement)
    agree.row({std::to_string(a.denominator), num(a.sigma_r), num(a.sigma_phi), num(a.lambda), num(a.agreement)});
  agree.close();
}

}  // namespace aslam::cli
