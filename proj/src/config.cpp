#include "aslam/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "aslam/rng.hpp"

namespace aslam {

namespace {

namespace pt = boost::property_tree;

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Drops an inline "; ..." or "# ..." comment.
std::string value_of(const std::string& raw) { return trim(raw.substr(0, raw.find_first_of(";#"))); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(key + ": not a non-negative integer: '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

// Maps: atoms separated by '/', landmarks of an atom by '|', coordinates by ','.
std::vector<std::vector<Vec2>> parse_maps(const std::string& key, const std::string& v) {
  std::vector<std::vector<Vec2>> maps;
  for (const auto& atom : split(v, '/')) {
    std::vector<Vec2> lm;
    for (const auto& point : split(atom, '|')) {
      const auto xy = parse_list(key, point);
      if (xy.size() != 2) throw ConfigError(key + ": landmark needs two coordinates");
      lm.push_back({xy[0], xy[1]});
    }
    maps.push_back(std::move(lm));
  }
  return maps;
}

std::string fmt_maps(const std::vector<std::vector<Vec2>>& maps) {
  if (maps.empty()) return "lattice";
  std::string s;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (i) s += " / ";
    for (std::size_t j = 0; j < maps[i].size(); ++j)
      s += (j ? " | " : "") + fmt(maps[i][j].x) + ", " + fmt(maps[i][j].y);
  }
  return s;
}

struct Field {
  const char* key;
  Provenance origin;
  bool model;  // part of model_hash
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define ASLAM_DOUBLE(KEY, ORIGIN, MODEL, MEMBER)                                                        \
  Field {                                                                                               \
    KEY, ORIGIN, MODEL, [](RunConfig& c, const std::string& v) { c.MEMBER = parse_double(KEY, v); },   \
        [](const RunConfig& c) { return fmt(static_cast<double>(c.MEMBER)); }                          \
  }
#define ASLAM_UINT(KEY, ORIGIN, MODEL, MEMBER, TYPE)                                                             \
  Field {                                                                                                        \
    KEY, ORIGIN, MODEL, [](RunConfig& c, const std::string& v) { c.MEMBER = static_cast<TYPE>(parse_uint(KEY, v)); }, \
        [](const RunConfig& c) { return fmt(static_cast<std::uint64_t>(c.MEMBER)); }                             \
  }

using P = Provenance;

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      ASLAM_DOUBLE("motion.half_width", P::default_value, true, problem.motion.half_width),
      ASLAM_DOUBLE("motion.dt", P::default_value, true, problem.motion.dt),
      ASLAM_DOUBLE("motion.v_max", P::default_value, true, problem.motion.v_max),
      ASLAM_DOUBLE("motion.sigma_w", P::default_value, true, problem.motion.sigma_w),
      ASLAM_DOUBLE("sensor.eps", P::default_value, true, problem.sensor.eps),
      ASLAM_DOUBLE("sensor.r0", P::default_value, true, problem.sensor.r0),
      ASLAM_DOUBLE("sensor.r1", P::default_value, true, problem.sensor.r1),
      ASLAM_DOUBLE("sensor.r_max", P::default_value, true, problem.sensor.r_max),
      ASLAM_DOUBLE("sensor.sigma_r", P::published, true, problem.sensor.sigma_r),
      ASLAM_DOUBLE("sensor.sigma_phi", P::published, true, problem.sensor.sigma_phi),
      ASLAM_UINT("sensor.landmarks", P::default_value, true, problem.sensor.n_landmarks, int),
      Field{"maps.atoms", P::default_value, true,
            [](RunConfig& c, const std::string& v) {
              c.maps = v == "lattice" ? std::vector<std::vector<Vec2>>{} : parse_maps("maps.atoms", v);
            },
            [](const RunConfig& c) { return fmt_maps(c.maps); }},
      ASLAM_UINT("quantization.pose_n", P::published, true, problem.quant.pose_n, std::size_t),
      ASLAM_UINT("quantization.map_n", P::published, true, problem.quant.map_n, std::size_t),
      ASLAM_UINT("quantization.obs_range_bins", P::published, true, problem.quant.obs_range_bins, std::size_t),
      ASLAM_UINT("quantization.obs_bearing_bins", P::published, true, problem.quant.obs_bearing_bins,
                 std::size_t),
      ASLAM_UINT("quantization.action_n", P::published, true, problem.quant.action_n, std::size_t),
      ASLAM_UINT("quantization.denominator", P::published, true, problem.quant.denominator, unsigned),
      ASLAM_UINT("quantization.grid_cap", P::default_value, false, problem.quant.grid_cap, std::uint64_t),
      ASLAM_DOUBLE("start.x", P::default_value, false, problem.start.x),
      ASLAM_DOUBLE("start.y", P::default_value, false, problem.start.y),
      ASLAM_DOUBLE("solver.beta", P::default_value, false, solver.beta),
      ASLAM_DOUBLE("solver.tol", P::default_value, false, solver.tol),
      ASLAM_UINT("solver.max_iter", P::default_value, false, solver.max_iter, int),
      Field{"cost.kind", P::published, false,
            [](RunConfig& c, const std::string& v) {
              try {
                c.cost.kind = parse_exploration_kind(v);
              } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("cost.kind: ") + e.what());
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.cost.kind)); }},
      ASLAM_DOUBLE("cost.lambda", P::published, false, cost.lambda),
      ASLAM_UINT("evaluation.trials", P::published, false, trials, std::size_t),
      ASLAM_UINT("evaluation.horizon", P::published, false, horizon, std::size_t),
      ASLAM_UINT("evaluation.seed", P::default_value, false, seed, std::uint64_t),
      Field{"evaluation.mode", P::default_value, false,
            [](RunConfig& c, const std::string& v) {
              if (v == "continuous") c.mode = SimulationMode::continuous;
              else if (v == "quantized") c.mode = SimulationMode::quantized;
              else throw ConfigError("evaluation.mode: expected continuous or quantized");
            },
            [](const RunConfig& c) {
              return std::string(c.mode == SimulationMode::continuous ? "continuous" : "quantized");
            }},
      Field{"sweep.lambdas", P::published, false,
            [](RunConfig& c, const std::string& v) { c.sweep.lambdas = parse_list("sweep.lambdas", v); },
            [](const RunConfig& c) { return fmt_list(c.sweep.lambdas); }},
      Field{"sweep.sigma_r", P::published, false,
            [](RunConfig& c, const std::string& v) {
              std::vector<double> sp;
              for (const auto& n : c.sweep.noise)
                if (std::find(sp.begin(), sp.end(), n.sigma_phi) == sp.end()) sp.push_back(n.sigma_phi);
              c.sweep.noise.clear();
              for (double r : parse_list("sweep.sigma_r", v))
                for (double p : sp) c.sweep.noise.push_back({r, p});
            },
            [](const RunConfig& c) {
              std::vector<double> sr;
              for (const auto& n : c.sweep.noise)
                if (std::find(sr.begin(), sr.end(), n.sigma_r) == sr.end()) sr.push_back(n.sigma_r);
              return fmt_list(sr);
            }},
      Field{"sweep.sigma_phi", P::published, false,
            [](RunConfig& c, const std::string& v) {
              std::vector<double> sr;
              for (const auto& n : c.sweep.noise)
                if (std::find(sr.begin(), sr.end(), n.sigma_r) == sr.end()) sr.push_back(n.sigma_r);
              c.sweep.noise.clear();
              const auto sp = parse_list("sweep.sigma_phi", v);
              for (double r : sr)
                for (double p : sp) c.sweep.noise.push_back({r, p});
            },
            [](const RunConfig& c) {
              std::vector<double> sp;
              for (const auto& n : c.sweep.noise)
                if (std::find(sp.begin(), sp.end(), n.sigma_phi) == sp.end()) sp.push_back(n.sigma_phi);
              return fmt_list(sp);
            }},
      Field{"sweep.denominators", P::published, false,
            [](RunConfig& c, const std::string& v) {
              c.sweep.denominators.clear();
              for (const auto& item : split(v, ','))
                c.sweep.denominators.push_back(static_cast<unsigned>(parse_uint("sweep.denominators", item)));
              if (c.sweep.denominators.empty()) throw ConfigError("sweep.denominators: empty list");
            },
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.sweep.denominators.size(); ++i)
                s += (i ? ", " : "") + std::to_string(c.sweep.denominators[i]);
              return s;
            }},
      Field{"sweep.kinds", P::published, false,
            [](RunConfig& c, const std::string& v) {
              c.sweep.kinds.clear();
              for (const auto& item : split(v, ',')) {
                try {
                  c.sweep.kinds.push_back(parse_exploration_kind(item));
                } catch (const std::invalid_argument& e) {
                  throw ConfigError(std::string("sweep.kinds: ") + e.what());
                }
              }
              if (c.sweep.kinds.empty()) throw ConfigError("sweep.kinds: empty list");
            },
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.sweep.kinds.size(); ++i)
                s += (i ? ", " : "") + std::string(to_string(c.sweep.kinds[i]));
              return s;
            }},
      Field{"sweep.include_random", P::published, false,
            [](RunConfig& c, const std::string& v) { c.sweep.include_random = parse_bool("sweep.include_random", v); },
            [](const RunConfig& c) { return std::string(c.sweep.include_random ? "true" : "false"); }},
  };
  return table;
}

#undef ASLAM_DOUBLE
#undef ASLAM_UINT

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::published:
      return "published";
    case Provenance::default_value:
      return "default";
    case Provenance::config:
      return "config";
  }
  return "?";
}

}  // namespace

std::string hex64(std::uint64_t value) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[value & 0xF];
    value >>= 4;
  }
  return {buf, 16};
}

RunConfig default_run_config() {
  RunConfig c;
  for (double r : {0.5, 0.75, 1.0, 1.25})
    for (double p : {0.3, 0.5, 0.7}) c.sweep.noise.push_back({r, p});
  for (const auto& f : fields()) c.provenance[f.key] = f.origin;
  return c;
}

RunConfig parse_run_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c = default_run_config();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config: key '" + section + "' outside a section");
    if (section == "output") {
      for (const auto& [key, value] : body) {
        if (key == "dir") c.output_dir = value_of(value.data());
        else if (key == "jobs") c.jobs = static_cast<int>(parse_uint("output.jobs", value_of(value.data())));
        else throw ConfigError("config: unknown key 'output." + key + "'");
      }
      continue;
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const Field* f = find_field(full);
      if (!f) throw ConfigError("config: unknown key '" + full + "'");
      f->set(c, value_of(value.data()));
      c.provenance[full] = Provenance::config;
    }
  }
  c.solver.max_iter = std::max(c.solver.max_iter, 1);
  c.sweep.trials = c.trials;
  c.sweep.horizon = c.horizon;
  c.sweep.seed = c.seed;
  c.sweep.beta = c.solver.beta;
  c.sweep.tol = c.solver.tol;
  c.sweep.max_iter = c.solver.max_iter;
  c.cost.beta = c.solver.beta;
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

void RunConfig::validate() const {
  try {
    problem.motion.validate();
    problem.sensor.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& q = problem.quant;
  if (q.pose_n == 0 || q.map_n == 0 || q.obs_range_bins == 0 || q.obs_bearing_bins == 0 || q.action_n == 0)
    throw ConfigError("quantization: every resolution must be positive");
  if (q.denominator == 0) throw ConfigError("quantization.denominator must be positive");
  for (const auto& atom : maps)
    if (atom.size() != static_cast<std::size_t>(problem.sensor.n_landmarks))
      throw ConfigError("maps.atoms: every atom needs sensor.landmarks landmarks");
  const double L = problem.motion.half_width;
  if (std::abs(problem.start.x) > L || std::abs(problem.start.y) > L)
    throw ConfigError("start: pose outside the workspace");
  if (!(solver.beta > 0.0 && solver.beta < 1.0)) throw ConfigError("solver.beta must lie in (0, 1)");
  if (!(solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (cost.lambda < 0.0) throw ConfigError("cost.lambda must be non-negative");
  for (double l : sweep.lambdas)
    if (l < 0.0) throw ConfigError("sweep.lambdas must be non-negative");
  for (const auto& n : sweep.noise)
    if (!(n.sigma_r > 0.0 && n.sigma_phi > 0.0)) throw ConfigError("sweep: noise levels must be positive");
  for (unsigned M : sweep.denominators)
    if (M == 0) throw ConfigError("sweep.denominators must be positive");
  if (trials < 20) throw ConfigError("evaluation.trials must be at least 20");
  if (horizon == 0) throw ConfigError("evaluation.horizon must be positive");
  if (jobs < 0) throw ConfigError("output.jobs must be non-negative");
}

std::string RunConfig::echo(bool annotate) const {
  std::string s;
  for (const auto& f : fields()) {
    s += f.key;
    s += " = ";
    s += f.get(*this);
    if (annotate) {
      auto it = provenance.find(f.key);
      s += "  # provenance: ";
      s += provenance_name(it == provenance.end() ? f.origin : it->second);
    }
    s += '\n';
  }
  return s;
}

std::uint64_t RunConfig::hash() const {
  Fnv1a h;
  const std::string text = echo(false);
  h.update(text.data(), text.size());
  return h.digest();
}

std::uint64_t RunConfig::model_hash() const {
  Fnv1a h;
  for (const auto& f : fields()) {
    if (!f.model) continue;
    const std::string line = std::string(f.key) + "=" + f.get(*this) + "\n";
    h.update(line.data(), line.size());
  }
  return h.digest();
}

KnownPoseProblem RunConfig::make_problem(Exec exec) const {
  if (maps.empty()) return KnownPoseProblem(problem, exec);
  return KnownPoseProblem(problem, maps, exec);
}

}  // namespace aslam
