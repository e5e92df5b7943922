#include "aslam/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "aslam/config.hpp"

static_assert(std::endian::native == std::endian::little, "cache files are written in native little-endian order");

namespace aslam {

namespace {

constexpr char kModelMagic[8] = {'A', 'S', 'L', 'A', 'M', 'M', 'D', 'L'};
constexpr char kPolicyMagic[8] = {'A', 'S', 'L', 'A', 'M', 'P', 'O', 'L'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw CacheError("cannot write '" + path.string() + "'");
  }
  template <class T>
  void put(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  template <class T>
  void put_vector(const std::vector<T>& v) {
    put<std::uint64_t>(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  }
  void put_string(const std::string& s) {
    put<std::uint64_t>(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void put_magic(const char (&m)[8]) { out_.write(m, 8); }
  void finish() {
    out_.flush();
    if (!out_) throw CacheError("write failed for '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw CacheError("cannot read '" + path.string() + "'");
  }
  template <class T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    check();
    return v;
  }
  template <class T>
  std::vector<T> get_vector() {
    const auto n = get<std::uint64_t>();
    const auto here = in_.tellg();
    in_.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in_.tellg() - here);
    in_.seekg(here);
    if (n > remaining / sizeof(T)) throw CacheError("truncated section in '" + path_.string() + "'");
    std::vector<T> v(n);
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    check();
    return v;
  }
  std::string get_string() {
    const auto bytes = get_vector<char>();
    return {bytes.begin(), bytes.end()};
  }
  void expect_magic(const char (&m)[8]) {
    char buf[8];
    in_.read(buf, 8);
    check();
    if (std::memcmp(buf, m, 8) != 0) throw CacheError("'" + path_.string() + "' has the wrong file type");
  }

 private:
  void check() {
    if (!in_) throw CacheError("truncated file '" + path_.string() + "'");
  }
  std::filesystem::path path_;
  std::ifstream in_;
};

void put_kernel(Writer& w, const KernelMatrix& k) {
  w.put<std::uint64_t>(k.states());
  w.put<std::uint64_t>(k.inputs());
  w.put<std::uint64_t>(k.cols());
  w.put_vector(k.data());
}

KernelMatrix get_kernel(Reader& r) {
  const auto states = r.get<std::uint64_t>();
  const auto inputs = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  auto data = r.get_vector<double>();
  if (data.size() != states * inputs * cols) throw CacheError("kernel section has the wrong size");
  KernelMatrix k(states, inputs, cols);
  k.data() = std::move(data);
  return k;
}

}  // namespace

std::string model_cache_name(std::uint64_t model_hash) { return "model-" + hex64(model_hash) + ".bin"; }

void write_model_cache(const std::filesystem::path& path, const ModelCache& c) {
  Writer w(path);
  w.put_magic(kModelMagic);
  w.put(kCacheFormatVersion);
  w.put(c.model_hash);
  put_kernel(w, c.pose_kernel);
  put_kernel(w, c.likelihood);
  w.put<std::uint64_t>(c.atoms);
  w.put<std::uint32_t>(c.denominator);
  w.put_vector(c.levels);
  w.put<std::uint64_t>(c.eta.grid_size());
  w.put<std::uint64_t>(c.eta.inputs());
  w.put_vector(c.eta.offsets());
  // Field-wise: the struct has padding bytes that must not reach the file.
  std::vector<std::uint32_t> next;
  std::vector<double> prob;
  next.reserve(c.eta.nonzeros());
  prob.reserve(c.eta.nonzeros());
  for (const auto& e : c.eta.entries()) {
    next.push_back(e.next);
    prob.push_back(e.prob);
  }
  w.put_vector(next);
  w.put_vector(prob);
  w.finish();
}

ModelCache read_model_cache(const std::filesystem::path& path, std::uint64_t expected_hash) {
  if (!std::filesystem::exists(path)) throw CacheError("missing cache '" + path.string() + "'");
  Reader r(path);
  r.expect_magic(kModelMagic);
  if (r.get<std::uint32_t>() != kCacheFormatVersion) throw CacheError("unsupported cache format version");
  ModelCache c;
  c.model_hash = r.get<std::uint64_t>();
  if (c.model_hash != expected_hash)
    throw CacheError("cache '" + path.string() + "' was built for model " + hex64(c.model_hash));
  c.pose_kernel = get_kernel(r);
  c.likelihood = get_kernel(r);
  c.atoms = r.get<std::uint64_t>();
  c.denominator = r.get<std::uint32_t>();
  c.levels = r.get_vector<Level>();
  const auto grid = r.get<std::uint64_t>();
  const auto inputs = r.get<std::uint64_t>();
  auto offsets = r.get_vector<std::uint64_t>();
  const auto next = r.get_vector<std::uint32_t>();
  const auto prob = r.get_vector<double>();
  if (next.size() != prob.size()) throw CacheError("inconsistent belief-transition section");
  std::vector<GridTransition> entries(next.size());
  for (std::size_t k = 0; k < next.size(); ++k) {
    if (next[k] >= grid) throw CacheError("belief-transition entry outside the grid");
    entries[k] = {next[k], prob[k]};
  }
  if (offsets.size() != grid * inputs + 1 || offsets.back() != entries.size() ||
      c.levels.size() != grid * c.atoms)
    throw CacheError("inconsistent belief-transition section");
  c.eta = BeliefTransition(grid, inputs, std::move(offsets), std::move(entries));
  return c;
}

void write_policy_file(const std::filesystem::path& path, const PolicyFile& f) {
  Writer w(path);
  w.put_magic(kPolicyMagic);
  w.put(kCacheFormatVersion);
  w.put(f.config_hash);
  w.put(f.model_hash);
  w.put_string(f.version);
  const Policy& p = f.policy;
  w.put<std::uint64_t>(p.poses);
  w.put<std::uint64_t>(p.grid_size);
  w.put<std::uint64_t>(p.atoms);
  w.put<std::uint32_t>(p.denominator);
  w.put<std::uint64_t>(p.actions);
  w.put<std::uint32_t>(p.kind == ExplorationKind::rao ? 0 : 1);
  w.put(p.lambda);
  w.put(p.beta);
  w.put(f.iterations);
  w.put(f.bellman_residual);
  w.put_vector(p.table);
  w.put_vector(f.value);
  w.finish();
}

PolicyFile read_policy_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw CacheError("missing policy file '" + path.string() + "'");
  Reader r(path);
  r.expect_magic(kPolicyMagic);
  if (r.get<std::uint32_t>() != kCacheFormatVersion) throw CacheError("unsupported policy format version");
  PolicyFile f;
  f.config_hash = r.get<std::uint64_t>();
  f.model_hash = r.get<std::uint64_t>();
  f.version = r.get_string();
  Policy& p = f.policy;
  p.poses = r.get<std::uint64_t>();
  p.grid_size = r.get<std::uint64_t>();
  p.atoms = r.get<std::uint64_t>();
  p.denominator = r.get<std::uint32_t>();
  p.actions = r.get<std::uint64_t>();
  p.kind = r.get<std::uint32_t>() == 0 ? ExplorationKind::rao : ExplorationKind::shannon;
  p.lambda = r.get<double>();
  p.beta = r.get<double>();
  f.iterations = r.get<std::uint64_t>();
  f.bellman_residual = r.get<double>();
  p.table = r.get_vector<std::uint32_t>();
  f.value = r.get_vector<double>();
  if (p.table.size() != p.poses * p.grid_size || f.value.size() != p.table.size())
    throw CacheError("inconsistent policy file '" + path.string() + "'");
  for (auto a : p.table)
    if (a >= p.actions) throw CacheError("policy file has an action outside the net");
  return f;
}

}  // namespace aslam
