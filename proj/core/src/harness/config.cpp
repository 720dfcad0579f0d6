#include "gaussmatch/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gaussmatch::harness {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::matching: return "matching";
    case Estimator::proxy: return "proxy";
    case Estimator::certificate: return "certificate";
    case Estimator::lower_bound: return "lower-bound";
  }
  return "unknown";
}

std::string to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::exact: return "exact";
    case SolverChoice::sinkhorn: return "sinkhorn";
    case SolverChoice::sorted_1d: return "sorted-1d";
    case SolverChoice::auto_select: return "auto";
  }
  return "unknown";
}

Estimator parse_estimator(const std::string& s) {
  if (s == "matching") return Estimator::matching;
  if (s == "proxy") return Estimator::proxy;
  if (s == "certificate") return Estimator::certificate;
  if (s == "lower-bound") return Estimator::lower_bound;
  throw ConfigError("unknown estimator '" + s + "' (matching, proxy, certificate, lower-bound)");
}

SolverChoice parse_solver(const std::string& s) {
  if (s == "exact") return SolverChoice::exact;
  if (s == "sinkhorn") return SolverChoice::sinkhorn;
  if (s == "sorted-1d") return SolverChoice::sorted_1d;
  if (s == "auto") return SolverChoice::auto_select;
  throw ConfigError("unknown solver '" + s + "' (exact, sinkhorn, sorted-1d, auto)");
}

int default_replicates(std::size_t n) {
  const std::size_t r = (16384 + n - 1) / n;
  return static_cast<int>(std::clamp<std::size_t>(r, 8, 512));
}

int ExperimentConfig::replicates_for(std::size_t n) const {
  if (estimator == Estimator::lower_bound) return 1;
  return replicates ? *replicates : default_replicates(n);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (d < 1) fail("d must be >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) fail("p must be >= 1");
  if (n_grid.empty()) fail("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) fail("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n-grid must be strictly increasing");
  }
  if (replicates && *replicates < 1) fail("reps must be >= 1");
  if (solver == SolverChoice::sorted_1d && d != 1) fail("solver sorted-1d requires d = 1");
  if (proxy_multiplier < 4) fail("proxy-mult must be >= 4");
  if (threads < 1) fail("threads must be >= 1");
  if (!(epsilon_min > 0.0)) fail("epsilon-min must be > 0");
  if (y_samples < 1000) fail("y-samples must be >= 1000");
  if (!(min_n >= 1.0)) fail("min-n must be >= 1");
  if (c && !(*c > 0.0)) fail("c must be > 0");
  if (estimator == Estimator::lower_bound && p != 2.0) fail("lower-bound estimator is defined for p = 2");
  if (estimator == Estimator::certificate) {
    if (n_grid.front() < min_n) fail("certificate estimator needs every n >= min-n");
    if (variant == smoothing::Variant::general_p && !(p < d)) fail("general variant needs p < d");
    if (variant == smoothing::Variant::p_equals_d && p != d) fail("p-equals-d variant needs p = d");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const std::string v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("cannot parse value '" + value + "' for key '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("cannot parse boolean '" + value + "' for key '" + key + "'");
}

}  // namespace

std::vector<std::size_t> parse_n_grid(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    // accept 1e5 style entries
    const double v = parse_number<double>("n-grid", item);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) throw ConfigError("bad n-grid entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ConfigError("empty n-grid");
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"d",       "p",       "n-grid",      "reps",      "seed",
                                                "estimator", "solver", "proxy-mult", "variant",   "c",
                                                "min-n",   "epsilon-min", "y-samples", "timing",  "threads",
                                                "out"};
  return keys;
}

void apply_key_value(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(value);
  if (key == "d") cfg.d = parse_number<int>(key, v);
  else if (key == "p") cfg.p = parse_number<double>(key, v);
  else if (key == "n-grid") cfg.n_grid = parse_n_grid(v);
  else if (key == "reps") cfg.replicates = v == "auto" ? std::nullopt : std::optional<int>(parse_number<int>(key, v));
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "estimator") cfg.estimator = parse_estimator(v);
  else if (key == "solver") cfg.solver = parse_solver(v);
  else if (key == "proxy-mult") cfg.proxy_multiplier = parse_number<int>(key, v);
  else if (key == "variant") {
    try {
      cfg.variant = smoothing::parse_variant(v);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "c") cfg.c = v == "auto" ? std::nullopt : std::optional<double>(parse_number<double>(key, v));
  else if (key == "min-n") cfg.min_n = parse_number<double>(key, v);
  else if (key == "epsilon-min") cfg.epsilon_min = parse_number<double>(key, v);
  else if (key == "y-samples") cfg.y_samples = parse_number<int>(key, v);
  else if (key == "timing") cfg.timing = parse_bool(key, v);
  else if (key == "threads") cfg.threads = parse_number<int>(key, v);
  else if (key == "out") cfg.out_dir = v;
  else throw ConfigError("unknown configuration key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_key_value(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["d"] = cfg.d;
  j["p"] = cfg.p;
  j["n-grid"] = cfg.n_grid;
  j["reps"] = cfg.replicates ? nlohmann::json(*cfg.replicates) : nlohmann::json("auto");
  j["seed"] = cfg.seed;
  j["estimator"] = to_string(cfg.estimator);
  j["solver"] = to_string(cfg.solver);
  j["proxy-mult"] = cfg.proxy_multiplier;
  j["variant"] = smoothing::to_string(cfg.variant);
  j["c"] = cfg.c ? nlohmann::json(*cfg.c) : nlohmann::json("auto");
  j["min-n"] = cfg.min_n;
  j["epsilon-min"] = cfg.epsilon_min;
  j["y-samples"] = cfg.y_samples;
  j["timing"] = cfg.timing;
  return j;
}

}  // namespace gaussmatch::harness
