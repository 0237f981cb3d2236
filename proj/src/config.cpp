#include "sblue/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sblue/errors.hpp"
#include "sblue/io.hpp"

namespace sblue {

namespace {

std::pair<std::string, std::string> split_kv(const std::string& text,
                                             const std::string& where) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(where + ": expected key=value, got '" + text + "'");
  }
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

class PairReader {
 public:
  explicit PairReader(const std::map<std::string, std::string>& pairs)
      : pairs_(pairs) {}

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    const auto it = pairs_.find(key);
    if (it == pairs_.end()) return std::nullopt;
    return it->second;
  }

  double number(const std::string& key, double fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    return to_number(key, *v);
  }

  std::optional<double> number_opt(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    return to_number(key, *v);
  }

  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError(key + " must be an integer");
    }
    return i;
  }

  void check_all_used() const {
    for (const auto& [k, _] : pairs_) {
      if (!used_.contains(k)) throw ConfigError("unknown config key '" + k + "'");
    }
  }

 private:
  double to_number(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(key + ": not a number: '" + v + "'");
    }
  }

  const std::map<std::string, std::string>& pairs_;
  std::set<std::string> used_;
};

KernelSpec parse_kernel(PairReader& r, const std::string& prefix,
                        const KernelSpec& fallback) {
  const auto kind = r.raw(prefix + ".kernel");
  const std::string name = kind.value_or("squared_exponential");
  if (name == "squared_exponential") {
    SquaredExponential k;
    if (const auto* fb = std::get_if<SquaredExponential>(&fallback)) k = *fb;
    k.sigma2 = r.number(prefix + ".sigma2", k.sigma2);
    k.length = r.number(prefix + ".length", k.length);
    // consume separable keys so typos are still reported as unknown-key
    return k;
  }
  if (name == "separable_exponential") {
    SeparableExponential k;
    if (const auto* fb = std::get_if<SeparableExponential>(&fallback)) k = *fb;
    k.sigma2_x = r.number(prefix + ".sigma2_x", k.sigma2_x);
    k.len_x = r.number(prefix + ".len_x", k.len_x);
    k.sigma2_y = r.number(prefix + ".sigma2_y", k.sigma2_y);
    k.len_y = r.number(prefix + ".len_y", k.len_y);
    return k;
  }
  throw ConfigError(prefix + ".kernel: unknown kernel '" + name + "'");
}

LinkFunction parse_link(const std::string& name) {
  if (name == "reciprocal") return LinkFunction::Reciprocal;
  if (name == "reciprocal_square") return LinkFunction::ReciprocalSquare;
  if (name == "exp_negative") return LinkFunction::ExpNegative;
  throw ConfigError("link: unknown link function '" + name + "'");
}

}  // namespace

std::map<std::string, std::string> config_pairs(
    const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> pairs;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto [k, v] = split_kv(line, path.string() + ":" + std::to_string(line_no));
    pairs[k] = v;
  }
  for (const auto& ov : overrides) {
    const auto [k, v] = split_kv(ov, "--set");
    pairs[k] = v;
  }
  return pairs;
}

std::uint64_t config_hash(const std::map<std::string, std::string>& pairs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : pairs) {  // std::map iterates in sorted key order
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  return h;
}

RunConfig config_from_pairs(const std::map<std::string, std::string>& pairs) {
  PairReader r(pairs);
  RunConfig cfg;

  cfg.field.mean = r.number("field.mean", 0.0);
  cfg.field.kernel = parse_kernel(r, "field", SquaredExponential{10.0, 1.0});
  cfg.energy.log_mean = r.number("energy.log_mean", 0.0);
  cfg.energy.log_kernel = parse_kernel(r, "energy", SquaredExponential{0.3, 1.0});
  cfg.link = parse_link(r.raw("link").value_or("reciprocal"));
  cfg.sigma_w = r.number("sigma_w", 1.0);
  cfg.threshold = r.number("threshold", 0.0);

  const auto nh = r.number_opt("deployment.n_high");
  const auto nl = r.number_opt("deployment.n_low");
  const auto csv = r.raw("deployment.csv");
  if (csv.has_value() && (nh.has_value() || nl.has_value())) {
    throw ConfigError("give either deployment.csv or deployment.n_high/n_low, not both");
  }
  if (csv.has_value()) {
    cfg.deployment_csv = *csv;
  } else if (nh.has_value() || nl.has_value()) {
    const int h = static_cast<int>(nh.value_or(0.0));
    const int l = static_cast<int>(nl.value_or(0.0));
    if (h < 0 || l < 0 || h + l < 1) {
      throw ConfigError("deployment requires at least one sensor");
    }
    cfg.deployment_counts = {h, l};
  } else {
    throw ConfigError("missing deployment source (deployment.csv or deployment.n_high/n_low)");
  }

  cfg.region.x_min = r.number("region.x_min", 0.0);
  cfg.region.x_max = r.number("region.x_max", 5.0);
  cfg.region.y_min = r.number("region.y_min", 0.0);
  cfg.region.y_max = r.number("region.y_max", 5.0);
  if (!(cfg.region.x_max > cfg.region.x_min) || !(cfg.region.y_max > cfg.region.y_min)) {
    throw ConfigError("region extents must be nonempty");
  }

  cfg.grid.x_min = r.number("grid.x_min", cfg.region.x_min);
  cfg.grid.x_max = r.number("grid.x_max", cfg.region.x_max);
  cfg.grid.y_min = r.number("grid.y_min", cfg.region.y_min);
  cfg.grid.y_max = r.number("grid.y_max", cfg.region.y_max);
  cfg.grid.nx = r.integer("grid.nx", 50);
  cfg.grid.ny = r.integer("grid.ny", 50);
  if (cfg.grid.nx < 1 || cfg.grid.ny < 1) throw ConfigError("grid must be at least 1x1");

  cfg.ce.samples_per_iter = r.integer("ce.samples", 500);
  cfg.ce.elite_fraction = r.number("ce.elite_fraction", 0.05);
  cfg.ce.smoothing = r.number("ce.smoothing", 0.8);
  cfg.ce.decision_threshold = r.number("ce.decision_threshold", 0.5);
  cfg.ce.max_iters = r.integer("ce.max_iters", 50);
  cfg.ce.stall_iters = r.integer("ce.stall_iters", 10);
  cfg.ce.w_high = r.number("ce.w_high", 150.0);
  cfg.ce.w_low = r.number("ce.w_low", 30.0);

  if (const auto seed = r.number_opt("seed")) {
    if (*seed < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*seed);
    cfg.seed_set = true;
  }

  r.check_all_used();

  try {
    validate_kernel(cfg.field.kernel);
    validate_kernel(cfg.energy.log_kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.sigma_w > 0.0)) throw ConfigError("sigma_w must be positive");
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  return config_from_pairs(config_pairs(path, overrides));
}

SensorDeployment build_deployment(const RunConfig& config) {
  SensorDeployment d;
  d.field = config.field;
  d.energy = config.energy;
  d.link = config.link;
  d.threshold = config.threshold;
  d.high_noise_sd = config.sigma_w;

  if (config.deployment_csv) {
    for (const auto& rec : read_deployment_csv(*config.deployment_csv)) {
      (rec.kind == 'H' ? d.high_locs : d.low_locs).push_back(rec.loc);
    }
  } else {
    // Geometry depends on the seed alone, so simulate/reconstruct/select all
    // agree on sensor positions for the same config.
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> ux(config.region.x_min, config.region.x_max);
    std::uniform_real_distribution<double> uy(config.region.y_min, config.region.y_max);
    const auto [nh, nl] = *config.deployment_counts;
    for (int i = 0; i < nh; ++i) {
      const double x = ux(rng);
      d.high_locs.push_back({x, uy(rng)});
    }
    for (int i = 0; i < nl; ++i) {
      const double x = ux(rng);
      d.low_locs.push_back({x, uy(rng)});
    }
  }
  validate_deployment(d);
  return d;
}

}  // namespace sblue
