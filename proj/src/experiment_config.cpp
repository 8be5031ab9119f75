#include <cmath>
#include <algorithm>
#include <set>
#include <sstream>

#include "chaospso/csv.hpp"
#include "chaospso/errors.hpp"
#include "chaospso/experiment.hpp"
#include "chaospso/seeding.hpp"
#include "chaospso/sequence_sources.hpp"

namespace chaospso {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  try {
    const long long x = parse_int(v);
    if (x < -2147483647LL || x > 2147483647LL) throw ValidationError("out of range");
    return static_cast<int>(x);
  } catch (const ValidationError&) {
    throw ValidationError(std::string(key) + " expects an integer, got '" + std::string(v) + "'");
  }
}

double to_double(std::string_view key, std::string_view v) {
  try {
    return parse_double(v);
  } catch (const ValidationError&) {
    throw ValidationError(std::string(key) + " expects a number, got '" + std::string(v) + "'");
  }
}

std::vector<int> parse_functions(std::string_view v) {
  if (v == "all") {
    std::vector<int> all;
    for (const auto& f : list_suite()) all.push_back(f.id);
    return all;
  }
  std::vector<int> out;
  for (auto item : split(v, ',')) {
    const auto dash = item.find('-', 1);
    if (dash != std::string_view::npos) {
      const int lo = to_int("functions", trim(item.substr(0, dash)));
      const int hi = to_int("functions", trim(item.substr(dash + 1)));
      if (lo > hi) throw ValidationError("functions: empty range '" + std::string(item) + "'");
      for (int f = lo; f <= hi; ++f) out.push_back(f);
    } else {
      out.push_back(to_int("functions", item));
    }
  }
  return out;
}

std::string join_functions(const std::vector<int>& f) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + std::to_string(f[i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (sources.empty()) throw ValidationError("sources must not be empty");
  if (functions.empty()) throw ValidationError("functions must not be empty");
  std::set<std::string> seen_s;
  for (const auto& s : sources) {
    if (!is_known_source(s)) throw ValidationError("unknown source id: " + s);
    if (!seen_s.insert(s).second) throw ValidationError("duplicate source id: " + s);
  }
  const int n_functions = static_cast<int>(list_suite().size());
  std::set<int> seen_f;
  for (int f : functions) {
    if (f < 1 || f > n_functions) throw ValidationError("unknown function id: " + std::to_string(f));
    if (!seen_f.insert(f).second) throw ValidationError("duplicate function id: " + std::to_string(f));
    if (swarm.error_metric == ErrorMetric::Position && metadata(f).known_optimizers.empty())
      throw ValidationError("error_metric=position needs known optimizers; function " + std::to_string(f) +
                            " lists none");
  }
  for (const auto& [id, b] : bounds)
    if (id < 1 || id > n_functions) throw ValidationError("bounds for unknown function id: " + std::to_string(id));
  if (runs_per_pair < 1) throw ValidationError("runs_per_pair must be at least 1");
  if (rating.block_size < 1) throw ValidationError("block_size must be at least 1");
  if (runs_per_pair % rating.block_size != 0)
    throw ValidationError("runs_per_pair (" + std::to_string(runs_per_pair) + ") must be divisible by block_size (" +
                          std::to_string(rating.block_size) + ")");
  swarm.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(rating.elo_k > 0.0)) throw ValidationError("elo_k must be positive");
  if (!(rating.epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  if (!(rating.tau > 0.0)) throw ValidationError("tau must be positive");
  if (analysis.density_inits < 1 || analysis.lyapunov_inits < 1 || analysis.autocorr_inits < 1)
    throw ValidationError("analysis inits must be at least 1");
  if (analysis.bins < 2) throw ValidationError("bins must be at least 2");
  if (analysis.lmax < 10) throw ValidationError("lmax must be at least 10 (AUC integrates lags 1..10)");
  if (analysis.iters <= analysis.lmax) throw ValidationError("iters must exceed lmax");
  if (workers < 1) throw ValidationError("workers must be at least 1");
  if (output_dir.empty()) throw ValidationError("output_dir must not be empty");
}

BenchmarkFunction ExperimentConfig::function(int id) const {
  const auto it = bounds.find(id);
  if (it == bounds.end()) return metadata(id);
  return with_bounds(id, it->second.first, it->second.second);
}

Preset parse_preset(std::string_view name) {
  if (name == "paper") return Preset::Paper;
  if (name == "desk") return Preset::Desk;
  throw ValidationError("unknown preset '" + std::string(name) + "' (expected desk or paper)");
}

ExperimentConfig default_config(Preset preset) {
  ExperimentConfig cfg;
  cfg.sources = source_ids();
  for (const auto& f : list_suite()) cfg.functions.push_back(f.id);
  if (preset == Preset::Desk) {
    cfg.runs_per_pair = 200;
    cfg.analysis.density_inits = 1000;
    cfg.analysis.lyapunov_inits = 1000;
    cfg.analysis.autocorr_inits = 1000;
  }
  return cfg;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (key == "sources") {
    cfg.sources.clear();
    if (value == "all") {
      cfg.sources = source_ids();
      return;
    }
    for (auto s : split(value, ',')) {
      if (!is_known_source(s)) throw ValidationError("unknown source id: " + std::string(s));
      cfg.sources.emplace_back(s);
    }
  } else if (key == "functions") {
    cfg.functions = parse_functions(value);
  } else if (key == "runs_per_pair") {
    cfg.runs_per_pair = to_int(key, value);
  } else if (key == "w") {
    cfg.swarm.w = to_double(key, value);
  } else if (key == "c1") {
    cfg.swarm.c1 = to_double(key, value);
  } else if (key == "c2") {
    cfg.swarm.c2 = to_double(key, value);
  } else if (key == "swarm_size") {
    cfg.swarm.swarm_size = to_int(key, value);
  } else if (key == "generations") {
    cfg.swarm.generations = to_int(key, value);
  } else if (key == "r_draws") {
    if (value == "per_coordinate") cfg.swarm.draw_mode = DrawMode::PerCoordinate;
    else if (value == "per_particle") cfg.swarm.draw_mode = DrawMode::PerParticle;
    else throw ValidationError("r_draws expects per_coordinate or per_particle");
  } else if (key == "error_metric") {
    if (value == "value") cfg.swarm.error_metric = ErrorMetric::Value;
    else if (value == "position") cfg.swarm.error_metric = ErrorMetric::Position;
    else throw ValidationError("error_metric expects value or position");
  } else if (key == "master_seed") {
    try {
      cfg.master_seed = parse_u64(value);
    } catch (const ValidationError&) {
      throw ValidationError("master_seed expects an unsigned 64-bit integer, got '" + std::string(value) + "'");
    }
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, value);
  } else if (key == "elo_initial") {
    cfg.rating.elo_initial = to_double(key, value);
  } else if (key == "elo_k") {
    cfg.rating.elo_k = to_double(key, value);
  } else if (key == "epsilon") {
    cfg.rating.epsilon = to_double(key, value);
  } else if (key == "draw_mode") {
    if (value == "absolute") cfg.rating.draw_rule = DrawRule::Absolute;
    else if (value == "relative") cfg.rating.draw_rule = DrawRule::Relative;
    else throw ValidationError("draw_mode expects absolute or relative");
  } else if (key == "tau") {
    cfg.rating.tau = to_double(key, value);
  } else if (key == "block_size") {
    cfg.rating.block_size = to_int(key, value);
  } else if (key == "density_inits") {
    cfg.analysis.density_inits = to_int(key, value);
  } else if (key == "lyapunov_inits") {
    cfg.analysis.lyapunov_inits = to_int(key, value);
  } else if (key == "autocorr_inits") {
    cfg.analysis.autocorr_inits = to_int(key, value);
  } else if (key == "iters") {
    cfg.analysis.iters = to_int(key, value);
  } else if (key == "bins") {
    cfg.analysis.bins = to_int(key, value);
  } else if (key == "lmax") {
    cfg.analysis.lmax = to_int(key, value);
  } else if (key == "workers") {
    cfg.workers = to_int(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else if (key.starts_with("bounds.")) {
    const int id = to_int(key, key.substr(7));
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw ValidationError(k + " expects lo,hi");
    const double lo = to_double(key, parts[0]), hi = to_double(key, parts[1]);
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw ValidationError(k + " must satisfy lo < hi");
    cfg.bounds[id] = {lo, hi};
  } else {
    throw ValidationError("unknown config key: " + k);
  }
}

ExperimentConfig parse_config(std::string_view text, Preset preset) {
  ExperimentConfig cfg = default_config(preset);
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, Preset preset) {
  return parse_config(read_file(path), preset);
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string src;
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) src += (i ? "," : "") + cfg.sources[i];
  out << "sources=" << src << '\n';
  out << "functions=" << join_functions(cfg.functions) << '\n';
  out << "runs_per_pair=" << cfg.runs_per_pair << '\n';
  out << "w=" << format_double(cfg.swarm.w) << '\n';
  out << "c1=" << format_double(cfg.swarm.c1) << '\n';
  out << "c2=" << format_double(cfg.swarm.c2) << '\n';
  out << "swarm_size=" << cfg.swarm.swarm_size << '\n';
  out << "generations=" << cfg.swarm.generations << '\n';
  out << "r_draws=" << (cfg.swarm.draw_mode == DrawMode::PerCoordinate ? "per_coordinate" : "per_particle") << '\n';
  out << "error_metric=" << (cfg.swarm.error_metric == ErrorMetric::Value ? "value" : "position") << '\n';
  out << "master_seed=" << cfg.master_seed << '\n';
  out << "alpha=" << format_double(cfg.alpha) << '\n';
  out << "elo_initial=" << format_double(cfg.rating.elo_initial) << '\n';
  out << "elo_k=" << format_double(cfg.rating.elo_k) << '\n';
  out << "epsilon=" << format_double(cfg.rating.epsilon) << '\n';
  out << "draw_mode=" << (cfg.rating.draw_rule == DrawRule::Absolute ? "absolute" : "relative") << '\n';
  out << "tau=" << format_double(cfg.rating.tau) << '\n';
  out << "block_size=" << cfg.rating.block_size << '\n';
  out << "density_inits=" << cfg.analysis.density_inits << '\n';
  out << "lyapunov_inits=" << cfg.analysis.lyapunov_inits << '\n';
  out << "autocorr_inits=" << cfg.analysis.autocorr_inits << '\n';
  out << "iters=" << cfg.analysis.iters << '\n';
  out << "bins=" << cfg.analysis.bins << '\n';
  out << "lmax=" << cfg.analysis.lmax << '\n';
  for (const auto& [id, b] : cfg.bounds)
    out << "bounds." << id << '=' << format_double(b.first) << ',' << format_double(b.second) << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return stable_hash(canonical_config(cfg)); }

}  // namespace chaospso
