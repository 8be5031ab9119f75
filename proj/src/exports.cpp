#include <algorithm>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "chaospso/csv.hpp"
#include "chaospso/errors.hpp"
#include "chaospso/experiment.hpp"
#include "chaospso/seeding.hpp"
#include "chaospso/sequence_analysis.hpp"
#include "chaospso/sequence_sources.hpp"

#ifndef CHAOSPSO_VERSION
#define CHAOSPSO_VERSION "0.0.0"
#endif

namespace chaospso {

namespace {

std::string out_path(const ExperimentConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void write_export(const ExperimentConfig& cfg, const char* name, const std::string& content, ExportReport& report) {
  std::filesystem::create_directories(cfg.output_dir);
  write_file_atomic(out_path(cfg, name), content);
  report.written.emplace_back(name);
}

std::string join(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_double(v[i]);
  }
  return out;
}

std::string bound_field(const std::vector<double>& v) {
  const bool uniform = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  return uniform ? format_double(v.front()) : join(v, ';');
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class F>
void guarded(const char* what, ExportReport& report, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report.errors.push_back(std::string(what) + ": " + e.what());
  }
}

}  // namespace

BoxplotSummary summarize_boxplot(std::vector<double> v) {
  if (v.size() < 5) throw ValidationError("boxplot needs at least 5 values, got " + std::to_string(v.size()));
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  auto med = [&](std::size_t lo, std::size_t hi) {  // median of v[lo, hi)
    const std::size_t m = hi - lo;
    return m % 2 ? v[lo + m / 2] : 0.5 * (v[lo + m / 2 - 1] + v[lo + m / 2]);
  };
  BoxplotSummary b;
  b.median = med(0, n);
  // Tukey hinges: medians of the halves, each including the median when n is odd.
  const std::size_t half = (n + 1) / 2;
  b.q1 = med(0, half);
  b.q3 = med(n - half, n);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  CompensatedSum sum;
  for (double x : v) {
    sum.add(x);
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
      continue;
    }
    b.whisker_lo = std::min(b.whisker_lo, x);
    b.whisker_hi = std::max(b.whisker_hi, x);
  }
  b.mean = sum.value() / static_cast<double>(n);
  return b;
}

BoxplotSummary summarize_boxplot(const ErrorTable& table, const std::string& source_id, int function_id) {
  const auto it = table.find({source_id, function_id});
  if (it == table.end())
    throw ValidationError("no results for (" + source_id + ", " + std::to_string(function_id) + ")");
  BoxplotSummary b = summarize_boxplot(it->second);
  b.source_id = source_id;
  b.function_id = function_id;
  return b;
}

void export_analysis(const ExperimentConfig& cfg, ExportReport& report) {
  const auto& a = cfg.analysis;
  struct Stats {
    DensityHistogram density;
    AutocorrReport autocorr;
    bool is_map = false;
    double lambda = 0.0;
  };
  std::vector<Stats> stats(cfg.sources.size());
  AutocorrReport reference;
  parallel_for(cfg.sources.size() + 1, cfg.workers, [&](std::size_t i) {
    if (i == cfg.sources.size()) {
      reference = mean_autocorrelation(source_spec("uniform_0_1"), a.autocorr_inits, a.iters, a.lmax, cfg.master_seed);
      return;
    }
    const SourceSpec spec = source_spec(cfg.sources[i]);
    Stats& s = stats[i];
    s.density = invariant_density(spec, a.density_inits, a.iters, a.bins, cfg.master_seed);
    s.autocorr = mean_autocorrelation(spec, a.autocorr_inits, a.iters, a.lmax, cfg.master_seed);
    s.is_map = spec.is_map();
    if (s.is_map) s.lambda = lyapunov_exponent(spec, a.lyapunov_inits, a.iters, cfg.master_seed).lambda;
  });
  const double ref_auc = autocorr_auc(reference, 1.0).first;

  std::string density = csv_row({"source_id", "bin_lo", "bin_hi", "density"});
  std::string autocorr = csv_row({"source_id", "lag", "r"});
  std::string map_stats = csv_row({"source_id", "lambda", "auc_raw", "auc_normalized"});
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    const auto& s = stats[i];
    const auto& id = cfg.sources[i];
    for (std::size_t b = 0; b < s.density.density.size(); ++b)
      density += csv_row({id, format_double(s.density.bin_edges[b]), format_double(s.density.bin_edges[b + 1]),
                          format_double(s.density.density[b])});
    for (std::size_t l = 0; l < s.autocorr.lags.size(); ++l)
      autocorr += csv_row({id, std::to_string(s.autocorr.lags[l]), format_double(s.autocorr.r[l])});
    const auto [raw, norm] = autocorr_auc(s.autocorr, ref_auc);
    map_stats += csv_row({id, s.is_map ? format_double(s.lambda) : "", format_double(raw), format_double(norm)});
  }
  write_export(cfg, "density.csv", density, report);
  write_export(cfg, "autocorr.csv", autocorr, report);
  write_export(cfg, "map_stats.csv", map_stats, report);
}

void export_suite(const ExperimentConfig& cfg, ExportReport& report) {
  std::string out = csv_row({"id", "name", "D", "lo", "hi", "direction", "f_star"});
  for (const auto& meta : list_suite()) {
    const auto f = cfg.function(meta.id);
    out += csv_row({std::to_string(f.id), f.name, std::to_string(f.dimension), bound_field(f.lo), bound_field(f.hi),
                    std::string(direction_name(f.direction)), format_double(f.f_star)});
  }
  write_export(cfg, "suite.csv", out, report);
}

void export_boxplots(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report) {
  std::string out = csv_row({"source_id", "function_id", "q1", "median", "q3", "whisker_lo", "whisker_hi", "mean",
                             "outliers"});
  for (const auto& s : cfg.sources)
    for (int f : cfg.functions) {
      const auto b = summarize_boxplot(table, s, f);
      out += csv_row({s, std::to_string(f), format_double(b.q1), format_double(b.median), format_double(b.q3),
                      format_double(b.whisker_lo), format_double(b.whisker_hi), format_double(b.mean),
                      join(b.outliers, ';')});
    }
  write_export(cfg, "boxplots.csv", out, report);
}

void export_comparison(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report) {
  const auto m = comparison_matrix(table, cfg.sources, cfg.functions, cfg.alpha);
  std::string matrix = csv_row({"row_source", "col_source", "test", "plus", "minus", "tie"});
  std::string heat = csv_row({"row_source", "col_source", "test", "tie_fraction"});
  for (StatTest t : {StatTest::Wilcoxon, StatTest::Friedman})
    for (std::size_t i = 0; i < m.sources.size(); ++i)
      for (std::size_t j = 0; j < m.sources.size(); ++j) {
        if (i == j) continue;
        const Counts& c = m.cell(t, i, j);
        const std::string name(test_name(t));
        matrix += csv_row({m.sources[i], m.sources[j], name, std::to_string(c.plus), std::to_string(c.minus),
                           std::to_string(c.tie)});
        heat += csv_row({m.sources[i], m.sources[j], name, format_double(tie_fraction(c))});
      }
  write_export(cfg, "matrix.csv", matrix, report);
  write_export(cfg, "heatmap.csv", heat, report);
}

void export_ratings(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report) {
  const auto t = run_tournament(table, cfg.sources, cfg.functions, cfg.rating);
  std::string ratings = csv_row({"source_id", "elo", "elo_ci_lo", "elo_ci_hi", "glicko_r", "glicko_rd",
                                 "glicko_sigma", "glicko_ci_lo", "glicko_ci_hi"});
  for (const auto& r : t.ratings)
    ratings += csv_row({r.source_id, format_double(r.final.elo), format_double(r.elo_ci_lo),
                        format_double(r.elo_ci_hi), format_double(r.final.glicko_r), format_double(r.final.glicko_rd),
                        format_double(r.final.glicko_sigma), format_double(r.glicko_ci_lo),
                        format_double(r.glicko_ci_hi)});
  std::string games = csv_row({"player_a", "player_b", "function_id", "block_index", "outcome"});
  for (const auto& g : t.games)
    games += csv_row({g.player_a, g.player_b, std::to_string(g.function_id), std::to_string(g.block_index),
                      std::string(outcome_name(g.outcome))});
  write_export(cfg, "ratings.csv", ratings, report);
  write_export(cfg, "games.csv", games, report);
}

void export_manifest(const ExperimentConfig& cfg, ExportReport& report) {
  nlohmann::json m;
  m["code_version"] = CHAOSPSO_VERSION;
  m["config_hash"] = hex64(config_hash(cfg));
  m["master_seed"] = cfg.master_seed;
  nlohmann::json config = nlohmann::json::object();
  const std::string canon = canonical_config(cfg);
  std::size_t start = 0;
  while (start < canon.size()) {
    const auto end = canon.find('\n', start);
    const std::string line = canon.substr(start, end - start);
    const auto eq = line.find('=');
    config[line.substr(0, eq)] = line.substr(eq + 1);
    start = end + 1;
  }
  m["config"] = config;
  nlohmann::json files = nlohmann::json::object();
  std::vector<std::string> names = report.written;
  if (std::filesystem::exists(out_path(cfg, "runs.csv"))) names.emplace_back("runs.csv");
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& name : names) {
    const std::string content = read_file(out_path(cfg, name.c_str()));
    files[name] = {{"bytes", content.size()}, {"fnv1a64", hex64(stable_hash(content))}};
  }
  m["files"] = files;
  m["errors"] = report.errors;
  write_file_atomic(out_path(cfg, "manifest.json"), m.dump(2) + "\n");
  report.written.emplace_back("manifest.json");
}

ExportReport export_all(const ExperimentConfig& cfg) {
  ExportReport report;
  ErrorTable table;
  bool have_runs = false;
  guarded("runs.csv", report, [&] {
    table = error_table(read_runs(out_path(cfg, "runs.csv")));
    have_runs = true;
  });
  guarded("analysis", report, [&] { export_analysis(cfg, report); });
  guarded("suite.csv", report, [&] { export_suite(cfg, report); });
  if (have_runs) {
    guarded("boxplots.csv", report, [&] { export_boxplots(cfg, table, report); });
    guarded("matrix.csv/heatmap.csv", report, [&] { export_comparison(cfg, table, report); });
    guarded("ratings.csv/games.csv", report, [&] { export_ratings(cfg, table, report); });
  }
  guarded("manifest.json", report, [&] { export_manifest(cfg, report); });
  return report;
}

}  // namespace chaospso
