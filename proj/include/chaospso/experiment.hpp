#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaospso/benchmark_functions.hpp"
#include "chaospso/pso_engine.hpp"
#include "chaospso/rating.hpp"
#include "chaospso/stats_compare.hpp"

namespace chaospso {

struct AnalysisConfig {
  int density_inits = 10000;
  int lyapunov_inits = 10000;
  int autocorr_inits = 10000;
  int iters = 400;
  int bins = 100;
  int lmax = 10;
};

struct ExperimentConfig {
  std::vector<std::string> sources;
  std::vector<int> functions;
  int runs_per_pair = 4000;
  SwarmConfig swarm;
  std::uint64_t master_seed = 20240101;
  double alpha = 0.05;
  RatingParams rating;
  AnalysisConfig analysis;
  std::map<int, std::pair<double, double>> bounds;  // per-function box override
  int workers = 1;
  std::string output_dir = "results";

  /// Throws ValidationError naming the offending key or value.
  void validate() const;

  /// Function metadata with any bounds override applied.
  BenchmarkFunction function(int id) const;
};

enum class Preset { Paper, Desk };

Preset parse_preset(std::string_view name);

/// All 12 sources, all 27 functions; Desk lowers runs_per_pair to 200 and the
/// analysis inits to 1000.
ExperimentConfig default_config(Preset preset = Preset::Paper);

/// Applies one `key=value` setting. Unknown keys and malformed values throw.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Line-oriented `key=value` text; blank lines and lines starting with '#'
/// are ignored. Starts from `default_config(preset)` and validates.
ExperimentConfig parse_config(std::string_view text, Preset preset = Preset::Paper);
ExperimentConfig load_config(const std::string& path, Preset preset = Preset::Paper);

/// Every setting that influences results, one `key=value` per line in a fixed
/// order. Excludes workers and output_dir.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

// ---- runs ----

struct RunRecord {
  RunResult result;
  std::string status = "ok";  // "ok" or "aborted: <reason>"
  bool ok() const { return status == "ok"; }
};

struct RunSummary {
  std::size_t computed = 0;
  std::size_t reused = 0;
  std::size_t aborted = 0;
};

/// Executes every (source, function, run) not already present in
/// <output_dir>/runs.csv. Rows are written block by block in (source,
/// function) order, so the file is identical for any worker count and after
/// an interrupted run is resumed.
RunSummary run_experiment(const ExperimentConfig& cfg);

std::vector<RunRecord> read_runs(const std::string& path);

/// Distance errors of the successful runs, ordered by run index.
ErrorTable error_table(const std::vector<RunRecord>& runs);

// ---- exports ----

struct BoxplotSummary {
  std::string source_id;
  int function_id = 0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;
  double mean = 0.0;
};

/// Tukey hinges and 1.5 IQR whiskers; needs at least 5 values.
BoxplotSummary summarize_boxplot(std::vector<double> values);
BoxplotSummary summarize_boxplot(const ErrorTable& table, const std::string& source_id, int function_id);

struct ExportReport {
  std::vector<std::string> written;
  std::vector<std::string> errors;
};

/// density.csv, autocorr.csv, map_stats.csv.
void export_analysis(const ExperimentConfig& cfg, ExportReport& report);
void export_suite(const ExperimentConfig& cfg, ExportReport& report);
void export_boxplots(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report);
/// matrix.csv, heatmap.csv.
void export_comparison(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report);
/// ratings.csv, games.csv.
void export_ratings(const ExperimentConfig& cfg, const ErrorTable& table, ExportReport& report);
void export_manifest(const ExperimentConfig& cfg, ExportReport& report);

/// Every export from the current runs.csv plus manifest.json. A failing
/// export is recorded in `errors` and the others still run.
ExportReport export_all(const ExperimentConfig& cfg);

/// Runs `task(i)` for i in [0, n) on `workers` threads; rethrows the first
/// exception by index.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task);

}  // namespace chaospso
