// chaospso: sequence analysis, PSO runs, statistics, ratings and exports.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "chaospso/errors.hpp"
#include "chaospso/experiment.hpp"

using namespace chaospso;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string preset = "paper";
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

ExperimentConfig build_config(const CommonFlags& f) {
  const Preset preset = parse_preset(f.preset);
  ExperimentConfig cfg = f.config_path.empty() ? default_config(preset) : load_config(f.config_path, preset);
  if (f.workers) cfg.workers = *f.workers;
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.out) cfg.output_dir = *f.out;
  cfg.validate();
  return cfg;
}

int report_exports(const ExportReport& r) {
  for (const auto& name : r.written) std::cerr << "wrote " << name << '\n';
  for (const auto& e : r.errors) std::cerr << "export failed: " << e << '\n';
  return r.errors.empty() ? 0 : 2;
}

int run_pso(const ExperimentConfig& cfg) {
  const RunSummary s = run_experiment(cfg);
  std::cerr << "runs: " << s.computed << " computed, " << s.reused << " reused, " << s.aborted << " aborted\n";
  return s.aborted == 0 ? 0 : 2;
}

ErrorTable load_table(const ExperimentConfig& cfg) {
  return error_table(read_runs(cfg.output_dir + "/runs.csv"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotic sequences as PSO random sources: analysis, experiments, statistics and ratings"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags flags;
  app.add_option("--config", flags.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", flags.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "master seed");
  app.add_option("--out", flags.out, "output directory");

  auto* analyze = app.add_subcommand("analyze-sequences", "densities, autocorrelation and Lyapunov exponents");
  auto* run = app.add_subcommand("run-pso", "run the PSO matrix into runs.csv (resumable)");
  auto* compare = app.add_subcommand("compare", "Wilcoxon and Friedman comparison matrix from runs.csv");
  auto* rate = app.add_subcommand("rate", "Elo and Glicko-2 tournament from runs.csv");
  auto* full = app.add_subcommand("full", "run-pso followed by export");
  auto* exp = app.add_subcommand("export", "write every export and the manifest from runs.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const ExperimentConfig cfg = build_config(flags);
    if (analyze->parsed()) {
      ExportReport r;
      export_analysis(cfg, r);
      return report_exports(r);
    }
    if (run->parsed()) return run_pso(cfg);
    if (compare->parsed()) {
      ExportReport r;
      export_comparison(cfg, load_table(cfg), r);
      return report_exports(r);
    }
    if (rate->parsed()) {
      ExportReport r;
      export_ratings(cfg, load_table(cfg), r);
      return report_exports(r);
    }
    if (full->parsed()) {
      const int run_code = run_pso(cfg);
      const int export_code = report_exports(export_all(cfg));
      return std::max(run_code, export_code);
    }
    if (exp->parsed()) return report_exports(export_all(cfg));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
