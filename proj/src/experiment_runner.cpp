#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "chaospso/csv.hpp"
#include "chaospso/errors.hpp"
#include "chaospso/experiment.hpp"
#include "chaospso/seeding.hpp"
#include "chaospso/sequence_sources.hpp"

namespace chaospso {

namespace {

const std::vector<std::string> kRunsHeader{"source_id", "function_id", "run_index", "seed",
                                           "best_value", "distance_error", "status"};

std::vector<std::string> run_fields(const RunRecord& r) {
  const bool ok = r.ok();
  return {r.result.source_id,
          std::to_string(r.result.function_id),
          std::to_string(r.result.run_index),
          std::to_string(r.result.seed),
          ok ? format_double(r.result.best_value) : "",
          ok ? format_double(r.result.distance_error) : "",
          r.status};
}

RunRecord parse_run(const std::vector<std::string>& row) {
  if (row.size() != kRunsHeader.size()) throw ValidationError("runs.csv row has " + std::to_string(row.size()) + " fields");
  RunRecord r;
  r.result.source_id = row[0];
  r.result.function_id = static_cast<int>(parse_int(row[1]));
  r.result.run_index = parse_u64(row[2]);
  r.result.seed = parse_u64(row[3]);
  r.status = row[6];
  if (r.ok()) {
    r.result.best_value = parse_double(row[4]);
    r.result.distance_error = parse_double(row[5]);
  }
  return r;
}

struct Block {
  std::string source;
  int function_id;
};

// Number of leading rows that form complete, correctly seeded blocks in order.
std::size_t valid_prefix(const std::vector<std::vector<std::string>>& rows, const std::vector<Block>& blocks,
                         const ExperimentConfig& cfg, std::size_t& complete_blocks) {
  const auto per = static_cast<std::size_t>(cfg.runs_per_pair);
  std::size_t pos = 0;
  complete_blocks = 0;
  for (const auto& b : blocks) {
    if (pos + per > rows.size()) break;
    bool good = true;
    for (std::size_t k = 0; k < per && good; ++k) {
      try {
        const RunRecord r = parse_run(rows[pos + k]);
        good = r.result.source_id == b.source && r.result.function_id == b.function_id && r.result.run_index == k &&
               r.result.seed == run_seed(cfg.master_seed, b.source, b.function_id, k);
      } catch (const ValidationError&) {
        good = false;
      }
    }
    if (!good) break;
    pos += per;
    ++complete_blocks;
  }
  return pos;
}

}  // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed = true;
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = (std::filesystem::path(cfg.output_dir) / "runs.csv").string();

  std::vector<Block> blocks;
  for (const auto& s : cfg.sources)
    for (int f : cfg.functions) blocks.push_back({s, f});
  const auto per = static_cast<std::size_t>(cfg.runs_per_pair);

  RunSummary summary;
  std::size_t done_blocks = 0;
  std::string kept = csv_row(kRunsHeader);
  if (std::filesystem::exists(path)) {
    const CsvTable existing = parse_csv(read_file(path), true);
    if (!existing.header.empty() && existing.header != kRunsHeader)
      throw ValidationError(path + " does not have the runs.csv header");
    const std::size_t rows = valid_prefix(existing.rows, blocks, cfg, done_blocks);
    for (std::size_t i = 0; i < rows; ++i) kept += csv_row(existing.rows[i]);
    summary.reused = rows;
  }
  write_file_atomic(path, kept);
  if (done_blocks == blocks.size()) return summary;

  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw RuntimeFailure("cannot append to " + path);

  std::vector<BenchmarkFunction> functions;
  for (int f : cfg.functions) functions.push_back(cfg.function(f));
  std::vector<SourceSpec> specs;
  for (const auto& s : cfg.sources) specs.push_back(source_spec(s));

  const std::size_t pending = blocks.size() - done_blocks;
  std::vector<std::unique_ptr<std::vector<RunRecord>>> results(pending);
  std::vector<std::size_t> finished(pending, 0);
  std::size_t next_write = 0;
  std::mutex mu;

  parallel_for(pending * per, cfg.workers, [&](std::size_t task) {
    const std::size_t local = task / per, k = task % per;
    const std::size_t b = done_blocks + local;
    const std::size_t si = b / cfg.functions.size(), fi = b % cfg.functions.size();
    RunRecord rec;
    const std::uint64_t seed = run_seed(cfg.master_seed, cfg.sources[si], cfg.functions[fi], k);
    try {
      rec.result = run_single(cfg.swarm, functions[fi], specs[si], seed, k);
    } catch (const RuntimeFailure& e) {
      rec.result.function_id = cfg.functions[fi];
      rec.result.source_id = cfg.sources[si];
      rec.result.run_index = k;
      rec.result.seed = seed;
      rec.status = std::string("aborted: ") + e.what();
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!results[local]) results[local] = std::make_unique<std::vector<RunRecord>>(per);
    (*results[local])[k] = std::move(rec);
    ++finished[local];
    while (next_write < pending && finished[next_write] == per) {
      std::string chunk;
      for (const auto& r : *results[next_write]) {
        chunk += csv_row(run_fields(r));
        if (!r.ok()) ++summary.aborted;
      }
      out << chunk;
      out.flush();
      if (!out) throw RuntimeFailure("write failed: " + path);
      results[next_write].reset();
      summary.computed += per;
      ++next_write;
    }
  });
  return summary;
}

std::vector<RunRecord> read_runs(const std::string& path) {
  const CsvTable t = parse_csv(read_file(path), true);
  if (t.header != kRunsHeader) throw ValidationError(path + " does not have the runs.csv header");
  std::vector<RunRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(parse_run(row));
  return out;
}

ErrorTable error_table(const std::vector<RunRecord>& runs) {
  std::map<std::pair<std::string, int>, std::vector<std::pair<std::uint64_t, double>>> grouped;
  for (const auto& r : runs)
    if (r.ok()) grouped[{r.result.source_id, r.result.function_id}].emplace_back(r.result.run_index, r.result.distance_error);
  ErrorTable table;
  for (auto& [key, v] : grouped) {
    std::sort(v.begin(), v.end());
    auto& dst = table[key];
    for (const auto& p : v) dst.push_back(p.second);
  }
  return table;
}

}  // namespace chaospso
