#include "chaospso/pso_engine.hpp"

#include <algorithm>
#include <limits>

namespace chaospso {

void SwarmConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(w)) throw ValidationError("w must be finite");
  if (!finite(c1) || c1 < 0.0) throw ValidationError("c1 must be a non-negative number");
  if (!finite(c2) || c2 < 0.0) throw ValidationError("c2 must be a non-negative number");
  if (swarm_size < 1) throw ValidationError("swarm_size must be at least 1");
  if (generations < 0) throw ValidationError("generations must be non-negative");
}

double distance_error(double best_value, const BenchmarkFunction& f) { return std::abs(best_value - f.f_star); }

double position_error(std::span<const double> x, const BenchmarkFunction& f) {
  if (f.known_optimizers.empty())
    throw ValidationError("function " + std::to_string(f.id) + " (" + f.name + ") lists no known optimizer");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& opt : f.known_optimizers) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - opt[i]) * (x[i] - opt[i]);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

namespace detail {

void throw_non_finite(const BenchmarkFunction& f, std::span<const double> x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "non-finite objective value: function_id=" << f.id << " x=(";
  for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
  msg << ")";
  throw RuntimeFailure(msg.str());
}

}  // namespace detail

RunResult run_single(const SwarmConfig& cfg, const BenchmarkFunction& f, const SourceSpec& source,
                     std::uint64_t seed, std::uint64_t run_index) {
  SequenceSource src = make_source(source, seed);
  const SwarmState s = run_swarm(cfg, f, src);
  RunResult r;
  r.function_id = f.id;
  r.source_id = source.id;
  r.run_index = run_index;
  r.seed = seed;
  r.best_value = s.gbest_value;
  r.distance_error = cfg.error_metric == ErrorMetric::Position ? position_error(s.gbest_x, f)
                                                               : distance_error(s.gbest_value, f);
  return r;
}

}  // namespace chaospso
