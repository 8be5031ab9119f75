#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "chaospso/benchmark_functions.hpp"
#include "chaospso/errors.hpp"
#include "chaospso/sequence_sources.hpp"

namespace chaospso {

/// Anything that yields values in [0,1] one at a time.
template <class S>
concept UnitStream = requires(S& s) {
  { s.next_value() } -> std::convertible_to<double>;
};

/// PerCoordinate: fresh r1, r2 per particle, coordinate and generation.
/// PerParticle: one r1, r2 pair per particle and generation.
enum class DrawMode { PerCoordinate, PerParticle };

/// Value: |f(best) - f*|. Position: Euclidean distance from the best position
/// to the nearest known optimizer.
enum class ErrorMetric { Value, Position };

struct SwarmConfig {
  double w = 0.79;
  double c1 = 1.49;
  double c2 = 1.49;
  int swarm_size = 100;
  int generations = 200;
  DrawMode draw_mode = DrawMode::PerCoordinate;
  ErrorMetric error_metric = ErrorMetric::Value;

  void validate() const;
};

struct Particle {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> best_x;
  double value = 0.0;
  double best_value = 0.0;
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> gbest_x;
  double gbest_value = 0.0;
  int generation = 0;
};

struct RunResult {
  int function_id = 0;
  std::string source_id;
  std::uint64_t run_index = 0;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  double distance_error = 0.0;
};

double distance_error(double best_value, const BenchmarkFunction& f);

/// Distance from `x` to the nearest known optimizer; throws ValidationError
/// when the function lists none.
double position_error(std::span<const double> x, const BenchmarkFunction& f);

namespace detail {

[[noreturn]] void throw_non_finite(const BenchmarkFunction& f, std::span<const double> x);

inline double checked_eval(const BenchmarkFunction& f, std::span<const double> x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw_non_finite(f, x);
  return v;
}

// pbest first, then gbest; the lowest index wins exact ties.
inline void update_bests(SwarmState& s) {
  for (auto& p : s.particles) {
    if (p.value < p.best_value) {
      p.best_value = p.value;
      p.best_x = p.x;
    }
  }
  std::size_t best = s.particles.size();
  double best_value = s.gbest_value;
  for (std::size_t i = 0; i < s.particles.size(); ++i) {
    if (s.particles[i].best_value < best_value) {
      best_value = s.particles[i].best_value;
      best = i;
    }
  }
  if (best < s.particles.size()) {
    s.gbest_value = best_value;
    s.gbest_x = s.particles[best].best_x;
  }
}

}  // namespace detail

/// Positions from the source mapped into the box (particle-major, coordinates
/// in index order); zero velocities; bests evaluated.
template <UnitStream S>
SwarmState init_swarm(const SwarmConfig& cfg, const BenchmarkFunction& f, S& source) {
  if (f.dimension < 1) throw ValidationError("function dimension must be at least 1");
  const auto d = static_cast<std::size_t>(f.dimension);
  SwarmState s;
  s.particles.resize(static_cast<std::size_t>(cfg.swarm_size));
  for (auto& p : s.particles) {
    p.x.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double u = static_cast<double>(source.next_value());
      p.x[j] = f.lo[j] + u * (f.hi[j] - f.lo[j]);
    }
    p.v.assign(d, 0.0);
    p.value = detail::checked_eval(f, p.x);
    p.best_x = p.x;
    p.best_value = p.value;
  }
  s.gbest_value = s.particles.front().best_value;
  s.gbest_x = s.particles.front().best_x;
  detail::update_bests(s);
  return s;
}

/// One synchronous generation: every particle moves using the bests of the
/// previous generation, then all are evaluated and the bests updated.
template <UnitStream S>
void step_generation(SwarmState& s, const SwarmConfig& cfg, const BenchmarkFunction& f, S& source) {
  const std::size_t d = s.gbest_x.size();
  for (auto& p : s.particles) {
    double r1 = 0.0, r2 = 0.0;
    if (cfg.draw_mode == DrawMode::PerParticle) {
      r1 = static_cast<double>(source.next_value());
      r2 = static_cast<double>(source.next_value());
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (cfg.draw_mode == DrawMode::PerCoordinate) {
        r1 = static_cast<double>(source.next_value());
        r2 = static_cast<double>(source.next_value());
      }
      p.v[j] = cfg.w * p.v[j] + cfg.c1 * r1 * (p.best_x[j] - p.x[j]) + cfg.c2 * r2 * (s.gbest_x[j] - p.x[j]);
      p.x[j] = std::clamp(p.x[j] + p.v[j], f.lo[j], f.hi[j]);
    }
  }
  for (auto& p : s.particles) p.value = detail::checked_eval(f, p.x);
  detail::update_bests(s);
  ++s.generation;
}

/// Observer called after initialization and after every generation.
using GenerationObserver = std::function<void(const SwarmState&)>;

template <UnitStream S>
SwarmState run_swarm(const SwarmConfig& cfg, const BenchmarkFunction& f, S& source,
                     const GenerationObserver& observe = {}) {
  cfg.validate();
  SwarmState s = init_swarm(cfg, f, source);
  if (observe) observe(s);
  for (int g = 0; g < cfg.generations; ++g) {
    step_generation(s, cfg, f, source);
    if (observe) observe(s);
  }
  return s;
}

/// Full run from a fresh source seeded with `seed`.
RunResult run_single(const SwarmConfig& cfg, const BenchmarkFunction& f, const SourceSpec& source,
                     std::uint64_t seed, std::uint64_t run_index = 0);

}  // namespace chaospso
