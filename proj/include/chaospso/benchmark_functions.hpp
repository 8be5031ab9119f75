#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chaospso {

enum class Direction { Minimize, Maximize };

/// One entry of the 27-function suite. Evaluation is always in minimization
/// form: maximization problems are negated, and so is their f_star.
struct BenchmarkFunction {
  int id = 0;
  std::string name;
  int dimension = 0;
  std::vector<double> lo;  // per-coordinate box bounds
  std::vector<double> hi;
  Direction direction = Direction::Minimize;  // direction of the published definition
  double f_star = 0.0;                        // minimization form
  std::vector<std::vector<double>> known_optimizers;

  double operator()(std::span<const double> x) const;
};

/// Objective value in minimization form. Throws ValidationError on an
/// unknown id or a dimension mismatch.
double evaluate(int id, std::span<const double> x);

/// Static metadata for id 1..27; throws ValidationError otherwise.
const BenchmarkFunction& metadata(int id);

/// The 27 entries in suite order.
const std::vector<BenchmarkFunction>& list_suite();

/// Copy of `metadata(id)` with the same box [lo, hi] on every coordinate.
BenchmarkFunction with_bounds(int id, double lo, double hi);

std::string_view direction_name(Direction d);

}  // namespace chaospso
