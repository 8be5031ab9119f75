#include "chaospso/benchmark_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chaospso/errors.hpp"

namespace chaospso {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double v) { return v * v; }

// --- Niching functions (Li, Engelbrecht, Epitropakis: "Benchmark Functions
// for CEC'2013 Special Session and Competition on Niching Methods for
// Multimodal Function Optimization", 2013). Written in the published
// maximization form; negated by the dispatcher.

double equal_maxima(std::span<const double> x) { return std::pow(std::sin(5.0 * kPi * x[0]), 6); }

double uneven_decreasing_maxima(std::span<const double> x) {
  const double envelope = std::exp(-2.0 * std::log(2.0) * sq((x[0] - 0.08) / 0.854));
  return envelope * std::pow(std::sin(5.0 * kPi * (std::pow(x[0], 0.75) - 0.05)), 6);
}

double six_hump_camel_back(std::span<const double> x) {
  const double a = x[0], b = x[1];
  const double x2 = a * a, y2 = b * b;
  return -4.0 * ((4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + a * b + (4.0 * y2 - 4.0) * y2);
}

double shubert(std::span<const double> x) {
  double prod = 1.0;
  for (double xi : x) {
    double s = 0.0;
    for (int j = 1; j <= 5; ++j) s += j * std::cos((j + 1) * xi + j);
    prod *= s;
  }
  return -prod;
}

double vincent(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += std::sin(10.0 * std::log(xi));
  return s / static_cast<double>(x.size());
}

// Himmelblau in its classical minimization form (minimum 0 at four points);
// the niching suite's 200 - (...) variant differs only by sign and offset.
double himmelblau(std::span<const double> x) {
  return sq(x[0] * x[0] + x[1] - 11.0) + sq(x[0] + x[1] * x[1] - 7.0);
}

// --- Classical functions; formulas and bounds as in Yao, Liu, Lin,
// "Evolutionary programming made faster", IEEE TEC 3(2), 1999 (f1, f5, f9,
// f10, f11, f12, f13).

double rastrigin(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi - 10.0 * std::cos(2.0 * kPi * xi) + 10.0;
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
  return s;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

double ackley(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double s2 = 0.0, sc = 0.0;
  for (double xi : x) {
    s2 += xi * xi;
    sc += std::cos(2.0 * kPi * xi);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(s2 / n)) - std::exp(sc / n) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> x) {
  double s = 0.0, p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i];
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s / 4000.0 - p + 1.0;
}

double penalty_u(double xi, double a, double k, double m) {
  if (xi > a) return k * std::pow(xi - a, m);
  if (xi < -a) return k * std::pow(-xi - a, m);
  return 0.0;
}

double penalized1(std::span<const double> x) {
  const std::size_t n = x.size();
  auto y = [&](std::size_t i) { return 1.0 + (x[i] + 1.0) / 4.0; };
  double s = 10.0 * sq(std::sin(kPi * y(0)));
  for (std::size_t i = 0; i + 1 < n; ++i) s += sq(y(i) - 1.0) * (1.0 + 10.0 * sq(std::sin(kPi * y(i + 1))));
  s += sq(y(n - 1) - 1.0);
  double pen = 0.0;
  for (double xi : x) pen += penalty_u(xi, 10.0, 100.0, 4.0);
  return kPi / static_cast<double>(n) * s + pen;
}

double penalized2(std::span<const double> x) {
  const std::size_t n = x.size();
  double s = sq(std::sin(3.0 * kPi * x[0]));
  for (std::size_t i = 0; i + 1 < n; ++i) s += sq(x[i] - 1.0) * (1.0 + sq(std::sin(3.0 * kPi * x[i + 1])));
  s += sq(x[n - 1] - 1.0) * (1.0 + sq(std::sin(2.0 * kPi * x[n - 1])));
  double pen = 0.0;
  for (double xi : x) pen += penalty_u(xi, 5.0, 100.0, 4.0);
  return 0.1 * s + pen;
}

using Objective = double (*)(std::span<const double>);

struct Entry {
  BenchmarkFunction meta;
  Objective f;
};

std::vector<Entry> build_suite() {
  std::vector<Entry> s;
  auto add_box = [&](const char* name, std::vector<double> lo, std::vector<double> hi, Direction dir,
                     double f_star, Objective f, std::vector<std::vector<double>> opt) {
    BenchmarkFunction m;
    m.id = static_cast<int>(s.size()) + 1;
    m.name = name;
    m.dimension = static_cast<int>(lo.size());
    m.lo = std::move(lo);
    m.hi = std::move(hi);
    m.direction = dir;
    m.f_star = dir == Direction::Maximize ? -f_star : f_star;
    m.known_optimizers = std::move(opt);
    s.push_back({std::move(m), f});
  };
  auto add = [&](const char* name, int d, double lo, double hi, Direction dir, double f_star, Objective f,
                 std::vector<std::vector<double>> opt = {}) {
    const auto n = static_cast<std::size_t>(d);
    add_box(name, std::vector<double>(n, lo), std::vector<double>(n, hi), dir, f_star, f, std::move(opt));
  };
  const auto Max = Direction::Maximize;
  const auto Min = Direction::Minimize;

  // CEC'2013 niching F2: global maxima 1 at x = 0.1, 0.3, 0.5, 0.7, 0.9.
  add("Equal Maxima", 1, 0.0, 1.0, Max, 1.0, equal_maxima, {{0.1}, {0.3}, {0.5}, {0.7}, {0.9}});
  // CEC'2013 niching F3: published optimum 1.0 near x = 0.08. The exact peak
  // (x = 0.0796997796) reaches 1 - 1.7e-7, so no optimizer is listed.
  add("Uneven Decreasing Maxima", 1, 0.0, 1.0, Max, 1.0, uneven_decreasing_maxima);
  // CEC'2013 niching F4 domain [-6,6]^2; classical form, minimum 0.
  add("Himmelblau", 2, -6.0, 6.0, Min, 0.0, himmelblau,
      {{3.0, 2.0},
       {-2.8051180869527449, 3.131312518250573},
       {-3.7793102533777469, -3.2831859912861694},
       {3.5844283403304917, -1.8481265269644036}});
  // CEC'2013 niching F5: x in [-1.9,1.9], y in [-1.1,1.1]; optimum
  // 4.1265138139595 at (+-0.0898420131003181, -+0.7126564030207396), located
  // to 40 digits with a multiprecision Newton solve.
  add_box("Six-Hump Camel Back", {-1.9, -1.1}, {1.9, 1.1}, Max, 4.126513813959509, six_hump_camel_back,
      {{0.0898420131003181, -0.7126564030207396}, {-0.0898420131003181, 0.7126564030207396}});
  // CEC'2013 niching F6 (D=2): 18 global maxima of 186.7309088310238.
  {
    std::vector<std::vector<double>> opt;
    const double hi_pt = -7.083506407651560, lo_pt = -7.708313735499347;  // 1-D max / min of the inner sum
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double u = hi_pt + 2.0 * kPi * a, v = lo_pt + 2.0 * kPi * b;
        opt.push_back({u, v});
        opt.push_back({v, u});
      }
    add("Shubert", 2, -10.0, 10.0, Max, 186.7309088310238, shubert, std::move(opt));
  }
  // CEC'2013 niching F7 (D=2): maxima 1 where sin(10 ln x_i) = 1.
  add("Vincent", 2, 0.25, 10.0, Max, 1.0, vincent,
      {{std::exp(kPi / 20.0), std::exp(kPi / 20.0)}, {std::exp(kPi / 20.0 + kPi / 5.0), std::exp(kPi / 20.0)}});

  for (int d : {10, 20, 30}) add("Rastrigin", d, -5.12, 5.12, Min, 0.0, rastrigin, {std::vector<double>(d, 0.0)});
  for (int d : {10, 20, 30}) add("Rosenbrock", d, -30.0, 30.0, Min, 0.0, rosenbrock, {std::vector<double>(d, 1.0)});
  for (int d : {10, 20, 30}) add("Sphere", d, -100.0, 100.0, Min, 0.0, sphere, {std::vector<double>(d, 0.0)});
  for (int d : {10, 20, 30}) add("Ackley", d, -32.0, 32.0, Min, 0.0, ackley, {std::vector<double>(d, 0.0)});
  for (int d : {10, 20, 30}) add("Griewank", d, -600.0, 600.0, Min, 0.0, griewank, {std::vector<double>(d, 0.0)});
  for (int d : {10, 20, 30}) add("Penalized1", d, -50.0, 50.0, Min, 0.0, penalized1, {std::vector<double>(d, -1.0)});
  for (int d : {10, 20, 30}) add("Penalized2", d, -50.0, 50.0, Min, 0.0, penalized2, {std::vector<double>(d, 1.0)});
  return s;
}

const std::vector<Entry>& suite() {
  static const std::vector<Entry> s = build_suite();
  return s;
}

const Entry& entry(int id) {
  const auto& s = suite();
  if (id < 1 || id > static_cast<int>(s.size())) throw ValidationError("unknown function id: " + std::to_string(id));
  return s[static_cast<std::size_t>(id - 1)];
}

}  // namespace

double BenchmarkFunction::operator()(std::span<const double> x) const { return evaluate(id, x); }

double evaluate(int id, std::span<const double> x) {
  const Entry& e = entry(id);
  if (static_cast<int>(x.size()) != e.meta.dimension) {
    throw ValidationError("dimension mismatch for function " + std::to_string(id) + ": expected " +
                          std::to_string(e.meta.dimension) + ", got " + std::to_string(x.size()));
  }
  const double v = e.f(x);
  return e.meta.direction == Direction::Maximize ? -v : v;
}

const BenchmarkFunction& metadata(int id) { return entry(id).meta; }

const std::vector<BenchmarkFunction>& list_suite() {
  static const std::vector<BenchmarkFunction> list = [] {
    std::vector<BenchmarkFunction> v;
    for (const auto& e : suite()) v.push_back(e.meta);
    return v;
  }();
  return list;
}

BenchmarkFunction with_bounds(int id, double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw ValidationError("bounds for function " + std::to_string(id) + " must satisfy lo < hi");
  BenchmarkFunction f = metadata(id);
  f.lo.assign(f.lo.size(), lo);
  f.hi.assign(f.hi.size(), hi);
  return f;
}

std::string_view direction_name(Direction d) { return d == Direction::Maximize ? "max" : "min"; }

}  // namespace chaospso
