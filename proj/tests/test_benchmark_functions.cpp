#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chaospso/benchmark_functions.hpp"
#include "chaospso/errors.hpp"

using namespace chaospso;

namespace {

std::vector<double> filled(int d, double v) { return std::vector<double>(static_cast<std::size_t>(d), v); }

std::vector<double> random_point(const BenchmarkFunction& f, std::mt19937_64& rng) {
  std::vector<double> x(static_cast<std::size_t>(f.dimension));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(f.lo[i], f.hi[i])(rng);
  return x;
}

}  // namespace

TEST(Suite, OrderAndDimensions) {
  const auto& s = list_suite();
  ASSERT_EQ(s.size(), 27u);
  const char* names[] = {"Equal Maxima", "Uneven Decreasing Maxima", "Himmelblau", "Six-Hump Camel Back",
                         "Shubert", "Vincent"};
  const int dims[] = {1, 1, 2, 2, 2, 2};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(s[static_cast<std::size_t>(i)].name, names[i]);
    EXPECT_EQ(s[static_cast<std::size_t>(i)].dimension, dims[i]);
  }
  const char* families[] = {"Rastrigin", "Rosenbrock", "Sphere", "Ackley", "Griewank", "Penalized1", "Penalized2"};
  for (int k = 0; k < 7; ++k) {
    for (int j = 0; j < 3; ++j) {
      const auto& f = s[static_cast<std::size_t>(6 + 3 * k + j)];
      EXPECT_EQ(f.id, 7 + 3 * k + j);
      EXPECT_EQ(f.name, families[k]);
      EXPECT_EQ(f.dimension, 10 * (j + 1));
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i].id, static_cast<int>(i) + 1);
}

TEST(Suite, Metadata) {
  const auto& sphere = metadata(13);
  EXPECT_EQ(sphere.name, "Sphere");
  EXPECT_EQ(sphere.dimension, 10);
  EXPECT_EQ(sphere.lo, filled(10, -100.0));
  EXPECT_EQ(sphere.hi, filled(10, 100.0));
  EXPECT_EQ(sphere.direction, Direction::Minimize);
  EXPECT_EQ(sphere.f_star, 0.0);
  const auto& camel = metadata(4);
  EXPECT_EQ(camel.direction, Direction::Maximize);
  EXPECT_NEAR(camel.f_star, -4.1265138139595, 1e-12);
  EXPECT_EQ(camel.lo, (std::vector<double>{-1.9, -1.1}));
  EXPECT_EQ(metadata(22).name, "Penalized1");
  EXPECT_EQ(metadata(24).dimension, 30);
  EXPECT_THROW(metadata(0), ValidationError);
  EXPECT_THROW(metadata(28), ValidationError);
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(13, filled(10, 0.0)), 0.0);
  EXPECT_EQ(evaluate(10, filled(10, 1.0)), 0.0);
  EXPECT_EQ(evaluate(3, std::vector<double>{3.0, 2.0}), 0.0);
  EXPECT_EQ(evaluate(7, filled(10, 0.0)), 0.0);
  EXPECT_NEAR(evaluate(16, filled(10, 0.0)), 0.0, 1e-12);
}

TEST(Evaluate, IndependentFormulaChecks) {
  // Hand-evaluated points.
  EXPECT_NEAR(evaluate(1, std::vector<double>{0.1}), -1.0, 1e-12);
  EXPECT_NEAR(evaluate(1, std::vector<double>{0.2}), 0.0, 1e-12);
  // Six-hump camel at origin and at (1, 0): 4 - 2.1 + 1/3 = 2.2333...
  EXPECT_EQ(evaluate(4, std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_NEAR(evaluate(4, std::vector<double>{1.0, 0.0}), 4.0 * (4.0 - 2.1 + 1.0 / 3.0), 1e-12);
  // Griewank at x = (pi*sqrt(1), ...) is not needed; use a single coordinate offset.
  std::vector<double> g = filled(10, 0.0);
  g[0] = 2.0;
  EXPECT_NEAR(evaluate(19, g), 4.0 / 4000.0 - std::cos(2.0) + 1.0, 1e-14);
  // Penalized2 penalty: one coordinate at 7 adds 100*(7-5)^4 = 1600.
  std::vector<double> p = filled(10, 1.0);
  p[3] = 7.0;
  const double body = 0.1 * (36.0 * (1.0 + std::pow(std::sin(3.0 * M_PI * 1.0), 2)));
  EXPECT_NEAR(evaluate(25, p), 1600.0 + body, 1e-9);
  // Penalized1 at x = -1 everywhere is 0; penalty u(x,10,100,4) for x = 12.
  std::vector<double> q = filled(10, -1.0);
  EXPECT_NEAR(evaluate(22, q), 0.0, 1e-12);
  q[0] = 12.0;
  const double y0 = 1.0 + 13.0 / 4.0;
  const double body1 = M_PI / 10.0 * (10.0 * std::pow(std::sin(M_PI * y0), 2) + (y0 - 1.0) * (y0 - 1.0) * 1.0);
  EXPECT_NEAR(evaluate(22, q), 100.0 * 16.0 + body1, 1e-9);
  // Rosenbrock D=10 at origin: 9 terms of (0-1)^2.
  EXPECT_EQ(evaluate(10, filled(10, 0.0)), 9.0);
}

TEST(Evaluate, DimensionMismatch) {
  EXPECT_THROW(evaluate(13, filled(9, 0.0)), ValidationError);
  EXPECT_THROW(evaluate(99, filled(9, 0.0)), ValidationError);
}

TEST(Properties, OptimaConsistent) {
  for (const auto& f : list_suite()) {
    for (const auto& x : f.known_optimizers) {
      EXPECT_NEAR(f(x), f.f_star, 1e-9) << f.id << " " << f.name;
      for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_GE(x[i], f.lo[i]);
        EXPECT_LE(x[i], f.hi[i]);
      }
    }
  }
  EXPECT_EQ(metadata(5).known_optimizers.size(), 18u);
}

TEST(Properties, NeverBelowOptimum) {
  std::mt19937_64 rng(2718);
  for (const auto& f : list_suite()) {
    for (int i = 0; i < 100000; ++i) {
      const auto x = random_point(f, rng);
      const double v = f(x);
      ASSERT_TRUE(std::isfinite(v)) << f.id;
      ASSERT_GE(v, f.f_star - 1e-9) << f.id << " " << f.name;
    }
  }
}

TEST(Properties, Separability) {
  std::mt19937_64 rng(5);
  for (int id : {7, 8, 9, 13, 14, 15}) {
    const auto& f = metadata(id);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_point(f, rng);
      double parts = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> only = filled(f.dimension, 0.0);
        only[i] = x[i];
        parts += f(only);
      }
      EXPECT_NEAR(f(x), parts, 1e-9 * std::max(1.0, std::abs(parts)));
    }
  }
}

TEST(Bounds, Override) {
  const auto f = with_bounds(13, -5.0, 5.0);
  EXPECT_EQ(f.lo, filled(10, -5.0));
  EXPECT_EQ(f.f_star, 0.0);
  EXPECT_THROW(with_bounds(13, 5.0, -5.0), ValidationError);
}
