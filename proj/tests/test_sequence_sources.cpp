#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <set>

#include "chaospso/errors.hpp"
#include "chaospso/sequence_sources.hpp"
#include "oracles.hpp"

using namespace chaospso;

namespace {

std::vector<double> draw(std::string_view id, std::uint64_t seed, std::size_t n) {
  auto src = make_source(source_spec(id), seed);
  std::vector<double> v(n);
  for (auto& x : v) x = src.next_value();
  return v;
}

MapSpec logistic() { return MapSpec::defaults(MapFamily::Logistic); }

}  // namespace

TEST(MapSpecDefaults, ChaoticSettings) {
  EXPECT_EQ(MapSpec::defaults(MapFamily::Logistic).r, 4.0);
  EXPECT_EQ(MapSpec::defaults(MapFamily::Chebyshev).a, 6.0);
  const auto w = MapSpec::defaults(MapFamily::Weierstrass);
  EXPECT_EQ(w.a, 0.999);
  EXPECT_EQ(w.b, 101.0);
  EXPECT_EQ(w.terms, 100);
  EXPECT_EQ(MapSpec::defaults(MapFamily::Tent).r, 2.0);
  EXPECT_EQ(MapSpec::defaults(MapFamily::Cubic).r, 2.62);
  EXPECT_EQ(MapSpec::defaults(MapFamily::Bellows).r, 2.0);
  for (auto f : {MapFamily::Logistic, MapFamily::Tent}) {
    EXPECT_EQ(MapSpec::defaults(f).rescale, (Interval{0.0, 1.0}));
  }
  EXPECT_EQ(MapSpec::defaults(MapFamily::Chebyshev).rescale, (Interval{-1.0, 1.0}));
  for (auto f : {MapFamily::Logistic, MapFamily::Chebyshev, MapFamily::Weierstrass, MapFamily::Tent,
                 MapFamily::Cubic, MapFamily::Bellows}) {
    const auto s = MapSpec::defaults(f);
    EXPECT_LT(s.rescale.lo, s.rescale.hi);
  }
}

TEST(MapSpecDefaults, CubicBoundCoversAnalyticMaximum) {
  // max of 2.62 z (1 - z^2) on [-1,1] is at z = 1/sqrt(3).
  const double peak = 2.62 * 2.0 / (3.0 * std::sqrt(3.0));
  const auto s = MapSpec::defaults(MapFamily::Cubic);
  EXPECT_LE(s.rescale.hi, peak + 1e-12);
  EXPECT_GE(s.rescale.hi, peak - 1e-3);
}

TEST(Registry, TwelveIds) {
  const std::vector<std::string> expect{"logistic", "chebyshev", "weierstrass", "tent",
                                        "cubic", "bellows", "beta_0.5_0.5", "normal_0.5_0.1",
                                        "beta_13_13", "uniform_0_1", "beta_1_1", "beta_1_5"};
  EXPECT_EQ(source_ids(), expect);
  EXPECT_THROW(source_spec("nope"), ValidationError);
  EXPECT_EQ(density_group("logistic"), 1);
  EXPECT_EQ(density_group("beta_13_13"), 2);
  EXPECT_EQ(density_group("uniform_0_1"), 3);
  EXPECT_EQ(density_group("bellows"), 4);
}

TEST(Registry, DistributionParameters) {
  auto d = std::get<DistributionSpec>(source_spec("beta_1_5").kind);
  EXPECT_EQ(d.family, DistributionFamily::Beta);
  EXPECT_EQ(d.p1, 1.0);
  EXPECT_EQ(d.p2, 5.0);
  d = std::get<DistributionSpec>(source_spec("normal_0.5_0.1").kind);
  EXPECT_EQ(d.family, DistributionFamily::Normal);
  EXPECT_TRUE(d.clamp);
}

TEST(MapStep, Examples) {
  EXPECT_EQ(map_step(logistic(), 0.5), 1.0);
  EXPECT_EQ(map_step(MapSpec::defaults(MapFamily::Tent), 0.25), 0.5);
  EXPECT_EQ(map_step(MapSpec::defaults(MapFamily::Chebyshev), 1.0), 1.0);
  EXPECT_EQ(map_step(MapSpec::defaults(MapFamily::Bellows), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(map_step(MapSpec::defaults(MapFamily::Cubic), 0.5), 2.62 * 0.5 * 0.75);
}

TEST(MapStep, WeierstrassMatchesDirectSum) {
  const auto spec = MapSpec::defaults(MapFamily::Weierstrass);
  for (double z : {0.123, -0.77, 5.5, -21.25}) {
    long double direct = 0.0L;
    for (int i = 0; i <= 100; ++i) {
      const double phase = std::pow(101.0, i) * std::numbers::pi;
      direct += static_cast<long double>(std::pow(0.999, i)) * std::cos(phase * z);
    }
    EXPECT_NEAR(map_step(spec, z), static_cast<double>(direct), 1e-12) << z;
  }
}

TEST(MapDerivative, Examples) {
  EXPECT_EQ(map_derivative(logistic(), 0.5).value, 0.0);
  EXPECT_EQ(map_derivative(MapSpec::defaults(MapFamily::Tent), 0.25).value, 2.0);
  EXPECT_EQ(map_derivative(logistic(), 0.25).value, 2.0);
  const auto kink = map_derivative(MapSpec::defaults(MapFamily::Tent), 0.5);
  EXPECT_TRUE(kink.flagged);
  EXPECT_EQ(kink.value, 2.0);
}

TEST(MapDerivative, AgreesWithFiniteDifference) {
  for (auto f : {MapFamily::Logistic, MapFamily::Chebyshev, MapFamily::Cubic, MapFamily::Bellows,
                 MapFamily::Weierstrass}) {
    const auto spec = MapSpec::defaults(f);
    for (double z : {0.13, 0.41, 0.77}) {
      const double h = f == MapFamily::Weierstrass ? 1e-9 : 1e-6;
      // Weierstrass is only smooth on scales far below 1/b^N; use low-order terms.
      MapSpec s = spec;
      if (f == MapFamily::Weierstrass) s.terms = 3;
      const double fd = (map_step(s, z + h) - map_step(s, z - h)) / (2 * h);
      const double d = map_derivative(s, z).value;
      EXPECT_NEAR(d, fd, 1e-5 * std::max(1.0, std::abs(fd))) << family_name(f) << " z=" << z;
    }
  }
}

TEST(MakeSource, DeterministicPerSeed) {
  for (const auto& id : source_ids()) {
    const std::size_t n = id == "weierstrass" ? 200 : 1000;
    EXPECT_EQ(draw(id, 42, n), draw(id, 42, n)) << id;
  }
}

TEST(MakeSource, SeedsDiverge) {
  const auto a = draw("logistic", 42, 10);
  const auto b = draw("logistic", 43, 10);
  EXPECT_NE(a, b);
}

TEST(MakeSource, ValidationNamesField) {
  try {
    make_source({"bad", DistributionSpec::beta(0.0, 1.0)}, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "alpha must be positive");
  }
  EXPECT_THROW(make_source({"bad", DistributionSpec::beta(1.0, -2.0)}, 1), ValidationError);
  EXPECT_THROW(make_source({"bad", DistributionSpec::normal(0.5, 0.0)}, 1), ValidationError);
  EXPECT_THROW(make_source({"bad", DistributionSpec::uniform(0.6, 0.2)}, 1), ValidationError);
  MapSpec m = logistic();
  m.rescale = {1.0, 0.0};
  EXPECT_THROW(make_source({"bad", m}, 1), ValidationError);
  m = logistic();
  m.r = -1.0;
  EXPECT_THROW(make_source({"bad", m}, 1), ValidationError);
}

TEST(NextValue, TentIdentityRescale) {
  MapSpec tent = MapSpec::defaults(MapFamily::Tent);
  tent.tent_dither = false;
  auto src = make_source({"t", tent}, 5);
  src.orbit()->set_state(0.25);
  EXPECT_EQ(src.next_value(), 0.5);
  EXPECT_EQ(src.orbit()->state(), 0.5);
}

TEST(NextValue, ChebyshevLowerEdgeEmitsZero) {
  const auto spec = MapSpec::defaults(MapFamily::Chebyshev);
  const double z = std::cos(std::numbers::pi / 6.0);
  ASSERT_EQ(map_step(spec, z), -1.0);
  auto src = make_source({"c", spec}, 9);
  src.orbit()->set_state(z);
  EXPECT_EQ(src.next_value(), 0.0);
}

TEST(NextValue, NormalClampsAboveOne) {
  auto src = make_source({"n", DistributionSpec::normal(1.07, 1e-12)}, 3);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(src.next_value(), 1.0);
}

TEST(NextValue, NormalResampleStaysInRange) {
  DistributionSpec d = DistributionSpec::normal(0.95, 0.1);
  d.clamp = false;
  auto src = make_source({"n", d}, 3);
  int at_edge = 0;
  for (int i = 0; i < 20000; ++i) {
    const double v = src.next_value();
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    at_edge += v == 1.0;
  }
  EXPECT_EQ(at_edge, 0);
}

TEST(Properties, RangeOfEveryConfiguredSource) {
  for (const auto& id : source_ids()) {
    auto src = make_source(source_spec(id), 2024);
    const int n = id == "weierstrass" ? 200000 : 1000000;
    for (int i = 0; i < n; ++i) {
      const double v = src.next_value();
      ASSERT_TRUE(v >= 0.0 && v <= 1.0) << id << " step " << i << " value " << v;
    }
  }
}

TEST(Properties, LogisticOrbitsNonConstant) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    auto src = make_source(source_spec("logistic"), seed);
    std::set<double> seen;
    for (int i = 0; i < 400; ++i) seen.insert(src.next_value());
    ASSERT_GT(seen.size(), 300u) << "seed " << seed;
  }
}

TEST(Properties, LogisticFixedPointRederived) {
  auto src = make_source(source_spec("logistic"), 1);
  src.orbit()->set_state(0.75);
  const double v = src.next_value();
  EXPECT_NE(v, 0.75);
  src.orbit()->set_state(1.0);
  EXPECT_NE(src.next_value(), 0.0);
}

TEST(Properties, TentOrbitSurvivesLongRuns) {
  auto src = make_source(source_spec("tent"), 77);
  int tiny = 0;
  for (int i = 0; i < 1000000; ++i) tiny += src.next_value() < 1e-12;
  EXPECT_LT(tiny, 5);
}

TEST(Properties, TentWithoutDitherStillLeavesZero) {
  MapSpec tent = MapSpec::defaults(MapFamily::Tent);
  tent.tent_dither = false;
  auto src = make_source({"t", tent}, 1);
  src.orbit()->set_state(0.5);
  src.next_value();  // 1 -> nudged below 1
  EXPECT_LT(src.orbit()->state(), 1.0);
  src.next_value();
  EXPECT_GT(src.orbit()->state(), 0.0);
}

TEST(Properties, LogisticMatchesArcsineDensity) {
  const std::size_t n = 100000;
  const auto logi = draw("logistic", 101, n);
  const auto beta = draw("beta_0.5_0.5", 202, n);
  EXPECT_LT(oracle::ks_two_sample(logi, beta), oracle::ks_critical(0.01, n, n));
}

TEST(Properties, ChebyshevMatchesLogistic) {
  const std::size_t n = 100000;
  const auto cheb = draw("chebyshev", 303, n);
  const auto logi = draw("logistic", 404, n);
  EXPECT_LT(oracle::ks_two_sample(cheb, logi), oracle::ks_critical(0.01, n, n));
}

TEST(Properties, TentMatchesUniform) {
  const std::size_t n = 100000;
  const auto tent = draw("tent", 505, n);
  EXPECT_LT(oracle::ks_one_sample(tent, [](double x) { return x; }), oracle::ks_critical_one(0.01, n));
}

TEST(Distributions, MatchTheirCdfs) {
  const std::size_t n = 50000;
  struct Case {
    const char* id;
    double a, b;
  };
  for (Case c : {Case{"beta_0.5_0.5", 0.5, 0.5}, Case{"beta_13_13", 13, 13}, Case{"beta_1_1", 1, 1},
                 Case{"beta_1_5", 1, 5}}) {
    const auto v = draw(c.id, 99, n);
    const double d = oracle::ks_one_sample(v, [&](double x) { return boost::math::ibeta(c.a, c.b, x); });
    EXPECT_LT(d, oracle::ks_critical_one(0.01, n)) << c.id;
  }
  const auto u = draw("uniform_0_1", 99, n);
  EXPECT_LT(oracle::ks_one_sample(u, [](double x) { return x; }), oracle::ks_critical_one(0.01, n));
  const auto g = draw("normal_0.5_0.1", 99, n);
  const double d = oracle::ks_one_sample(g, [](double x) { return 0.5 * std::erfc(-(x - 0.5) / (0.1 * std::sqrt(2.0))); });
  EXPECT_LT(d, oracle::ks_critical_one(0.01, n));
}

TEST(Distributions, InverseCdfSamplerAgrees) {
  DistributionSpec spec = DistributionSpec::beta(13, 13);
  spec.beta_sampler = BetaSampler::InverseCdf;
  const std::size_t n = 20000;
  auto src = make_source({"inv", spec}, 8);
  std::vector<double> v(n);
  for (auto& x : v) x = src.next_value();
  const double d = oracle::ks_one_sample(v, [](double x) { return boost::math::ibeta(13.0, 13.0, x); });
  EXPECT_LT(d, oracle::ks_critical_one(0.01, n));
}

TEST(Sources, MoveKeepsStream) {
  auto a = make_source(source_spec("weierstrass"), 6);
  auto b = make_source(source_spec("weierstrass"), 6);
  a.next_value();
  b.next_value();
  auto moved = std::move(a);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(moved.next_value(), b.next_value());
}
