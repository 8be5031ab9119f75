#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "weierstrass_kernel.hpp"

using namespace chaospso::detail;

namespace {

// Phases spanning the range used by the map: b^i * pi for b=101, i=0..100,
// plus random magnitudes from 1e-3 to 1e300.
std::vector<double> sample_phases() {
  std::vector<double> p;
  for (int i = 0; i <= 100; ++i) p.push_back(std::pow(101.0, i) * 3.141592653589793);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> expo(-3.0, 300.0);
  while (p.size() % kTermLanes != 0 || p.size() < 400) p.push_back(std::pow(10.0, expo(rng)));
  return p;
}

}  // namespace

// The reduced angle carries an absolute error near 2^-53 * 2pi, so results
// agree with libm to a few ulp of 1 rather than to 1 ulp of the value.
TEST(WeierstrassKernel, MatchesLibmCosSin) {
  const auto phase = sample_phases();
  std::vector<double> c(phase.size()), s(phase.size());
  for (double z : {0.3, -0.71234, 17.25, -28.9, 1e-9}) {
    phase_cos_sin(phase, z, c, s, TrigKernel::Scalar);
    for (std::size_t i = 0; i < phase.size(); ++i) {
      const double x = phase[i] * z;
      EXPECT_NEAR(c[i], std::cos(x), 8e-16) << "x=" << x;
      EXPECT_NEAR(s[i], std::sin(x), 8e-16) << "x=" << x;
    }
  }
}

TEST(WeierstrassKernel, ZeroPhaseGivesUnitCosine) {
  std::vector<double> phase(8, 0.0), c(8), s(8);
  phase_cos_sin(phase, 3.7, c, s);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(c[i], 1.0);
    EXPECT_EQ(s[i], 0.0);
  }
}

TEST(WeierstrassKernel, VectorPathIsBitIdentical) {
  if (!avx2_kernel_available()) GTEST_SKIP() << "CPU lacks AVX2";
  const auto phase = sample_phases();
  std::vector<double> c1(phase.size()), s1(phase.size()), c2(phase.size()), s2(phase.size());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> zdist(-30.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double z = zdist(rng);
    phase_cos_sin(phase, z, c1, s1, TrigKernel::Scalar);
    phase_cos_sin(phase, z, c2, s2, TrigKernel::Avx2);
    for (std::size_t i = 0; i < phase.size(); ++i) {
      ASSERT_EQ(std::bit_cast<std::uint64_t>(c1[i]), std::bit_cast<std::uint64_t>(c2[i]));
      ASSERT_EQ(std::bit_cast<std::uint64_t>(s1[i]), std::bit_cast<std::uint64_t>(s2[i]));
    }
    phase_cos(phase, z, c2, TrigKernel::Avx2);
    for (std::size_t i = 0; i < phase.size(); ++i)
      ASSERT_EQ(std::bit_cast<std::uint64_t>(c1[i]), std::bit_cast<std::uint64_t>(c2[i]));
  }
}

TEST(WeierstrassKernel, LaneDotOrder) {
  std::vector<double> a{1e16, 1.0, -1e16, 1.0, 3.0, 0.5, 0.25, 2.0};
  std::vector<double> b(8, 1.0);
  const double s0 = 1e16 + 3.0, s1 = 1.0 + 0.5, s2 = -1e16 + 0.25, s3 = 1.0 + 2.0;
  EXPECT_EQ(lane_dot(a, b), (s0 + s1) + (s2 + s3));
}

TEST(WeierstrassKernel, RejectsUnpaddedInput) {
  std::vector<double> phase(5, 1.0), c(5), s(5);
  EXPECT_THROW(phase_cos_sin(phase, 1.0, c, s), std::invalid_argument);
}
