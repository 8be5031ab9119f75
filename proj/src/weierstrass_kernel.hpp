#pragma once

// Batched cos/sin for the Weierstrass map, whose phases b^i*pi*z reach 1e200.
//
// std::cos handles such arguments correctly but slowly (Payne-Hanek in libm,
// ~60 ns per call). Here each argument |x| = M * 2^E (M a 53-bit integer) is
// reduced with a per-exponent table holding frac(2^E / 2pi) to ~159 bits, so
// frac(x / 2pi) = frac(M * table[E]) is formed exactly with error-free products.
// The reduced angle is held in one double, so results carry an absolute error
// of a few 1e-16 (libm is within 1 ulp of the value).
// A scalar path and an AVX2 path perform the same IEEE operations in the same
// order and therefore produce bit-identical results.

#include <cstddef>
#include <span>
#include <vector>

namespace chaospso::detail {

enum class TrigKernel { Auto, Scalar, Avx2 };

/// Lane width used for padding term arrays.
inline constexpr std::size_t kTermLanes = 4;

/// True when the running CPU can execute the AVX2 kernel.
bool avx2_kernel_available();

/// Computes cos(phase[i] * z) and sin(phase[i] * z) for every i.
/// `phase.size()` must be a multiple of kTermLanes; outputs must have that size.
void phase_cos_sin(std::span<const double> phase, double z, std::span<double> cos_out,
                   std::span<double> sin_out, TrigKernel kernel = TrigKernel::Auto);

/// Cosine only; same contract as phase_cos_sin.
void phase_cos(std::span<const double> phase, double z, std::span<double> cos_out,
               TrigKernel kernel = TrigKernel::Auto);

/// Single-argument reduction (scalar path); used by tests as the reference.
void reduced_cos_sin(double x, double& c, double& s);

/// Dot product in a fixed interleaved order (four partial sums, combined as
/// (s0 + s1) + (s2 + s3)). Lengths must match and be a multiple of kTermLanes.
double lane_dot(std::span<const double> a, std::span<const double> b);

}  // namespace chaospso::detail
