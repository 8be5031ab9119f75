#include "weierstrass_kernel.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CHAOSPSO_HAVE_X86 1
#else
#define CHAOSPSO_HAVE_X86 0
#endif

namespace chaospso::detail {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;
constexpr std::uint64_t kMantissaMask = 0x000fffffffffffffULL;
constexpr std::uint64_t kExponent52 = 0x4330000000000000ULL;  // 2^52

// Minimax coefficients of the fdlibm kernels (__kernel_cos, __kernel_sin) on [-pi/4, pi/4].
constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

// Row e holds frac(2^(e-1075) / 2pi) split into three doubles (c0 + c1 + c2),
// padded to four so one aligned 256-bit load fetches a row.
struct alignas(32) ReductionRow {
  double c0, c1, c2, pad;
};

using ReductionTable = std::array<ReductionRow, 2048>;

ReductionTable build_table() {
  using Wide = boost::multiprecision::number<
      boost::multiprecision::cpp_bin_float<1400, boost::multiprecision::digit_base_2>>;
  const Wide inv_two_pi = Wide(1) / (2 * boost::math::constants::pi<Wide>());
  ReductionTable table{};
  // Exponents below 64 are arguments under 2^-960; their rows stay zero and
  // reduce to an angle of exactly 0.
  for (int e = 64; e < 2047; ++e) {
    Wide v = ldexp(inv_two_pi, e - 1075);
    v -= floor(v);
    const double c0 = static_cast<double>(v);
    v -= c0;
    const double c1 = static_cast<double>(v);
    v -= c1;
    const double c2 = static_cast<double>(v);
    table[static_cast<std::size_t>(e)] = {c0, c1, c2, 0.0};
  }
  return table;
}

const ReductionTable& reduction_table() {
  static const ReductionTable table = build_table();
  return table;
}

struct CosSin {
  double c;
  double s;
};

inline CosSin reduce_scalar(double x, const ReductionTable& table) {
  const std::uint64_t xbits = std::bit_cast<std::uint64_t>(x);
  const std::uint64_t abits = xbits & 0x7fffffffffffffffULL;
  const ReductionRow& row = table[abits >> 52];
  const double m = std::bit_cast<double>((abits & kMantissaMask) | kExponent52);

  const double p0 = m * row.c0;
  const double e0 = std::fma(m, row.c0, -p0);
  const double f0 = p0 - std::rint(p0);
  const double p1 = m * row.c1;
  const double e1 = std::fma(m, row.c1, -p1);
  const double f1 = p1 - std::rint(p1);
  const double turns = (f0 + f1) + ((e0 + e1) + m * row.c2);

  const double k = std::rint(4.0 * turns);
  const double r = (turns - 0.25 * k) * kTwoPi;
  const std::int64_t q = static_cast<std::int64_t>(k) & 3;

  const double zz = r * r;
  const double cr = zz * (kC1 + zz * (kC2 + zz * (kC3 + zz * (kC4 + zz * (kC5 + zz * kC6)))));
  const double hz = 0.5 * zz;
  const double w = 1.0 - hz;
  const double cv = w + (((1.0 - w) - hz) + zz * cr);
  const double sr = kS2 + zz * (kS3 + zz * (kS4 + zz * (kS5 + zz * kS6)));
  const double v = zz * r;
  const double sv = r + v * (kS1 + zz * sr);

  const bool odd = (q & 1) != 0;
  double c = odd ? sv : cv;
  if (((q + 1) & 2) != 0) c = -c;
  double s = odd ? cv : sv;
  if ((q & 2) != 0) s = -s;
  if ((xbits >> 63) != 0) s = -s;
  return {c, s};
}

void phase_scalar(std::span<const double> phase, double z, double* cos_out, double* sin_out) {
  const ReductionTable& table = reduction_table();
  for (std::size_t i = 0; i < phase.size(); ++i) {
    const CosSin cs = reduce_scalar(phase[i] * z, table);
    cos_out[i] = cs.c;
    if (sin_out != nullptr) sin_out[i] = cs.s;
  }
}

#if CHAOSPSO_HAVE_X86
__attribute__((target("avx2,fma"))) void phase_avx2(std::span<const double> phase, double z,
                                                      double* cos_out, double* sin_out) {
  const ReductionTable& table = reduction_table();
  const double* rows = &table[0].c0;
  const __m256d vz = _mm256_set1_pd(z);
  const __m256i abs_mask = _mm256_set1_epi64x(0x7fffffffffffffffLL);
  const __m256i sign_mask = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  const __m256i mant_mask = _mm256_set1_epi64x(static_cast<long long>(kMantissaMask));
  const __m256i exp52 = _mm256_set1_epi64x(static_cast<long long>(kExponent52));
  const __m256i one_i = _mm256_set1_epi64x(1);
  const __m256i two_i = _mm256_set1_epi64x(2);
  const __m256i three_i = _mm256_set1_epi64x(3);
  const __m256d round_magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
#define CP_ADD _mm256_add_pd
#define CP_SUB _mm256_sub_pd
#define CP_MUL _mm256_mul_pd
#define CP_SET _mm256_set1_pd

  for (std::size_t i = 0; i < phase.size(); i += 4) {
    const __m256i xbits = _mm256_castpd_si256(CP_MUL(_mm256_loadu_pd(phase.data() + i), vz));
    const __m256i abits = _mm256_and_si256(xbits, abs_mask);
    const __m256i e = _mm256_srli_epi64(abits, 52);
    const __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(abits, mant_mask), exp52));

    alignas(32) std::int64_t idx[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(idx), e);
    const __m256d r0 = _mm256_load_pd(rows + 4 * idx[0]);
    const __m256d r1 = _mm256_load_pd(rows + 4 * idx[1]);
    const __m256d r2 = _mm256_load_pd(rows + 4 * idx[2]);
    const __m256d r3 = _mm256_load_pd(rows + 4 * idx[3]);
    const __m256d t0 = _mm256_unpacklo_pd(r0, r1);
    const __m256d t1 = _mm256_unpackhi_pd(r0, r1);
    const __m256d t2 = _mm256_unpacklo_pd(r2, r3);
    const __m256d t3 = _mm256_unpackhi_pd(r2, r3);
    const __m256d c0 = _mm256_permute2f128_pd(t0, t2, 0x20);
    const __m256d c1 = _mm256_permute2f128_pd(t1, t3, 0x20);
    const __m256d c2 = _mm256_permute2f128_pd(t0, t2, 0x31);

    const __m256d p0 = CP_MUL(m, c0);
    const __m256d e0 = _mm256_fmsub_pd(m, c0, p0);
    const __m256d f0 = CP_SUB(p0, _mm256_round_pd(p0, kNearest));
    const __m256d p1 = CP_MUL(m, c1);
    const __m256d e1 = _mm256_fmsub_pd(m, c1, p1);
    const __m256d f1 = CP_SUB(p1, _mm256_round_pd(p1, kNearest));
    const __m256d turns = CP_ADD(CP_ADD(f0, f1), CP_ADD(CP_ADD(e0, e1), CP_MUL(m, c2)));

    const __m256d k = _mm256_round_pd(CP_MUL(CP_SET(4.0), turns), kNearest);
    const __m256d r = CP_MUL(CP_SUB(turns, CP_MUL(CP_SET(0.25), k)), CP_SET(kTwoPi));
    const __m256i q = _mm256_and_si256(_mm256_castpd_si256(CP_ADD(k, round_magic)), three_i);

    const __m256d zz = CP_MUL(r, r);
    const __m256d cr = CP_MUL(
        zz, CP_ADD(CP_SET(kC1),
                   CP_MUL(zz, CP_ADD(CP_SET(kC2),
                                     CP_MUL(zz, CP_ADD(CP_SET(kC3),
                                                       CP_MUL(zz, CP_ADD(CP_SET(kC4),
                                                                         CP_MUL(zz, CP_ADD(CP_SET(kC5),
                                                                                           CP_MUL(zz, CP_SET(kC6))))))))))));
    const __m256d hz = CP_MUL(CP_SET(0.5), zz);
    const __m256d w = CP_SUB(CP_SET(1.0), hz);
    const __m256d cv = CP_ADD(w, CP_ADD(CP_SUB(CP_SUB(CP_SET(1.0), w), hz), CP_MUL(zz, cr)));
    const __m256d sr =
        CP_ADD(CP_SET(kS2),
               CP_MUL(zz, CP_ADD(CP_SET(kS3),
                                 CP_MUL(zz, CP_ADD(CP_SET(kS4),
                                                   CP_MUL(zz, CP_ADD(CP_SET(kS5), CP_MUL(zz, CP_SET(kS6)))))))));
    const __m256d v = CP_MUL(zz, r);
    const __m256d sv = CP_ADD(r, CP_MUL(v, CP_ADD(CP_SET(kS1), CP_MUL(zz, sr))));

    const __m256d odd = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one_i), one_i));
    const __m256i cos_neg = _mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one_i), two_i), 62);
    const __m256d cos_val = _mm256_xor_pd(_mm256_blendv_pd(cv, sv, odd), _mm256_castsi256_pd(cos_neg));
    _mm256_storeu_pd(cos_out + i, cos_val);
    if (sin_out != nullptr) {
      const __m256i sin_neg = _mm256_xor_si256(_mm256_slli_epi64(_mm256_and_si256(q, two_i), 62),
                                               _mm256_and_si256(xbits, sign_mask));
      const __m256d sin_val = _mm256_xor_pd(_mm256_blendv_pd(sv, cv, odd), _mm256_castsi256_pd(sin_neg));
      _mm256_storeu_pd(sin_out + i, sin_val);
    }
  }
#undef CP_ADD
#undef CP_SUB
#undef CP_MUL
#undef CP_SET
}
#endif

void dispatch(std::span<const double> phase, double z, double* cos_out, double* sin_out,
              TrigKernel kernel) {
  if (phase.size() % kTermLanes != 0) {
    throw std::invalid_argument("phase array length must be a multiple of the lane width");
  }
  if (kernel == TrigKernel::Auto) {
    kernel = avx2_kernel_available() ? TrigKernel::Avx2 : TrigKernel::Scalar;
  }
#if CHAOSPSO_HAVE_X86
  if (kernel == TrigKernel::Avx2) {
    if (!avx2_kernel_available()) throw std::runtime_error("AVX2 kernel requested on a CPU without AVX2/FMA");
    phase_avx2(phase, z, cos_out, sin_out);
    return;
  }
#else
  if (kernel == TrigKernel::Avx2) throw std::runtime_error("AVX2 kernel not compiled for this target");
#endif
  phase_scalar(phase, z, cos_out, sin_out);
}

}  // namespace

bool avx2_kernel_available() {
#if CHAOSPSO_HAVE_X86
  static const bool available = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return available;
#else
  return false;
#endif
}

void phase_cos_sin(std::span<const double> phase, double z, std::span<double> cos_out,
                   std::span<double> sin_out, TrigKernel kernel) {
  if (cos_out.size() != phase.size() || sin_out.size() != phase.size()) {
    throw std::invalid_argument("output size does not match phase array");
  }
  dispatch(phase, z, cos_out.data(), sin_out.data(), kernel);
}

void phase_cos(std::span<const double> phase, double z, std::span<double> cos_out, TrigKernel kernel) {
  if (cos_out.size() != phase.size()) throw std::invalid_argument("output size does not match phase array");
  dispatch(phase, z, cos_out.data(), nullptr, kernel);
}

void reduced_cos_sin(double x, double& c, double& s) {
  const CosSin cs = reduce_scalar(x, reduction_table());
  c = cs.c;
  s = cs.s;
}

double lane_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() % kTermLanes != 0) {
    throw std::invalid_argument("lane_dot needs equal lengths that are a multiple of the lane width");
  }
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < a.size(); i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  return (s0 + s1) + (s2 + s3);
}

}  // namespace chaospso::detail
