#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "chaospso/sequence_sources.hpp"

namespace chaospso {

/// Normalized histogram on [0,1].
struct DensityHistogram {
  std::vector<double> bin_edges;  // bins + 1 edges
  std::vector<double> density;    // sum(density * width) == 1
  std::uint64_t samples = 0;
};

struct AutocorrReport {
  std::vector<int> lags;   // 1..lmax
  std::vector<double> r;   // r[i] belongs to lags[i]
  double auc_raw = 0.0;
  double auc_normalized = 0.0;
  std::size_t T = 0;
};

struct LyapunovEstimate {
  double lambda = 0.0;  // nats per iteration
  std::size_t inits = 0;
  std::size_t iters = 0;
  std::uint64_t skipped = 0;  // flagged (non-differentiable) points left out
};

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Seed of the i-th orbit / draw stream used by the analysis protocol.
std::uint64_t analysis_seed(std::uint64_t master_seed, std::string_view source_id, std::uint64_t index);

/// Histogram of values in [0,1] with `bins` equal bins.
DensityHistogram histogram(std::span<const double> values, int bins);

/// Histogram over all values emitted by `n_inits` seeded sources of length `iters`.
DensityHistogram invariant_density(const SourceSpec& spec, int n_inits, int iters, int bins,
                                   std::uint64_t master_seed = 1);

/// Mean over inits of (1/used) * sum ln|f'(z(k))| along the raw orbit (after
/// burn-in), skipping flagged points. Throws ValidationError for distributions.
LyapunovEstimate lyapunov_exponent(const SourceSpec& spec, int n_inits, int iters,
                                   std::uint64_t master_seed = 1);

/// r(l) = sum_{t=0}^{T-l} (z(t+1)-m)(z(t+l)-m) / sum_{t=0}^{T-1} (z(t+1)-m)^2,
/// with values[0] = z(1) and m the sequence mean. Requires T > lmax >= 1.
AutocorrReport autocorrelation(std::span<const double> values, int lmax);

/// Lag-wise mean of r over `n_inits` seeded sequences of length T.
AutocorrReport mean_autocorrelation(const SourceSpec& spec, int n_inits, int T, int lmax,
                                    std::uint64_t master_seed = 1);

/// Trapezoid area of r over lags 1..10, and that area divided by the reference.
std::pair<double, double> autocorr_auc(const AutocorrReport& report, double prng_reference_auc);

}  // namespace chaospso
