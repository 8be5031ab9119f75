#include "chaospso/sequence_analysis.hpp"

#include <algorithm>
#include <string>

#include "chaospso/errors.hpp"

namespace chaospso {

std::uint64_t analysis_seed(std::uint64_t master_seed, std::string_view source_id, std::uint64_t index) {
  return combine_seed(combine_seed(master_seed ^ 0x616e616c79736973ULL, stable_hash(source_id)), index);
}

namespace {

DensityHistogram finish(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  const int bins = static_cast<int>(counts.size());
  DensityHistogram h;
  h.samples = n;
  h.bin_edges.resize(counts.size() + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / bins;
  h.density.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double width = h.bin_edges[i + 1] - h.bin_edges[i];
    h.density[i] = n == 0 ? 0.0 : static_cast<double>(counts[i]) / (static_cast<double>(n) * width);
  }
  return h;
}

inline std::size_t bin_of(double v, int bins) {
  const double x = std::clamp(v, 0.0, 1.0) * bins;
  return std::min(static_cast<std::size_t>(x), static_cast<std::size_t>(bins - 1));
}

void check_bins(int bins) {
  if (bins < 2) throw ValidationError("bins must be at least 2");
}

}  // namespace

DensityHistogram histogram(std::span<const double> values, int bins) {
  check_bins(bins);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) ++counts[bin_of(v, bins)];
  return finish(counts, values.size());
}

DensityHistogram invariant_density(const SourceSpec& spec, int n_inits, int iters, int bins,
                                   std::uint64_t master_seed) {
  check_bins(bins);
  if (n_inits < 1) throw ValidationError("n_inits must be at least 1");
  if (iters < 1) throw ValidationError("iters must be at least 1");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (int i = 0; i < n_inits; ++i) {
    auto src = make_source(spec, analysis_seed(master_seed, spec.id, static_cast<std::uint64_t>(i)));
    for (int k = 0; k < iters; ++k) ++counts[bin_of(src.next_value(), bins)];
  }
  return finish(counts, static_cast<std::uint64_t>(n_inits) * static_cast<std::uint64_t>(iters));
}

LyapunovEstimate lyapunov_exponent(const SourceSpec& spec, int n_inits, int iters, std::uint64_t master_seed) {
  if (!spec.is_map()) throw ValidationError("Lyapunov defined for maps only");
  if (n_inits < 1) throw ValidationError("n_inits must be at least 1");
  if (iters < 1) throw ValidationError("iters must be at least 1");
  LyapunovEstimate est;
  est.inits = static_cast<std::size_t>(n_inits);
  est.iters = static_cast<std::size_t>(iters);
  CompensatedSum across;
  for (int i = 0; i < n_inits; ++i) {
    auto src = make_source(spec, analysis_seed(master_seed, spec.id, static_cast<std::uint64_t>(i)));
    MapOrbit& orbit = *src.orbit();
    CompensatedSum along;
    int used = 0;
    for (int k = 0; k < iters; ++k) {
      const MapDerivative d = orbit.kernel().derivative(orbit.state());
      if (d.flagged || d.value == 0.0) {
        ++est.skipped;
      } else {
        along.add(std::log(std::abs(d.value)));
        ++used;
      }
      orbit.advance();
    }
    if (used > 0) across.add(along.value() / used);
  }
  est.lambda = across.value() / n_inits;
  return est;
}

AutocorrReport autocorrelation(std::span<const double> values, int lmax) {
  const std::size_t T = values.size();
  if (lmax < 1) throw ValidationError("lmax must be at least 1");
  if (T <= static_cast<std::size_t>(lmax)) throw ValidationError("sequence length must exceed lmax");

  CompensatedSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(T);
  std::vector<double> d(T);
  for (std::size_t t = 0; t < T; ++t) d[t] = values[t] - mean;

  // Lag 1 runs the same loop as the denominator, so r(1) is exactly 1.
  auto lag_sum = [&](std::size_t lag) {
    CompensatedSum s;
    for (std::size_t t = 0; t + lag <= T; ++t) s.add(d[t] * d[t + lag - 1]);
    return s.value();
  };
  const double denom = lag_sum(1);

  AutocorrReport rep;
  rep.T = T;
  for (int lag = 1; lag <= lmax; ++lag) {
    rep.lags.push_back(lag);
    rep.r.push_back(denom == 0.0 ? (lag == 1 ? 1.0 : 0.0) : lag_sum(static_cast<std::size_t>(lag)) / denom);
  }
  return rep;
}

AutocorrReport mean_autocorrelation(const SourceSpec& spec, int n_inits, int T, int lmax,
                                    std::uint64_t master_seed) {
  if (n_inits < 1) throw ValidationError("n_inits must be at least 1");
  if (T < 1) throw ValidationError("T must be at least 1");
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(std::max(lmax, 0)));
  std::vector<double> seq(static_cast<std::size_t>(T));
  AutocorrReport out;
  for (int i = 0; i < n_inits; ++i) {
    auto src = make_source(spec, analysis_seed(master_seed, spec.id, static_cast<std::uint64_t>(i)));
    for (auto& v : seq) v = src.next_value();
    const AutocorrReport one = autocorrelation(seq, lmax);
    for (std::size_t k = 0; k < one.r.size(); ++k) sums[k].add(one.r[k]);
    if (i == 0) out.lags = one.lags;
  }
  out.T = static_cast<std::size_t>(T);
  for (std::size_t k = 0; k < sums.size(); ++k) out.r.push_back(sums[k].value() / n_inits);
  return out;
}

std::pair<double, double> autocorr_auc(const AutocorrReport& report, double prng_reference_auc) {
  constexpr int kLastLag = 10;
  std::vector<double> r(kLastLag + 1, 0.0);
  std::vector<bool> seen(kLastLag + 1, false);
  for (std::size_t i = 0; i < report.lags.size() && i < report.r.size(); ++i) {
    const int lag = report.lags[i];
    if (lag >= 1 && lag <= kLastLag) {
      r[static_cast<std::size_t>(lag)] = report.r[i];
      seen[static_cast<std::size_t>(lag)] = true;
    }
  }
  for (int lag = 1; lag <= kLastLag; ++lag) {
    if (!seen[static_cast<std::size_t>(lag)])
      throw ValidationError("autocorrelation report is missing lag " + std::to_string(lag));
  }
  CompensatedSum area;
  for (int lag = 1; lag < kLastLag; ++lag)
    area.add(0.5 * (r[static_cast<std::size_t>(lag)] + r[static_cast<std::size_t>(lag) + 1]));
  const double raw = area.value();
  return {raw, raw / prng_reference_auc};
}

}  // namespace chaospso
