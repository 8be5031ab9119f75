#include "chaospso/stats_compare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaospso/errors.hpp"
#include "chaospso/sequence_sources.hpp"

namespace chaospso {

namespace {

void require_non_empty(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("rank-sum test needs non-empty samples");
}

struct Ranked {
  double sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool has_ties = false;
};

Ranked rank_pooled(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, true);
  for (double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  Ranked r;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second) r.sum_a += mid;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) {
      r.has_ties = true;
      r.tie_term += t * t * t - t;
    }
    i = j;
  }
  return r;
}

}  // namespace

double rank_sum(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  return rank_pooled(a, b).sum_a;
}

TestResult wilcoxon_exact(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  const Ranked r = rank_pooled(a, b);
  if (r.has_ties) throw ValidationError("exact rank-sum distribution requires tie-free samples");
  const int n1 = static_cast<int>(a.size());
  const int n = n1 + static_cast<int>(b.size());
  if (n > 60) throw ValidationError("exact rank-sum enumeration limited to 60 observations");
  const int max_sum = n * (n + 1) / 2;
  // ways[k][s]: subsets of size k of {1..m} with rank sum s.
  std::vector<std::vector<double>> ways(static_cast<std::size_t>(n1 + 1),
                                        std::vector<double>(static_cast<std::size_t>(max_sum + 1), 0.0));
  ways[0][0] = 1.0;
  for (int m = 1; m <= n; ++m)
    for (int k = std::min(m, n1); k >= 1; --k)
      for (int s = max_sum; s >= m; --s)
        ways[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] +=
            ways[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s - m)];
  const auto& dist = ways[static_cast<std::size_t>(n1)];
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  const int w = static_cast<int>(std::lround(r.sum_a));
  double lower = 0.0, upper = 0.0;
  for (int s = 0; s <= max_sum; ++s) {
    if (s <= w) lower += dist[static_cast<std::size_t>(s)];
    if (s >= w) upper += dist[static_cast<std::size_t>(s)];
  }
  return {r.sum_a, std::min(1.0, 2.0 * std::min(lower, upper) / total)};
}

TestResult wilcoxon_normal(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  const Ranked r = rank_pooled(a, b);
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double mu = n1 * (n + 1.0) / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - r.tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return {r.sum_a, 1.0};
  const double z = std::max(0.0, std::abs(r.sum_a - mu) - 0.5) / std::sqrt(var);
  return {r.sum_a, std::min(1.0, std::erfc(z / std::sqrt(2.0)))};
}

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  if (a.size() + b.size() <= 20 && !rank_pooled(a, b).has_ties) return wilcoxon_exact(a, b);
  return wilcoxon_normal(a, b);
}

TestResult friedman_two(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ValidationError("Friedman test needs paired samples of equal length (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw ValidationError("Friedman test needs at least one block");
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) plus += 1.0;
    else if (b[i] < a[i]) minus += 1.0;
  }
  if (plus + minus == 0.0) return {0.0, 1.0};
  const double q = (plus - minus) * (plus - minus) / (plus + minus);
  return {q, std::erfc(std::sqrt(q / 2.0))};
}

std::string_view test_name(StatTest t) { return t == StatTest::Wilcoxon ? "wilcoxon" : "friedman"; }

double median(std::span<const double> v) {
  if (v.empty()) throw ValidationError("median of an empty sample");
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

PairVerdict classify_pair(std::span<const double> a, std::span<const double> b, StatTest test, double alpha,
                          int function_id) {
  PairVerdict v;
  v.function_id = function_id;
  v.test = test;
  v.p_value = test == StatTest::Wilcoxon ? wilcoxon_rank_sum(a, b).p_value : friedman_two(a, b).p_value;
  if (v.p_value >= alpha) return v;
  const double ma = median(a), mb = median(b);
  if (ma < mb) v.outcome = Outcome::RowBetter;
  else if (mb < ma) v.outcome = Outcome::ColBetter;
  return v;
}

double tie_fraction(const Counts& c) {
  const int t = c.total();
  return t == 0 ? 0.0 : static_cast<double>(c.tie) / static_cast<double>(t);
}

ComparisonMatrix comparison_matrix(const ErrorTable& table, const std::vector<std::string>& sources,
                                   const std::vector<int>& functions, double alpha) {
  std::ostringstream gaps;
  std::size_t runs = 0;
  bool have_runs = false;
  for (const auto& s : sources)
    for (int f : functions) {
      const auto it = table.find({s, f});
      if (it == table.end() || it->second.empty()) {
        gaps << " (" << s << ", " << f << ")";
        continue;
      }
      if (!have_runs) {
        runs = it->second.size();
        have_runs = true;
      } else if (it->second.size() != runs) {
        gaps << " (" << s << ", " << f << ": " << it->second.size() << " runs, expected " << runs << ")";
      }
    }
  if (!gaps.str().empty()) throw ValidationError("comparison coverage gaps:" + gaps.str());

  const std::size_t k = sources.size();
  ComparisonMatrix m;
  m.sources = sources;
  m.functions = functions;
  for (auto& c : m.cells) c.assign(k, std::vector<Counts>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (int f : functions) {
        const auto& a = table.at({sources[i], f});
        const auto& b = table.at({sources[j], f});
        for (StatTest t : {StatTest::Wilcoxon, StatTest::Friedman}) {
          const auto v = classify_pair(a, b, t, alpha, f);
          Counts c;
          if (v.outcome == Outcome::RowBetter) c.plus = 1;
          else if (v.outcome == Outcome::ColBetter) c.minus = 1;
          else c.tie = 1;
          auto& cells = m.cells[static_cast<std::size_t>(t)];
          cells[i][j] += c;
          cells[j][i] += c.transposed();
        }
      }

  std::vector<bool> is_map(k);
  for (std::size_t i = 0; i < k; ++i) is_map[i] = source_spec(sources[i]).is_map();
  m.aggregates.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (std::size_t t = 0; t < 2; ++t) {
        auto& agg = is_map[i] == is_map[j] ? m.aggregates[i].same : m.aggregates[i].opposite;
        agg[t] += m.cells[t][i][j];
      }
    }
  return m;
}

}  // namespace chaospso
