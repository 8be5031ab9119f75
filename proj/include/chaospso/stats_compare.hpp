#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chaospso {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Rank sum of `a` in the pooled sample (midranks for ties).
double rank_sum(std::span<const double> a, std::span<const double> b);

/// Two-sided rank-sum test. Exact enumeration when |a|+|b| <= 20 and the
/// pooled sample has no ties; the normal approximation otherwise.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Exact null distribution of the rank sum; requires tie-free samples.
TestResult wilcoxon_exact(std::span<const double> a, std::span<const double> b);

/// Normal approximation with tie-corrected variance and continuity correction.
TestResult wilcoxon_normal(std::span<const double> a, std::span<const double> b);

/// Friedman test with two treatments; block i is (a[i], b[i]). The tie-corrected
/// statistic reduces to (n+ - n-)^2 / (n+ + n-) with chi-square(1) p-value.
TestResult friedman_two(std::span<const double> a, std::span<const double> b);

enum class StatTest { Wilcoxon, Friedman };
enum class Outcome { RowBetter, ColBetter, Indistinguishable };

std::string_view test_name(StatTest t);  // "wilcoxon" / "friedman"

struct PairVerdict {
  int function_id = 0;
  StatTest test = StatTest::Wilcoxon;
  Outcome outcome = Outcome::Indistinguishable;
  double p_value = 1.0;
};

double median(std::span<const double> v);

/// Lower distance error is better. Equal medians with p < alpha count as a tie.
PairVerdict classify_pair(std::span<const double> a, std::span<const double> b, StatTest test,
                          double alpha = 0.05, int function_id = 0);

struct Counts {
  int plus = 0;
  int minus = 0;
  int tie = 0;
  int total() const { return plus + minus + tie; }
  Counts transposed() const { return {minus, plus, tie}; }
  Counts& operator+=(const Counts& o) {
    plus += o.plus;
    minus += o.minus;
    tie += o.tie;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

/// tie / (plus + minus + tie); 27 functions give tie / 27.
double tie_fraction(const Counts& c);

/// Distance errors per (source, function), ordered by run index.
using ErrorTable = std::map<std::pair<std::string, int>, std::vector<double>>;

struct SourceAggregate {
  // Over sources of the other kind (maps vs distributions), then the same kind.
  std::array<Counts, 2> opposite{};
  std::array<Counts, 2> same{};
};

struct ComparisonMatrix {
  std::vector<std::string> sources;
  std::vector<int> functions;
  // cells[t][i][j]: source i (row) against source j (column) under test t.
  std::array<std::vector<std::vector<Counts>>, 2> cells;
  std::vector<SourceAggregate> aggregates;

  const Counts& cell(StatTest t, std::size_t i, std::size_t j) const {
    return cells[static_cast<std::size_t>(t)][i][j];
  }
};

/// Throws ValidationError listing every missing (source, function) pair or
/// unequal run count.
ComparisonMatrix comparison_matrix(const ErrorTable& table, const std::vector<std::string>& sources,
                                   const std::vector<int>& functions, double alpha = 0.05);

}  // namespace chaospso
