#include "chaospso/rating.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "chaospso/errors.hpp"
#include "chaospso/sequence_analysis.hpp"

namespace chaospso {

namespace {

constexpr double kGlickoScale = 173.7178;
constexpr double kMaxRd = 350.0;
constexpr double kVolatilityTolerance = 1e-6;
constexpr int kMaxVolatilitySteps = 100;

double g_factor(double phi) { return 1.0 / std::sqrt(1.0 + 3.0 * phi * phi / (std::numbers::pi * std::numbers::pi)); }

double new_volatility(double sigma, double phi, double v, double delta, double tau) {
  const double a = std::log(sigma * sigma);
  auto f = [&](double x) {
    const double ex = std::exp(x);
    const double d = phi * phi + v + ex;
    return ex * (delta * delta - phi * phi - v - ex) / (2.0 * d * d) - (x - a) / (tau * tau);
  };
  double A = a, B = 0.0;
  if (delta * delta > phi * phi + v) {
    B = std::log(delta * delta - phi * phi - v);
  } else {
    int k = 1;
    while (f(a - k * tau) < 0.0) {
      if (++k > kMaxVolatilitySteps) throw RuntimeFailure("Glicko-2 volatility bracket search did not converge");
    }
    B = a - k * tau;
  }
  double fA = f(A), fB = f(B);
  int steps = 0;
  while (std::abs(B - A) > kVolatilityTolerance) {
    if (++steps > kMaxVolatilitySteps) throw RuntimeFailure("Glicko-2 volatility iteration did not converge");
    const double C = A + (A - B) * fA / (fB - fA);
    const double fC = f(C);
    if (fC * fB <= 0.0) {
      A = B;
      fA = fB;
    } else {
      fA /= 2.0;
    }
    B = C;
    fB = fC;
  }
  return std::exp(A / 2.0);
}

struct BlockTable {
  // means[s][f][g]
  std::vector<std::vector<std::vector<double>>> means;
  int blocks = 0;
};

BlockTable block_means(const ErrorTable& table, const std::vector<std::string>& sources,
                       const std::vector<int>& functions, int block_size) {
  if (block_size < 1) throw ValidationError("block_size must be at least 1");
  std::ostringstream gaps;
  BlockTable bt;
  bt.means.resize(sources.size());
  std::size_t runs = 0;
  bool have = false;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (int f : functions) {
      const auto it = table.find({sources[s], f});
      if (it == table.end() || it->second.empty()) {
        gaps << " (" << sources[s] << ", " << f << ")";
        bt.means[s].emplace_back();
        continue;
      }
      const auto& v = it->second;
      if (!have) {
        runs = v.size();
        have = true;
      }
      if (v.size() != runs) gaps << " (" << sources[s] << ", " << f << ": " << v.size() << " runs, expected " << runs << ")";
      const auto games = partition_games(v, v, block_size);
      std::vector<double> m;
      for (const auto& g : games) m.push_back(g.first);
      bt.means[s].push_back(std::move(m));
    }
  }
  if (!gaps.str().empty()) throw ValidationError("rating coverage gaps:" + gaps.str());
  bt.blocks = static_cast<int>(runs) / block_size;
  return bt;
}

struct PeriodGame {
  std::size_t a, b;
  std::size_t f;
  GameOutcome outcome;
};

std::vector<PeriodGame> period_games(const BlockTable& bt, std::size_t n_sources, std::size_t n_functions, int g,
                                     const RatingParams& p) {
  std::vector<PeriodGame> out;
  const auto gi = static_cast<std::size_t>(g);
  for (std::size_t i = 0; i < n_sources; ++i)
    for (std::size_t j = i + 1; j < n_sources; ++j)
      for (std::size_t f = 0; f < n_functions; ++f)
        out.push_back({i, j, f, game_outcome(bt.means[i][f][gi], bt.means[j][f][gi], p.epsilon, p.draw_rule)});
  return out;
}

void play_period(std::vector<RatingState>& st, const std::vector<PeriodGame>& games, const RatingParams& p) {
  for (const auto& gm : games) {
    const auto [ea, eb] = elo_update(st[gm.a].elo, st[gm.b].elo, gm.outcome, p.elo_k);
    st[gm.a].elo = ea;
    st[gm.b].elo = eb;
  }
  std::vector<std::vector<GlickoGame>> per(st.size());
  for (const auto& gm : games) {
    const double s = score_a(gm.outcome);
    per[gm.a].push_back({st[gm.b].glicko_r, st[gm.b].glicko_rd, s});
    per[gm.b].push_back({st[gm.a].glicko_r, st[gm.a].glicko_rd, 1.0 - s});
  }
  std::vector<RatingState> next = st;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const RatingState u = glicko2_period_update(st[i], per[i], p.tau);
    next[i].glicko_r = u.glicko_r;
    next[i].glicko_rd = u.glicko_rd;
    next[i].glicko_sigma = u.glicko_sigma;
  }
  st = std::move(next);
}

}  // namespace

std::string_view outcome_name(GameOutcome o) {
  switch (o) {
    case GameOutcome::WinA: return "win_a";
    case GameOutcome::WinB: return "win_b";
    default: return "draw";
  }
}

std::vector<std::pair<double, double>> partition_games(const std::vector<double>& a, const std::vector<double>& b,
                                                       int block_size) {
  if (block_size < 1) throw ValidationError("block_size must be at least 1");
  const auto bs = static_cast<std::size_t>(block_size);
  if (a.size() != b.size()) throw ValidationError("players have different run counts");
  if (a.size() % bs != 0)
    throw ValidationError("run count " + std::to_string(a.size()) + " is not divisible by block_size " +
                          std::to_string(block_size));
  std::vector<std::pair<double, double>> out;
  for (std::size_t g = 0; g < a.size() / bs; ++g) {
    CompensatedSum sa, sb;
    for (std::size_t k = g * bs; k < (g + 1) * bs; ++k) {
      sa.add(a[k]);
      sb.add(b[k]);
    }
    out.emplace_back(sa.value() / static_cast<double>(bs), sb.value() / static_cast<double>(bs));
  }
  return out;
}

GameOutcome game_outcome(double mde_a, double mde_b, double eps, DrawRule rule) {
  const double threshold = rule == DrawRule::Absolute ? eps : eps * std::max(mde_a, mde_b);
  if (std::abs(mde_a - mde_b) <= threshold) return GameOutcome::Draw;
  return mde_a < mde_b ? GameOutcome::WinA : GameOutcome::WinB;
}

double score_a(GameOutcome o) {
  switch (o) {
    case GameOutcome::WinA: return 1.0;
    case GameOutcome::WinB: return 0.0;
    default: return 0.5;
  }
}

std::pair<double, double> elo_update(double rating_a, double rating_b, GameOutcome outcome, double k) {
  const double ea = 1.0 / (1.0 + std::pow(10.0, (rating_b - rating_a) / 400.0));
  const double eb = 1.0 / (1.0 + std::pow(10.0, (rating_a - rating_b) / 400.0));
  const double sa = score_a(outcome);
  return {rating_a + k * (sa - ea), rating_b + k * ((1.0 - sa) - eb)};
}

RatingState glicko2_period_update(const RatingState& player, const std::vector<GlickoGame>& games, double tau) {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  RatingState out = player;
  const double mu = (player.glicko_r - 1500.0) / kGlickoScale;
  const double phi = player.glicko_rd / kGlickoScale;
  if (games.empty()) {
    const double phi_star = std::sqrt(phi * phi + player.glicko_sigma * player.glicko_sigma);
    out.glicko_rd = std::min(kMaxRd, phi_star * kGlickoScale);
    return out;
  }
  // Canonical order makes the floating-point sums independent of game order.
  std::vector<GlickoGame> sorted = games;
  std::sort(sorted.begin(), sorted.end(), [](const GlickoGame& x, const GlickoGame& y) {
    return std::tie(x.opponent_r, x.opponent_rd, x.score) < std::tie(y.opponent_r, y.opponent_rd, y.score);
  });
  double inv_v = 0.0, improve = 0.0;
  for (const auto& gm : sorted) {
    const double mu_j = (gm.opponent_r - 1500.0) / kGlickoScale;
    const double g = g_factor(gm.opponent_rd / kGlickoScale);
    const double e = 1.0 / (1.0 + std::exp(-g * (mu - mu_j)));
    inv_v += g * g * e * (1.0 - e);
    improve += g * (gm.score - e);
  }
  const double v = 1.0 / inv_v;
  const double delta = v * improve;
  const double sigma = new_volatility(player.glicko_sigma, phi, v, delta, tau);
  const double phi_star = std::sqrt(phi * phi + sigma * sigma);
  const double phi_new = 1.0 / std::sqrt(1.0 / (phi_star * phi_star) + 1.0 / v);
  const double mu_new = mu + phi_new * phi_new * improve;
  out.glicko_r = kGlickoScale * mu_new + 1500.0;
  out.glicko_rd = std::min(kMaxRd, kGlickoScale * phi_new);
  out.glicko_sigma = sigma;
  return out;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) throw ValidationError("percentile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Tournament run_tournament(const ErrorTable& table, const std::vector<std::string>& sources,
                          const std::vector<int>& functions, const RatingParams& params) {
  if (sources.size() < 2) throw ValidationError("a tournament needs at least two sources");
  const BlockTable bt = block_means(table, sources, functions, params.block_size);
  const std::size_t n = sources.size();
  RatingState init;
  init.elo = params.elo_initial;

  Tournament t;
  t.periods = bt.blocks;
  std::vector<RatingState> st(n, init);
  std::vector<std::vector<double>> block_elo(n), block_glicko(n);
  for (int g = 0; g < bt.blocks; ++g) {
    const auto games = period_games(bt, n, functions.size(), g, params);
    for (const auto& gm : games)
      t.games.push_back({sources[gm.a], sources[gm.b], functions[gm.f], g, gm.outcome});
    play_period(st, games, params);

    std::vector<RatingState> solo(n, init);
    play_period(solo, games, params);
    for (std::size_t i = 0; i < n; ++i) {
      block_elo[i].push_back(solo[i].elo);
      block_glicko[i].push_back(solo[i].glicko_r);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    RatingSummary r;
    r.source_id = sources[i];
    r.final = st[i];
    r.elo_ci_lo = percentile(block_elo[i], 0.025);
    r.elo_ci_hi = percentile(block_elo[i], 0.975);
    r.glicko_ci_lo = percentile(block_glicko[i], 0.025);
    r.glicko_ci_hi = percentile(block_glicko[i], 0.975);
    t.ratings.push_back(std::move(r));
  }
  return t;
}

}  // namespace chaospso
