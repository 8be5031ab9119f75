#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaospso/stats_compare.hpp"

namespace chaospso {

enum class GameOutcome { WinA, Draw, WinB };
enum class DrawRule { Absolute, Relative };

std::string_view outcome_name(GameOutcome o);  // "win_a", "draw", "win_b"

struct GameRecord {
  std::string player_a;
  std::string player_b;
  int function_id = 0;
  int block_index = 0;
  GameOutcome outcome = GameOutcome::Draw;
};

struct RatingState {
  double elo = 2000.0;
  double glicko_r = 1500.0;
  double glicko_rd = 350.0;
  double glicko_sigma = 0.06;
};

struct RatingParams {
  double elo_initial = 2000.0;
  double elo_k = 8.0;
  double epsilon = 0.01;
  DrawRule draw_rule = DrawRule::Absolute;
  double tau = 0.5;
  int block_size = 50;
};

/// Block means of paired runs: element g is (mean of a's block g, mean of b's
/// block g). Throws ValidationError unless both sizes are equal multiples of
/// block_size.
std::vector<std::pair<double, double>> partition_games(const std::vector<double>& a, const std::vector<double>& b,
                                                       int block_size);

/// Draw when |a - b| <= eps (Absolute) or <= eps * max(a, b) (Relative);
/// otherwise the lower error wins.
GameOutcome game_outcome(double mde_a, double mde_b, double eps = 0.01, DrawRule rule = DrawRule::Absolute);

double score_a(GameOutcome o);

std::pair<double, double> elo_update(double rating_a, double rating_b, GameOutcome outcome, double k = 8.0);

struct GlickoGame {
  double opponent_r;
  double opponent_rd;
  double score;
};

/// One Glicko-2 rating period. With no games only the deviation grows (capped
/// at 350). Throws RuntimeFailure if the volatility iteration does not
/// converge in 100 steps.
RatingState glicko2_period_update(const RatingState& player, const std::vector<GlickoGame>& games,
                                  double tau = 0.5);

struct RatingSummary {
  std::string source_id;
  RatingState final;
  double elo_ci_lo = 0.0;
  double elo_ci_hi = 0.0;
  double glicko_ci_lo = 0.0;
  double glicko_ci_hi = 0.0;
};

struct Tournament {
  std::vector<GameRecord> games;  // period-major, then pair, then function
  std::vector<RatingSummary> ratings;
  int periods = 0;
};

/// One rating period per block index: every unordered source pair plays one
/// game per function. Elo updates are applied game by game; Glicko-2 updates
/// once per period from the period's starting ratings. Intervals are the
/// 2.5 and 97.5 percentiles of the final ratings of per-block tournaments.
Tournament run_tournament(const ErrorTable& table, const std::vector<std::string>& sources,
                          const std::vector<int>& functions, const RatingParams& params = {});

/// Linear-interpolation percentile, q in [0, 1].
double percentile(std::vector<double> v, double q);

}  // namespace chaospso
