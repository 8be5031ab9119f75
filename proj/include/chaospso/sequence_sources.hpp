#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaospso/seeding.hpp"

namespace chaospso {

enum class MapFamily { Logistic, Chebyshev, Weierstrass, Tent, Cubic, Bellows };
enum class DistributionFamily { Beta, Normal, Uniform };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A one-dimensional chaotic map with its output rescaling.
struct MapSpec {
  MapFamily family = MapFamily::Logistic;
  double r = 0.0;  // Logistic, Tent, Cubic, Bellows
  double a = 0.0;  // Chebyshev order; Weierstrass amplitude ratio
  double b = 0.0;  // Weierstrass frequency ratio
  int terms = 0;   // Weierstrass: sum runs over i = 0..terms
  Interval rescale;        // raw orbit range mapped affinely onto [0,1]
  Interval seed_interval;  // open interval the initial state is drawn from
  // Tent only: keep the state on the 2^-53 grid and shift in one seeded random
  // bit per step. With r=2 each step consumes one binary digit, so a plain
  // double orbit reaches 0 within ~60 steps. Off: only nudge exact 0/1 by one ulp.
  bool tent_dither = true;

  /// Chaotic parameter setting and frozen rescale bounds for a family.
  static MapSpec defaults(MapFamily family);
};

/// How Beta variates are produced. `Auto` uses the closed-form inverse CDF
/// when one exists and a gamma ratio otherwise; `InverseCdf` always inverts
/// the regularized incomplete beta function numerically (slow).
enum class BetaSampler { Auto, InverseCdf };

/// A PRNG-backed distribution on [0,1].
struct DistributionSpec {
  DistributionFamily family = DistributionFamily::Uniform;
  double p1 = 0.0;  // alpha | mu | lo
  double p2 = 1.0;  // beta | sigma | hi
  bool clamp = true;  // out-of-range draws: clamp (true) or redraw (false)
  BetaSampler beta_sampler = BetaSampler::Auto;

  static DistributionSpec beta(double alpha, double beta);
  static DistributionSpec normal(double mu, double sigma);
  static DistributionSpec uniform(double lo, double hi);
};

using SourceKind = std::variant<MapSpec, DistributionSpec>;

struct SourceSpec {
  std::string id;
  SourceKind kind;

  bool is_map() const { return std::holds_alternative<MapSpec>(kind); }
};

void validate(const MapSpec& spec);
void validate(const DistributionSpec& spec);

/// Derivative of a map at a point. `flagged` marks a non-differentiable point,
/// in which case `value` is the left derivative.
struct MapDerivative {
  double value = 0.0;
  bool flagged = false;
};

/// Evaluates one map's recurrence and derivative. Holds precomputed term
/// tables for the Weierstrass map; cheap to copy (tables are shared).
class MapKernel {
 public:
  explicit MapKernel(const MapSpec& spec);

  const MapSpec& spec() const { return spec_; }
  double step(double z) const;
  MapDerivative derivative(double z) const;

 private:
  struct WeierstrassTables;
  MapSpec spec_;
  std::shared_ptr<const WeierstrassTables> weierstrass_;
};

/// Un-rescaled next state of the map.
double map_step(const MapSpec& spec, double z);
MapDerivative map_derivative(const MapSpec& spec, double z);

/// Raw orbit of a map: seeded initial state, 100-step burn-in, and guards
/// that keep finite-precision orbits from locking onto absorbing states.
class MapOrbit {
 public:
  static constexpr int kBurnIn = 100;

  MapOrbit(const MapSpec& spec, std::uint64_t seed);

  double state() const { return z_; }
  void set_state(double z) { z_ = z; }
  /// Advances one step and returns the new raw state.
  double advance();
  const MapKernel& kernel() const { return kernel_; }
  /// Affine rescale of a raw state onto [0,1], clamped.
  double rescaled(double z) const;

 private:
  double draw_initial_state();

  MapKernel kernel_;
  SplitMix64 entropy_;
  double z_ = 0.0;
};

/// A seeded, stateful producer of values in [0,1]. Single owner; movable.
class SequenceSource {
 public:
  SequenceSource(SourceSpec spec, std::uint64_t seed);

  const std::string& id() const { return spec_.id; }
  const SourceSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

  double next_value();

  /// Raw orbit for map sources; nullptr for distributions.
  MapOrbit* orbit() { return std::get_if<MapOrbit>(&state_); }

 private:
  struct DistributionState {
    enum class Method { Uniform, Identity, PowerLower, PowerUpper, Arcsine, GammaRatio, InverseCdf, Normal };

    DistributionSpec spec;
    Method method = Method::Uniform;
    std::mt19937_64 engine;
    std::optional<double> spare_normal;

    double unit_open();
    double standard_normal();
    double gamma(double shape);
    double draw_raw();
    double next();
  };

  SourceSpec spec_;
  std::uint64_t seed_;
  std::variant<MapOrbit, DistributionState> state_;
};

/// Constructs a source whose stream is a pure function of (spec, seed).
SequenceSource make_source(const SourceSpec& spec, std::uint64_t seed);

/// The twelve configured source ids, chaotic maps first.
const std::vector<std::string>& source_ids();

/// Looks up a configured source; throws ValidationError for unknown ids.
SourceSpec source_spec(std::string_view id);

bool is_known_source(std::string_view id);

/// Density-shape group of a configured source: 1 bathtub, 2 bell,
/// 3 constant, 4 heterogeneous.
int density_group(std::string_view id);

std::string_view family_name(MapFamily family);
std::string_view family_name(DistributionFamily family);

}  // namespace chaospso
