#include "chaospso/sequence_sources.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "chaospso/errors.hpp"
#include "weierstrass_kernel.hpp"

namespace chaospso {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// Empirical rescale bounds (Weierstrass, Cubic, Bellows) come from
// tools/calibrate_rescale: min/max over 100 seeds x 10^6 iterations
// (master seed 20240101).
MapSpec MapSpec::defaults(MapFamily family) {
  MapSpec s;
  s.family = family;
  switch (family) {
    case MapFamily::Logistic:
      s.r = 4.0;
      s.rescale = {0.0, 1.0};
      s.seed_interval = {0.0, 1.0};
      break;
    case MapFamily::Chebyshev:
      s.a = 6.0;
      s.rescale = {-1.0, 1.0};
      s.seed_interval = {-1.0, 1.0};
      break;
    case MapFamily::Weierstrass:
      s.a = 0.999;
      s.b = 101.0;
      s.terms = 100;
      s.rescale = {-38.258940405684754, 37.68369595398378};
      s.seed_interval = {-1.0, 1.0};
      break;
    case MapFamily::Tent:
      s.r = 2.0;
      s.rescale = {0.0, 1.0};
      s.seed_interval = {0.0, 1.0};
      break;
    case MapFamily::Cubic:
      s.r = 2.62;
      s.rescale = {-1.0084384701845464, 1.0084384701845466};
      s.seed_interval = {-1.0, 1.0};
      break;
    case MapFamily::Bellows:
      s.r = 2.0;
      s.rescale = {0.48216930823458826, 1.2745408188862168};
      s.seed_interval = {0.0, 1.0};
      break;
  }
  return s;
}

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
  return {DistributionFamily::Beta, alpha, beta};
}
DistributionSpec DistributionSpec::normal(double mu, double sigma) {
  return {DistributionFamily::Normal, mu, sigma};
}
DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  return {DistributionFamily::Uniform, lo, hi};
}

void validate(const MapSpec& s) {
  switch (s.family) {
    case MapFamily::Logistic:
    case MapFamily::Tent:
    case MapFamily::Cubic:
    case MapFamily::Bellows:
      require(finite(s.r) && s.r > 0.0, "r must be positive");
      break;
    case MapFamily::Chebyshev:
      require(finite(s.a) && s.a > 0.0, "a must be positive");
      break;
    case MapFamily::Weierstrass:
      require(finite(s.a) && s.a > 0.0 && s.a < 1.0, "a must lie in (0, 1)");
      require(finite(s.b) && s.b > 1.0, "b must be greater than 1");
      require(s.terms >= 0 && s.terms <= 100000, "N must be a non-negative term count");
      break;
  }
  require(finite(s.rescale.lo) && finite(s.rescale.hi) && s.rescale.lo < s.rescale.hi,
          "rescale must satisfy lo < hi");
  require(finite(s.seed_interval.lo) && finite(s.seed_interval.hi) &&
              s.seed_interval.lo < s.seed_interval.hi,
          "seed interval must satisfy lo < hi");
}

void validate(const DistributionSpec& s) {
  switch (s.family) {
    case DistributionFamily::Beta:
      require(finite(s.p1) && s.p1 > 0.0, "alpha must be positive");
      require(finite(s.p2) && s.p2 > 0.0, "beta must be positive");
      break;
    case DistributionFamily::Normal:
      require(finite(s.p1), "mu must be finite");
      require(finite(s.p2) && s.p2 > 0.0, "sigma must be positive");
      break;
    case DistributionFamily::Uniform:
      require(finite(s.p1) && finite(s.p2) && s.p1 < s.p2, "uniform bounds must satisfy lo < hi");
      require(s.p1 >= 0.0 && s.p2 <= 1.0, "uniform bounds must lie in [0, 1]");
      break;
  }
}

// ---------------------------------------------------------------------------
// MapKernel

struct MapKernel::WeierstrassTables {
  std::vector<double> phase;      // fl(b^i * pi), zero padded
  std::vector<double> amplitude;  // a^i, zero padded
  std::vector<double> slope;      // a^i * fl(b^i * pi), zero padded
};

MapKernel::MapKernel(const MapSpec& spec) : spec_(spec) {
  validate(spec_);
  if (spec_.family != MapFamily::Weierstrass) return;
  auto tables = std::make_shared<WeierstrassTables>();
  const std::size_t n = static_cast<std::size_t>(spec_.terms) + 1;
  const std::size_t padded = (n + detail::kTermLanes - 1) / detail::kTermLanes * detail::kTermLanes;
  tables->phase.assign(padded, 0.0);
  tables->amplitude.assign(padded, 0.0);
  tables->slope.assign(padded, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = std::pow(spec_.b, static_cast<double>(i));
    const double ai = std::pow(spec_.a, static_cast<double>(i));
    tables->phase[i] = bi * kPi;
    tables->amplitude[i] = ai;
    tables->slope[i] = ai * tables->phase[i];
  }
  weierstrass_ = std::move(tables);
}

double MapKernel::step(double z) const {
  const double r = spec_.r;
  switch (spec_.family) {
    case MapFamily::Logistic:
      return r * z * (1.0 - z);
    case MapFamily::Chebyshev:
      return std::cos(spec_.a * std::acos(z));
    case MapFamily::Weierstrass: {
      const auto& t = *weierstrass_;
      thread_local std::vector<double> c;
      c.resize(t.phase.size());
      detail::phase_cos(t.phase, z, c);
      return detail::lane_dot(t.amplitude, c);
    }
    case MapFamily::Tent:
      return r * std::min(z, 1.0 - z);
    case MapFamily::Cubic:
      return r * z * (1.0 - z * z);
    case MapFamily::Bellows: {
      const double z2 = z * z;
      return r * z / (1.0 + z2 * z2 * z2);
    }
  }
  return z;
}

MapDerivative MapKernel::derivative(double z) const {
  const double r = spec_.r;
  switch (spec_.family) {
    case MapFamily::Logistic:
      return {r * (1.0 - 2.0 * z), false};
    case MapFamily::Chebyshev: {
      if (std::abs(z) >= 1.0) return {spec_.a * spec_.a * (z > 0 ? 1.0 : -1.0), true};
      const double theta = std::acos(z);
      return {spec_.a * std::sin(spec_.a * theta) / std::sqrt(1.0 - z * z), false};
    }
    case MapFamily::Weierstrass: {
      const auto& t = *weierstrass_;
      std::vector<double> c(t.phase.size()), s(t.phase.size());
      detail::phase_cos_sin(t.phase, z, c, s);
      return {-detail::lane_dot(t.slope, s), false};
    }
    case MapFamily::Tent:
      if (z == 0.5) return {r, true};
      return {z < 0.5 ? r : -r, false};
    case MapFamily::Cubic:
      return {r * (1.0 - 3.0 * z * z), false};
    case MapFamily::Bellows: {
      const double z2 = z * z;
      const double z6 = z2 * z2 * z2;
      const double d = 1.0 + z6;
      return {r * (1.0 - 5.0 * z6) / (d * d), false};
    }
  }
  return {};
}

double map_step(const MapSpec& spec, double z) { return MapKernel(spec).step(z); }

MapDerivative map_derivative(const MapSpec& spec, double z) {
  return MapKernel(spec).derivative(z);
}

// ---------------------------------------------------------------------------
// MapOrbit

MapOrbit::MapOrbit(const MapSpec& spec, std::uint64_t seed) : kernel_(spec), entropy_(seed) {
  z_ = draw_initial_state();
  for (int i = 0; i < kBurnIn; ++i) advance();
}

// Rejects numerical fixed points: |f(z) - z| tiny relative to z.
double MapOrbit::draw_initial_state() {
  const Interval& iv = kernel_.spec().seed_interval;
  for (;;) {
    const double z = iv.lo + (iv.hi - iv.lo) * entropy_.next_open_unit();
    if (!(z > iv.lo && z < iv.hi)) continue;
    const double fz = kernel_.step(z);
    if (!std::isfinite(fz)) continue;
    if (std::abs(fz - z) <= 1e-12 * std::max(1.0, std::abs(z))) continue;
    return z;
  }
}

double MapOrbit::advance() {
  const MapSpec& s = kernel_.spec();
  double z = kernel_.step(z_);
  switch (s.family) {
    case MapFamily::Logistic:
      // 1 -> 0 -> 0 and the interior fixed point 1 - 1/r both absorb.
      if (z == 0.0 || z == 1.0 - 1.0 / s.r) z = draw_initial_state();
      break;
    case MapFamily::Chebyshev:
      if (z == 1.0) z = draw_initial_state();
      break;
    case MapFamily::Cubic:
    case MapFamily::Bellows:
      if (z == 0.0) z = draw_initial_state();
      break;
    case MapFamily::Tent:
      if (s.tent_dither) {
        // State lives on the 2^-53 grid; the fresh low bit is the next binary
        // digit of the (infinite-precision) initial point.
        const double bit = static_cast<double>(entropy_.next() >> 63);
        z = std::min(std::floor(z * 0x1.0p53) + bit, 0x1.0p53) * 0x1.0p-53;
      }
      if (z == 0.0) z = std::nextafter(0.0, 0.5);
      if (z == 1.0) z = std::nextafter(1.0, 0.5);
      break;
    case MapFamily::Weierstrass:
      break;
  }
  if (!std::isfinite(z)) throw RuntimeFailure("map orbit became non-finite");
  z_ = z;
  return z_;
}

double MapOrbit::rescaled(double z) const {
  const Interval& iv = kernel_.spec().rescale;
  const double v = (z - iv.lo) / (iv.hi - iv.lo);
  return std::clamp(v, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Distributions

double SequenceSource::DistributionState::unit_open() {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller; the second variate of each pair is cached.
double SequenceSource::DistributionState::standard_normal() {
  if (spare_normal) {
    const double v = *spare_normal;
    spare_normal.reset();
    return v;
  }
  const double u1 = unit_open();
  const double u2 = unit_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  spare_normal = radius * std::sin(angle);
  return radius * std::cos(angle);
}

// Marsaglia & Tsang (2000), with the u^(1/shape) boost for shape < 1.
double SequenceSource::DistributionState::gamma(double shape) {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(unit_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = unit_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double SequenceSource::DistributionState::draw_raw() {
  const double p1 = spec.p1;
  const double p2 = spec.p2;
  switch (method) {
    case Method::Uniform:
      return p1 + (p2 - p1) * unit_open();
    case Method::Identity:
      return unit_open();
    case Method::PowerLower:  // Beta(alpha, 1)
      return std::pow(unit_open(), 1.0 / p1);
    case Method::PowerUpper:  // Beta(1, beta)
      return 1.0 - std::pow(1.0 - unit_open(), 1.0 / p2);
    case Method::Arcsine: {  // Beta(1/2, 1/2)
      const double s = std::sin(0.5 * kPi * unit_open());
      return s * s;
    }
    case Method::GammaRatio: {
      const double x = gamma(p1);
      const double y = gamma(p2);
      return x / (x + y);
    }
    case Method::InverseCdf:
      return boost::math::ibeta_inv(p1, p2, unit_open());
    case Method::Normal:
      return p1 + p2 * standard_normal();
  }
  return 0.0;
}

double SequenceSource::DistributionState::next() {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double v = draw_raw();
    if (v >= 0.0 && v <= 1.0) return v;
    if (spec.clamp) return std::clamp(v, 0.0, 1.0);
  }
  throw RuntimeFailure("distribution has (almost) no mass in [0, 1]; cannot resample");
}

// ---------------------------------------------------------------------------
// SequenceSource

SequenceSource::SequenceSource(SourceSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed), state_(std::in_place_type<DistributionState>) {
  if (const auto* m = std::get_if<MapSpec>(&spec_.kind)) {
    // Salted so map and distribution sources never share a raw stream.
    state_.emplace<MapOrbit>(*m, mix64(seed ^ 0x6d61702d6f726269ULL));
    return;
  }
  const auto& d = std::get<DistributionSpec>(spec_.kind);
  validate(d);
  auto& st = std::get<DistributionState>(state_);
  st.spec = d;
  st.engine.seed(mix64(seed));
  using M = DistributionState::Method;
  switch (d.family) {
    case DistributionFamily::Uniform:
      st.method = M::Uniform;
      break;
    case DistributionFamily::Normal:
      st.method = M::Normal;
      break;
    case DistributionFamily::Beta:
      if (d.beta_sampler == BetaSampler::InverseCdf) st.method = M::InverseCdf;
      else if (d.p1 == 1.0 && d.p2 == 1.0) st.method = M::Identity;
      else if (d.p2 == 1.0) st.method = M::PowerLower;
      else if (d.p1 == 1.0) st.method = M::PowerUpper;
      else if (d.p1 == 0.5 && d.p2 == 0.5) st.method = M::Arcsine;
      else st.method = M::GammaRatio;
      break;
  }
}

double SequenceSource::next_value() {
  if (auto* orbit = std::get_if<MapOrbit>(&state_)) return orbit->rescaled(orbit->advance());
  return std::get<DistributionState>(state_).next();
}

SequenceSource make_source(const SourceSpec& spec, std::uint64_t seed) {
  return SequenceSource(spec, seed);
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct Entry {
  const char* id;
  int group;
};

constexpr std::array<Entry, 12> kEntries{{
    {"logistic", 1},
    {"chebyshev", 1},
    {"weierstrass", 2},
    {"tent", 3},
    {"cubic", 4},
    {"bellows", 4},
    {"beta_0.5_0.5", 1},
    {"normal_0.5_0.1", 2},
    {"beta_13_13", 2},
    {"uniform_0_1", 3},
    {"beta_1_1", 3},
    {"beta_1_5", 4},
}};

const Entry* find_entry(std::string_view id) {
  for (const auto& e : kEntries)
    if (id == e.id) return &e;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& source_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : kEntries) v.emplace_back(e.id);
    return v;
  }();
  return ids;
}

bool is_known_source(std::string_view id) { return find_entry(id) != nullptr; }

int density_group(std::string_view id) {
  const Entry* e = find_entry(id);
  if (!e) throw ValidationError("unknown source id: " + std::string(id));
  return e->group;
}

SourceSpec source_spec(std::string_view id) {
  if (!is_known_source(id)) throw ValidationError("unknown source id: " + std::string(id));
  SourceSpec s{std::string(id), MapSpec{}};
  if (id == "logistic") s.kind = MapSpec::defaults(MapFamily::Logistic);
  else if (id == "chebyshev") s.kind = MapSpec::defaults(MapFamily::Chebyshev);
  else if (id == "weierstrass") s.kind = MapSpec::defaults(MapFamily::Weierstrass);
  else if (id == "tent") s.kind = MapSpec::defaults(MapFamily::Tent);
  else if (id == "cubic") s.kind = MapSpec::defaults(MapFamily::Cubic);
  else if (id == "bellows") s.kind = MapSpec::defaults(MapFamily::Bellows);
  else if (id == "beta_0.5_0.5") s.kind = DistributionSpec::beta(0.5, 0.5);
  else if (id == "normal_0.5_0.1") s.kind = DistributionSpec::normal(0.5, 0.1);
  else if (id == "beta_13_13") s.kind = DistributionSpec::beta(13.0, 13.0);
  else if (id == "uniform_0_1") s.kind = DistributionSpec::uniform(0.0, 1.0);
  else if (id == "beta_1_1") s.kind = DistributionSpec::beta(1.0, 1.0);
  else if (id == "beta_1_5") s.kind = DistributionSpec::beta(1.0, 5.0);
  return s;
}

std::string_view family_name(MapFamily f) {
  switch (f) {
    case MapFamily::Logistic: return "Logistic";
    case MapFamily::Chebyshev: return "Chebyshev";
    case MapFamily::Weierstrass: return "Weierstrass";
    case MapFamily::Tent: return "Tent";
    case MapFamily::Cubic: return "Cubic";
    case MapFamily::Bellows: return "Bellows";
  }
  return "?";
}

std::string_view family_name(DistributionFamily f) {
  switch (f) {
    case DistributionFamily::Beta: return "Beta";
    case DistributionFamily::Normal: return "Normal";
    case DistributionFamily::Uniform: return "Uniform";
  }
  return "?";
}

}  // namespace chaospso
