// Estimates raw orbit bounds for maps whose rescale interval is empirical.
// Prints one line per family: name, min, max (shortest round-trip form).

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "chaospso/sequence_sources.hpp"

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace chaospso;
  CLI::App app{"Estimate empirical rescale bounds of chaotic maps"};
  long iterations = 1000000;
  int seeds = 100;
  std::uint64_t master = 20240101;
  std::vector<std::string> families{"weierstrass", "cubic", "bellows"};
  app.add_option("--iterations", iterations, "iterations per seed")->check(CLI::PositiveNumber);
  app.add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);
  app.add_option("--master-seed", master, "seed the per-orbit seeds derive from");
  app.add_option("--family", families, "map ids to calibrate");
  CLI11_PARSE(app, argc, argv);

  for (const auto& id : families) {
    const SourceSpec spec = source_spec(id);
    const auto* map = std::get_if<MapSpec>(&spec.kind);
    if (!map) {
      std::fprintf(stderr, "%s is not a map\n", id.c_str());
      return 1;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int s = 0; s < seeds; ++s) {
      MapOrbit orbit(*map, combine_seed(master, static_cast<std::uint64_t>(s)));
      for (long i = 0; i < iterations; ++i) {
        const double z = orbit.advance();
        lo = std::min(lo, z);
        hi = std::max(hi, z);
      }
    }
    std::printf("%s %s %s\n", id.c_str(), shortest(lo).c_str(), shortest(hi).c_str());
    std::fflush(stdout);
  }
  return 0;
}
