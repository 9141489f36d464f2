#include "mmo/types.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mmo/error.hpp"

namespace mmo {

std::string_view to_string(Timescale ts) { return ts == Timescale::fast ? "fast" : "slow"; }

Timescale parse_timescale(std::string_view text) {
  if (text == "fast") return Timescale::fast;
  if (text == "slow") return Timescale::slow;
  throw InvalidArgument("unknown timescale '" + std::string(text) + "'");
}

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in (0,1), got " + std::to_string(v));
  }
}

}  // namespace

void ModelParams::validate() const {
  require_open_unit(zeta, "zeta");
  require_open_unit(beta1, "beta1");
  require_open_unit(beta2, "beta2");
  require_open_unit(c, "c");
  require_open_unit(d, "d");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("h must be positive");
  if (beta1 == beta2) throw InvalidArgument("beta1 and beta2 must differ");
}

ModelParams reference_parameters(double h) {
  ModelParams p;
  p.zeta = 0.01;
  p.beta1 = 0.5;
  p.beta2 = 0.25;
  p.c = 0.38;
  p.d = 0.17;
  p.h = h;
  return p;
}

void NoiseParams::validate() const {
  for (double s : sigmas()) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("noise intensities must be >= 0");
  }
}

Vec3 NoiseParams::population_scales() const {
  Vec3 out{};
  const Vec3 s = sigmas();
  for (int i = 0; i < 3; ++i) {
    out[i] = s[i] > 0.0 ? 1.0 / (s[i] * s[i]) : std::numeric_limits<double>::infinity();
  }
  return out;
}

NoiseParams NoiseParams::from_population_scales(const Vec3& omega) {
  for (double w : omega) {
    if (!(w > 0.0)) throw InvalidArgument("population scales must be positive");
  }
  return {1.0 / std::sqrt(omega[0]), 1.0 / std::sqrt(omega[1]), 1.0 / std::sqrt(omega[2])};
}

void State::validate() const {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw InvalidArgument("state has a non-finite component");
  }
  if (!in_first_quadrant()) {
    throw InvalidArgument("state (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                          std::to_string(z) + ") leaves the first quadrant");
  }
}

}  // namespace mmo
