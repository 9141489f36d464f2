#pragma once

#include <array>
#include <string_view>

namespace mmo {

using Vec3 = std::array<double, 3>;

enum class Timescale { fast, slow };

std::string_view to_string(Timescale ts);
Timescale parse_timescale(std::string_view text);

/// Dimensionless parameters of the three-species prey/two-predator model.
///
/// The prey x is fast; the predators y, z evolve on the slow scale set by
/// `zeta`. `h` is the intraspecific competition of z and is the main
/// bifurcation parameter.
struct ModelParams {
  double zeta = 0.01;
  double beta1 = 0.5;
  double beta2 = 0.25;
  double c = 0.38;
  double d = 0.17;
  double h = 2.4;

  /// Throws InvalidArgument unless every invariant holds: zeta, beta1,
  /// beta2, c, d in (0,1), h > 0, beta1 != beta2.
  void validate() const;

  ModelParams with_h(double new_h) const {
    ModelParams p = *this;
    p.h = new_h;
    return p;
  }
};

/// The reference parameter set (zeta=0.01, beta1=0.5, beta2=0.25, c=0.38,
/// d=0.17) at the given h.
ModelParams reference_parameters(double h);

/// Demographic noise intensities sigma_i = 1/sqrt(omega_i).
struct NoiseParams {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;

  void validate() const;

  Vec3 sigmas() const { return {sigma1, sigma2, sigma3}; }

  /// Implied population scale omega_i = 1/sigma_i^2 (infinite for sigma_i = 0).
  Vec3 population_scales() const;

  static NoiseParams from_population_scales(const Vec3& omega);
};

/// Normalised population densities, all components non-negative.
struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 as_vec() const { return {x, y, z}; }
  static State from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

  bool in_first_quadrant() const { return x >= 0.0 && y >= 0.0 && z >= 0.0; }
  /// Throws InvalidArgument when a component is negative or not finite.
  void validate() const;

  friend bool operator==(const State&, const State&) = default;
};

}  // namespace mmo
