#pragma once

#include <cmath>

#include <Eigen/Core>

#include "mmo/types.hpp"

namespace mmo {

/// Nullcline factors of the vector field: x' = x u, y' = zeta y v, z' = zeta z w.
struct Nullclines {
  double u;
  double v;
  double w;
};

/// Per-species terms shared by the drift, the diffusion and the birth-death
/// event probabilities. For species i the microscopic chain moves +1 with
/// weight `gain`, -1 with weight `loss`, and 0 with weight 1.
struct SpeciesRates {
  double gain;
  double loss;

  double net() const { return gain - loss; }
  double normaliser() const { return 1.0 + gain + loss; }
  /// (gain + loss + 4 gain loss) / (1 + gain + loss)
  double variance() const { return (gain + loss + 4.0 * gain * loss) / normaliser(); }
};

namespace kernel {

// Unchecked evaluations for inner loops. Callers guarantee a first-quadrant
// state and validated parameters.

inline Nullclines nullclines(const ModelParams& p, double x, double y, double z) {
  const double r1 = 1.0 / (p.beta1 + x);
  const double r2 = 1.0 / (p.beta2 + x);
  return {1.0 - x - y * r1 - z * r2, x * r1 - p.c, x * r2 - p.d - p.h * z};
}

/// Gain/loss weights for x, y, z. With these, f_i = gain - loss and
/// F_i^2 = (gain + loss + 4 gain loss) / (1 + gain + loss).
inline std::array<SpeciesRates, 3> species_rates(const ModelParams& p, double x, double y,
                                                 double z) {
  const double xy = x * y / (p.beta1 + x);
  const double xz = x * z / (p.beta2 + x);
  return {SpeciesRates{x, x * x + xy + xz}, SpeciesRates{xy, p.c * y},
          SpeciesRates{xz, p.d * z + p.h * z * z}};
}

/// (f1, f2, f3): slow-scale drift is (f1/zeta, f2, f3), fast-scale (f1, zeta f2, zeta f3).
inline Vec3 reaction_terms(const ModelParams& p, double x, double y, double z) {
  const Nullclines n = nullclines(p, x, y, z);
  return {x * n.u, y * n.v, z * n.w};
}

/// (F1, F2, F3) without the sigma/timescale prefactors.
inline Vec3 noise_amplitudes(const ModelParams& p, double x, double y, double z) {
  const auto r = species_rates(p, x, y, z);
  return {std::sqrt(r[0].variance()), std::sqrt(r[1].variance()), std::sqrt(r[2].variance())};
}

struct DriftNoise {
  Vec3 f;
  Vec3 F;
};

/// reaction_terms and noise_amplitudes from one evaluation of the rates.
inline DriftNoise drift_and_noise(const ModelParams& p, double x, double y, double z) {
  const auto r = species_rates(p, x, y, z);
  return {{r[0].net(), r[1].net(), r[2].net()},
          {std::sqrt(r[0].variance()), std::sqrt(r[1].variance()), std::sqrt(r[2].variance())}};
}

}  // namespace kernel

/// Drift of the model on the requested timescale.
/// Slow: (f1/zeta, f2, f3). Fast: (f1, zeta f2, zeta f3).
Vec3 drift(const ModelParams& p, const State& s, Timescale ts);

/// Diffusion amplitudes multiplying dW1, dW2, dW3.
/// Slow: (sigma1 F1/sqrt(zeta), sigma2 F2, sigma3 F3).
/// Fast: (sigma1 F1, sqrt(zeta) sigma2 F2, sqrt(zeta) sigma3 F3).
Vec3 diffusion(const ModelParams& p, const NoiseParams& n, const State& s, Timescale ts);

/// Squared amplitudes F_i^2 (no prefactors).
Vec3 diffusion_squared(const ModelParams& p, const State& s);

/// Squared fold-local approximations G_i^2:
///   G1^2 = x + x^2 + xy/(b1+x) + xz/(b2+x)
///   G2^2 = xy/(b1+x) + c y
///   G3^2 = xz/(b2+x) + d z + h z^2
Vec3 diffusion_approx_G_squared(const ModelParams& p, const State& s);

/// Positive square roots of diffusion_approx_G_squared.
Vec3 diffusion_approx_G(const ModelParams& p, const State& s);

/// Interior equilibrium with v = w = u = 0. Throws InvalidArgument when it
/// leaves the open first quadrant for these parameters.
State coexistence_equilibrium(const ModelParams& p);

/// Analytic Jacobian of the fast-scale drift.
Eigen::Matrix3d jacobian(const ModelParams& p, const State& s);

}  // namespace mmo
