#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "mmo/slowfast.hpp"
#include "mmo/types.hpp"

namespace mmo::normalform {

/// Constants of the normal-form reduction at a folded node p* = (x*, y*, z*).
struct NormalFormConstants {
  ModelParams params;
  State point;
  double sigma3 = 0.0;

  double A1 = 0, A2 = 0, A3 = 0, A4 = 0;
  double B0 = 0, B1 = 0, B2 = 0;
  double C = 0, C0 = 0, C1 = 0;
  double D0 = 0, D1 = 0, D2 = 0, D3 = 0, D4 = 0;
  double E0 = 0;
  double kappa = 0;
  double c11 = 0, c22 = 0;
  double M = 0;
  /// Linear part (constant, X, Z) of the rectified z-drift.
  std::array<double, 3> L{};
  /// Factor k of the last step, Y -> (1 + k Z) Y: k = c11 b1 / (x* (b1 + x*)).
  double k4 = 0;
};

/// Evaluates every constant from its closed form at fs.point.
/// Throws InvalidArgument when b1 == b2 or when the point is not on the fold
/// curve (|u| or |u_x| above 1e-8).
NormalFormConstants compute_constants(const ModelParams& p, const slowfast::FoldedSingularity& fs,
                                      const NoiseParams& n);

/// Coordinate stages of the reduction.
///   translated: (X, Y, Z) = (x - x*, y - y*, z - z*)
///   rectified:  X~ = X - c11 Z,  Y~ = Y - c22 Z,  Z~ = Z
///   stretched:  X^ = kappa X~,  Y^ = -(x* kappa/(b1+x*)) Y~ - zeta c11 kappa E0,  Z^ = Z~
///   normal:     Y_ = (1 + k4 Z^) Y^
enum class Stage { translated, rectified, stretched, normal };

enum class Direction { forward, inverse };

/// Original (x, y, z) -> coordinates at `upto`.
Vec3 forward(const NormalFormConstants& nfc, const Vec3& original, Stage upto = Stage::normal);

/// Coordinates at `from` -> original (x, y, z). Throws InvalidArgument when the
/// step-4 factor 1 + k4 Z is zero.
Vec3 inverse(const NormalFormConstants& nfc, const Vec3& coords, Stage from = Stage::normal);

Vec3 transform_state(const NormalFormConstants& nfc, const Vec3& v, Direction dir);

/// Fast-scale Ito drift of the normal-form coordinates at a normal-form point.
/// With include_ito the step-4 cross-variation term A4 G3^2 is added to the
/// second component.
Vec3 transformed_drift(const NormalFormConstants& nfc, const Vec3& nf_point,
                       bool include_ito = true);

/// G1^2 of the original state mapped back from a normal-form point.
double transformed_g1_squared(const NormalFormConstants& nfc, const Vec3& nf_point);

struct Coefficient {
  double value;
  double expected;
  double deviation() const { return value - expected; }
};

struct VerificationReport {
  double delta = 0.0;
  double tolerance = 0.0;

  /// First component: coefficients of Y, X^2, XY against (1, 1, C).
  Coefficient y, xx, xy;
  /// Z^2 coefficient of the first component (not part of the stated form).
  double zz = 0.0;
  /// Largest |g1 - quadratic Taylor polynomial| on the 26 directions of
  /// the unit cube scaled to radius delta.
  double cubic_remainder = 0.0;

  /// Second component divided by zeta: linear coefficients against
  /// (A1, C1 + b1 c11 B0/(x*(b1+x*)), A3); `a2_printed` compares with A2.
  Coefficient f2_x, f2_y, f2_z;
  Coefficient a2_printed;

  /// Third component divided by zeta: constant, X, Z against (B0, B1/kappa, B2).
  Coefficient f3_const, f3_x, f3_z;

  /// G1^2 at the image of p* against 2x*, and its linear coefficients against
  /// (2/kappa, -1/kappa, 2 c11).
  Coefficient g1_constant, g1_x, g1_y, g1_z;

  /// Largest forward/inverse round-trip error over random states near p*.
  double round_trip_error = 0.0;

  bool leading_coefficients_pass() const;
};

/// Finite-difference certification of the reduction at the folded node with
/// step `delta` (0 < delta <= 0.05).
VerificationReport verify_normal_form(const NormalFormConstants& nfc, double delta);

/// |g1 - T2| maximum at radius r, with T2 the quadratic Taylor polynomial
/// extracted with step r.
double cubic_remainder(const NormalFormConstants& nfc, double r);

struct NoisePrefactors {
  /// sigma_i F_i(p*) of the slow-scale system.
  Vec3 sigma_F;
  /// sigma_i G_i(p*).
  Vec3 sigma_G;
};

NoisePrefactors noise_prefactors(const ModelParams& p, const NoiseParams& n,
                                 const slowfast::FoldedSingularity& fs);

struct PrefactorRow {
  double h;
  double mu;
  NoisePrefactors values;
};

std::vector<PrefactorRow> noise_prefactor_sweep(const ModelParams& base, const NoiseParams& n,
                                                const slowfast::HRange& range);

struct ChiRow {
  double h;
  double mu;
  std::vector<double> chi;
};

/// chi_k(mu(h)) for k = 0..k_max along the tracked folded node. A degenerate
/// node (mu = 0) gives chi = 0. Throws InvalidArgument if the tracked point is
/// a saddle or focus.
std::vector<ChiRow> chi_vs_h(const ModelParams& base, const slowfast::HRange& range, int k_max);

}  // namespace mmo::normalform
