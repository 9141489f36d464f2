#include "mmo/model.hpp"

#include <cmath>

#include "mmo/error.hpp"

namespace mmo {

Vec3 drift(const ModelParams& p, const State& s, Timescale ts) {
  s.validate();
  const Vec3 f = kernel::reaction_terms(p, s.x, s.y, s.z);
  if (ts == Timescale::slow) return {f[0] / p.zeta, f[1], f[2]};
  return {f[0], p.zeta * f[1], p.zeta * f[2]};
}

Vec3 diffusion_squared(const ModelParams& p, const State& s) {
  s.validate();
  const auto r = kernel::species_rates(p, s.x, s.y, s.z);
  return {r[0].variance(), r[1].variance(), r[2].variance()};
}

Vec3 diffusion(const ModelParams& p, const NoiseParams& n, const State& s, Timescale ts) {
  s.validate();
  const Vec3 amp = kernel::noise_amplitudes(p, s.x, s.y, s.z);
  if (ts == Timescale::slow) {
    return {n.sigma1 * amp[0] / std::sqrt(p.zeta), n.sigma2 * amp[1], n.sigma3 * amp[2]};
  }
  const double rz = std::sqrt(p.zeta);
  return {n.sigma1 * amp[0], rz * n.sigma2 * amp[1], rz * n.sigma3 * amp[2]};
}

Vec3 diffusion_approx_G_squared(const ModelParams& p, const State& s) {
  s.validate();
  const double xy = s.x * s.y / (p.beta1 + s.x);
  const double xz = s.x * s.z / (p.beta2 + s.x);
  return {s.x + s.x * s.x + xy + xz, xy + p.c * s.y, xz + p.d * s.z + p.h * s.z * s.z};
}

Vec3 diffusion_approx_G(const ModelParams& p, const State& s) {
  const Vec3 g2 = diffusion_approx_G_squared(p, s);
  Vec3 out{};
  for (int i = 0; i < 3; ++i) {
    if (g2[i] < 0.0) throw Error("negative G radicand");
    out[i] = std::sqrt(g2[i]);
  }
  return out;
}

State coexistence_equilibrium(const ModelParams& p) {
  p.validate();
  const double xe = p.c * p.beta1 / (1.0 - p.c);
  if (!(xe > 0.0 && xe < 1.0)) {
    throw InvalidArgument("no interior equilibrium: c*beta1/(1-c) outside (0,1)");
  }
  const double ze = (xe / (p.beta2 + xe) - p.d) / p.h;
  const double ye = (p.beta1 + xe) * (1.0 - xe - ze / (p.beta2 + xe));
  if (ze < 0.0 || ye < 0.0) {
    throw InvalidArgument("no interior equilibrium for h = " + std::to_string(p.h));
  }
  return {xe, ye, ze};
}

Eigen::Matrix3d jacobian(const ModelParams& p, const State& s) {
  s.validate();
  const double x = s.x, y = s.y, z = s.z;
  const double r1 = 1.0 / (p.beta1 + x);
  const double r2 = 1.0 / (p.beta2 + x);
  const Nullclines n = kernel::nullclines(p, x, y, z);
  const double u_x = -1.0 + y * r1 * r1 + z * r2 * r2;

  Eigen::Matrix3d j;
  j(0, 0) = n.u + x * u_x;
  j(0, 1) = -x * r1;
  j(0, 2) = -x * r2;
  j(1, 0) = p.zeta * y * p.beta1 * r1 * r1;
  j(1, 1) = p.zeta * n.v;
  j(1, 2) = 0.0;
  j(2, 0) = p.zeta * z * p.beta2 * r2 * r2;
  j(2, 1) = 0.0;
  j(2, 2) = p.zeta * (n.w - p.h * z);
  return j;
}

}  // namespace mmo
