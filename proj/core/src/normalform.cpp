#include "mmo/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mmo/error.hpp"
#include "mmo/model.hpp"

namespace mmo::normalform {

NormalFormConstants compute_constants(const ModelParams& p, const slowfast::FoldedSingularity& fs,
                                      const NoiseParams& n) {
  p.validate();
  n.validate();
  if (p.beta1 == p.beta2) throw InvalidArgument("c11 is undefined for beta1 == beta2");
  const auto res = slowfast::manifold_residual(p, fs.point);
  if (std::abs(res.u) > 1e-8 || std::abs(res.u_x) > 1e-8) {
    throw InvalidArgument("point is not on the fold curve");
  }

  const double b1 = p.beta1, b2 = p.beta2, c = p.c, d = p.d, h = p.h;
  const double x = fs.point.x, y = fs.point.y, z = fs.point.z;
  const double p1 = b1 + x, p2 = b2 + x;
  const double s3 = n.sigma3;

  NormalFormConstants k;
  k.params = p;
  k.point = fs.point;
  k.sigma3 = s3;

  k.kappa = -x * (y / (p1 * p1 * p1) + z / (p2 * p2 * p2));
  k.c11 = (b1 - b2) / (2.0 * p2 * (3.0 * x + b1 + b2 - 1.0));
  k.c22 = -p1 / p2;

  k.A1 = -x * (b1 * y / (p1 * p1 * p1) + b2 * z / (p2 * p2 * p2));
  k.C0 = k.c11 * z * (x / p1 - d - h * z);
  k.C1 = x / p1 - c;
  k.A2 = b1 * k.C0 / (x * p1) + k.C1;
  k.A3 = x * k.kappa *
         ((1.0 / p2) * (d + 2.0 * h * z - c - (b1 - b2) * x / (p1 * p2)) -
          k.c11 * (b1 * y / (p1 * p1 * p1) + b2 * z / (p2 * p2 * p2)));
  k.A4 = k.c11 * k.c22 * k.kappa * b1 * s3 * s3 * p.zeta / (p1 * p1);

  k.B0 = z * (x / p2 - d - h * z);
  k.B1 = b2 * z / (p2 * p2);
  k.B2 = x / p2 - d - 2.0 * h * z + k.c11 * b2 * z / (p2 * p2);

  k.C = b1 / (k.kappa * x * p1);

  k.D0 = y * (x / p1 + c);
  k.D1 = b1 * y / (k.kappa * p1 * p1);
  k.D2 = -(c * b1 + (1.0 + c) * x) / x;
  k.D3 = k.c11 * b1 * y / (p1 * p1);
  k.D4 = k.c11 * k.B0 / x * (c * b1 + (1.0 + c) * x);

  k.E0 = z * (x / p2 + d + h * z);

  k.M = -k.A3 * p1 / (x * k.kappa);
  k.L = {k.B0, k.B1, k.B2};
  k.k4 = k.c11 * b1 / (x * p1);
  return k;
}

namespace {

double stretch_y(const NormalFormConstants& k) {
  return -k.point.x * k.kappa / (k.params.beta1 + k.point.x);
}

double stretch_shift(const NormalFormConstants& k) {
  return -k.params.zeta * k.c11 * k.kappa * k.E0;
}

}  // namespace

Vec3 forward(const NormalFormConstants& k, const Vec3& v, Stage upto) {
  Vec3 w{v[0] - k.point.x, v[1] - k.point.y, v[2] - k.point.z};
  if (upto == Stage::translated) return w;
  w = {w[0] - k.c11 * w[2], w[1] - k.c22 * w[2], w[2]};
  if (upto == Stage::rectified) return w;
  w = {k.kappa * w[0], stretch_y(k) * w[1] + stretch_shift(k), w[2]};
  if (upto == Stage::stretched) return w;
  return {w[0], (1.0 + k.k4 * w[2]) * w[1], w[2]};
}

Vec3 inverse(const NormalFormConstants& k, const Vec3& v, Stage from) {
  Vec3 w = v;
  if (from == Stage::normal) {
    const double factor = 1.0 + k.k4 * w[2];
    if (factor == 0.0) throw InvalidArgument("step-4 factor 1 + k Z vanishes");
    w[1] /= factor;
  }
  if (from == Stage::normal || from == Stage::stretched) {
    w = {w[0] / k.kappa, (w[1] - stretch_shift(k)) / stretch_y(k), w[2]};
  }
  if (from != Stage::translated) {
    w = {w[0] + k.c11 * w[2], w[1] + k.c22 * w[2], w[2]};
  }
  return {w[0] + k.point.x, w[1] + k.point.y, w[2] + k.point.z};
}

Vec3 transform_state(const NormalFormConstants& nfc, const Vec3& v, Direction dir) {
  return dir == Direction::forward ? forward(nfc, v) : inverse(nfc, v);
}

Vec3 transformed_drift(const NormalFormConstants& k, const Vec3& q, bool include_ito) {
  const ModelParams& p = k.params;
  const Vec3 s = inverse(k, q);
  const Vec3 f = kernel::reaction_terms(p, s[0], s[1], s[2]);
  const double zf2 = p.zeta * f[1];
  const double zf3 = p.zeta * f[2];
  const double factor = 1.0 + k.k4 * q[2];
  const double y_hat = q[1] / factor;

  const double g1 = k.kappa * (f[0] - k.c11 * zf3);
  double g2 = k.k4 * y_hat * zf3 + factor * stretch_y(k) * (zf2 - k.c22 * zf3);
  if (include_ito) {
    const State st{s[0], s[1], s[2]};
    g2 += k.A4 * diffusion_approx_G_squared(p, st)[2];
  }
  return {g1, g2, zf3};
}

double transformed_g1_squared(const NormalFormConstants& k, const Vec3& q) {
  const Vec3 s = inverse(k, q);
  const double x = s[0], y = s[1], z = s[2];
  const ModelParams& p = k.params;
  return x + x * x + x * y / (p.beta1 + x) + x * z / (p.beta2 + x);
}

namespace {

struct Quadratic {
  double c0;
  std::array<double, 3> grad;
  std::array<std::array<double, 3>, 3> hess;

  double operator()(const Vec3& v) const {
    double s = c0;
    for (int i = 0; i < 3; ++i) {
      s += grad[i] * v[i];
      for (int j = 0; j < 3; ++j) s += 0.5 * hess[i][j] * v[i] * v[j];
    }
    return s;
  }
};

template <class F>
Quadratic taylor2(F&& f, double h) {
  auto at = [&](double a, double b, double c) { return f(Vec3{a, b, c}); };
  auto unit = [&](int i, double s) {
    Vec3 v{0, 0, 0};
    v[i] = s;
    return v;
  };
  Quadratic q{};
  q.c0 = at(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    const double fp = f(unit(i, h));
    const double fm = f(unit(i, -h));
    q.grad[i] = (fp - fm) / (2 * h);
    q.hess[i][i] = (fp - 2 * q.c0 + fm) / (h * h);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      auto pt = [&](double si, double sj) {
        Vec3 v{0, 0, 0};
        v[i] = si * h;
        v[j] = sj * h;
        return f(v);
      };
      const double mixed = (pt(1, 1) - pt(1, -1) - pt(-1, 1) + pt(-1, -1)) / (4 * h * h);
      q.hess[i][j] = q.hess[j][i] = mixed;
    }
  }
  return q;
}

void check_delta(const NormalFormConstants& k, double delta) {
  if (!(delta > 0.0) || delta > 0.05) throw InvalidArgument("delta must lie in (0, 0.05]");
  // Every stencil point must map back into the open first quadrant.
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        const Vec3 s = inverse(k, {a * delta, b * delta, c * delta});
        if (!(s[0] > 0.0 && s[1] > 0.0 && s[2] > 0.0)) {
          throw InvalidArgument("delta leaves the neighbourhood of the folded node");
        }
      }
    }
  }
}

double remainder_at(const NormalFormConstants& k, const Quadratic& t2, double r) {
  double worst = 0.0;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double norm = std::sqrt(double(a * a + b * b + c * c));
        const Vec3 v{r * a / norm, r * b / norm, r * c / norm};
        worst = std::max(worst, std::abs(transformed_drift(k, v)[0] - t2(v)));
      }
    }
  }
  return worst;
}

}  // namespace

double cubic_remainder(const NormalFormConstants& k, double r) {
  check_delta(k, r);
  const auto g1 = [&](const Vec3& v) { return transformed_drift(k, v)[0]; };
  return remainder_at(k, taylor2(g1, r), r);
}

bool VerificationReport::leading_coefficients_pass() const {
  return std::abs(y.deviation()) <= tolerance && std::abs(xx.deviation()) <= tolerance &&
         std::abs(xy.deviation()) <= tolerance;
}

VerificationReport verify_normal_form(const NormalFormConstants& k, double delta) {
  check_delta(k, delta);
  const ModelParams& p = k.params;
  const double x = k.point.x;
  const double p1 = p.beta1 + x;

  VerificationReport rep;
  rep.delta = delta;
  rep.tolerance = 1e-3 + 5.0 * p.zeta;

  const auto g1 = [&](const Vec3& v) { return transformed_drift(k, v)[0]; };
  const auto g2 = [&](const Vec3& v) { return transformed_drift(k, v)[1] / p.zeta; };
  const auto g3 = [&](const Vec3& v) { return transformed_drift(k, v)[2] / p.zeta; };

  const Quadratic t1 = taylor2(g1, delta);
  rep.y = {t1.grad[1], 1.0};
  rep.xx = {0.5 * t1.hess[0][0], 1.0};
  rep.xy = {t1.hess[0][1], k.C};
  rep.zz = 0.5 * t1.hess[2][2];
  rep.cubic_remainder = remainder_at(k, t1, delta);

  const Quadratic t2 = taylor2(g2, delta);
  rep.f2_x = {t2.grad[0], k.A1};
  rep.f2_y = {t2.grad[1], k.C1 + p.beta1 * k.c11 * k.B0 / (x * p1)};
  rep.f2_z = {t2.grad[2], k.A3};
  rep.a2_printed = {t2.grad[1], k.A2};

  const Quadratic t3 = taylor2(g3, delta);
  rep.f3_const = {t3.c0, k.B0};
  rep.f3_x = {t3.grad[0], k.B1 / k.kappa};
  rep.f3_z = {t3.grad[2], k.B2};

  const Vec3 image = forward(k, k.point.as_vec());
  const auto g1sq = [&](const Vec3& v) {
    return transformed_g1_squared(k, {image[0] + v[0], image[1] + v[1], image[2] + v[2]});
  };
  const Quadratic tg = taylor2(g1sq, delta);
  rep.g1_constant = {tg.c0, 2.0 * x};
  rep.g1_x = {tg.grad[0], 2.0 / k.kappa};
  rep.g1_y = {tg.grad[1], -1.0 / k.kappa};
  rep.g1_z = {tg.grad[2], 2.0 * k.c11};

  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Vec3 centre = k.point.as_vec();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 s{centre[0] + 0.01 * unit(gen), centre[1] + 0.01 * unit(gen),
                 centre[2] + 0.01 * unit(gen)};
    const Vec3 back = inverse(k, forward(k, s));
    for (int j = 0; j < 3; ++j) {
      rep.round_trip_error = std::max(rep.round_trip_error, std::abs(back[j] - s[j]));
    }
  }
  return rep;
}

NoisePrefactors noise_prefactors(const ModelParams& p, const NoiseParams& n,
                                 const slowfast::FoldedSingularity& fs) {
  p.validate();
  n.validate();
  const Vec3 F2 = diffusion_squared(p, fs.point);
  const Vec3 G = diffusion_approx_G(p, fs.point);
  const Vec3 s = n.sigmas();
  NoisePrefactors out{};
  for (int i = 0; i < 3; ++i) {
    out.sigma_F[i] = s[i] * std::sqrt(F2[i]);
    out.sigma_G[i] = s[i] * G[i];
  }
  return out;
}

std::vector<PrefactorRow> noise_prefactor_sweep(const ModelParams& base, const NoiseParams& n,
                                                const slowfast::HRange& range) {
  const auto track = slowfast::track_folded_singularity(base, range);
  std::vector<PrefactorRow> rows;
  rows.reserve(track.size());
  for (const auto& tp : track) {
    rows.push_back({tp.h, tp.singularity.mu,
                    noise_prefactors(base.with_h(tp.h), n, tp.singularity)});
  }
  return rows;
}

std::vector<ChiRow> chi_vs_h(const ModelParams& base, const slowfast::HRange& range, int k_max) {
  if (k_max < 0) throw InvalidArgument("k_max must be non-negative");
  const auto track = slowfast::track_folded_singularity(base, range);
  std::vector<ChiRow> rows;
  rows.reserve(track.size());
  for (const auto& tp : track) {
    const auto& fs = tp.singularity;
    ChiRow row{tp.h, fs.mu, std::vector<double>(static_cast<std::size_t>(k_max) + 1, 0.0)};
    if (fs.kind == slowfast::SingularityKind::focus || fs.kind == slowfast::SingularityKind::saddle) {
      throw InvalidArgument("folded singularity at h = " + std::to_string(tp.h) + " is a " +
                            std::string(slowfast::to_string(fs.kind)) + ", not a node");
    }
    if (fs.kind == slowfast::SingularityKind::node && fs.mu > 0.0) {
      for (int kk = 0; kk <= k_max; ++kk) {
        row.chi[static_cast<std::size_t>(kk)] = slowfast::chi_k(fs.mu, kk);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mmo::normalform
