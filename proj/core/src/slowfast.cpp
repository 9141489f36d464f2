#include "mmo/slowfast.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "mmo/error.hpp"
#include "mmo/model.hpp"

namespace mmo::slowfast {

namespace {

// Forward-mode dual number for the scalar fold residual derivative.
struct Dual {
  double v;
  double d;
};

Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual operator+(double a, Dual b) { return {a + b.v, b.d}; }
Dual operator-(double a, Dual b) { return {a - b.v, -b.d}; }
Dual operator*(double a, Dual b) { return {a * b.v, a * b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator/(Dual a, double b) { return {a.v / b, a.d / b}; }
Dual operator+(Dual a, double b) { return {a.v + b, a.d}; }
Dual operator-(Dual a, double b) { return {a.v - b, a.d}; }

template <class T>
T residual_impl(const ModelParams& p, T s) {
  const double db = p.beta1 - p.beta2;
  const T b1s = p.beta1 + s;
  const T b2s = p.beta2 + s;
  const T phi = b1s * b1s * (1.0 - p.beta2 - 2.0 * s) / db;
  const T psi = b2s * b2s * (2.0 * s + (p.beta1 - 1.0)) / db;
  const T v = s / b1s - p.c;
  const T w = s / b2s - p.d - p.h * psi;
  return -(phi / b1s) * v - (psi / b2s) * w;
}

double equilibrium_x(const ModelParams& p) { return p.c * p.beta1 / (1.0 - p.c); }

constexpr int kMaxNewton = 100;

}  // namespace

ManifoldResidual manifold_residual(const ModelParams& p, const State& s) {
  const double r1 = 1.0 / (p.beta1 + s.x);
  const double r2 = 1.0 / (p.beta2 + s.x);
  return {1.0 - s.x - s.y * r1 - s.z * r2, -1.0 + s.y * r1 * r1 + s.z * r2 * r2};
}

FoldCurve::FoldCurve(const ModelParams& p) : p_(p) {
  p.validate();
  a_ = (1.0 - std::max(p.beta1, p.beta2)) / 2.0;
  b_ = (1.0 - std::min(p.beta1, p.beta2)) / 2.0;
}

double FoldCurve::phi(double s) const {
  return (p_.beta1 + s) * (p_.beta1 + s) * (1.0 - p_.beta2 - 2.0 * s) / (p_.beta1 - p_.beta2);
}

double FoldCurve::psi(double s) const {
  return (p_.beta2 + s) * (p_.beta2 + s) * (2.0 * s + p_.beta1 - 1.0) / (p_.beta1 - p_.beta2);
}

State FoldCurve::point(double s) const {
  if (!(s >= a_ && s <= b_)) {
    throw InvalidArgument("fold parameter " + std::to_string(s) + " outside [" +
                          std::to_string(a_) + ", " + std::to_string(b_) + "]");
  }
  // Clamp the analytically forced zeros at the endpoints against rounding.
  return {s, std::max(phi(s), 0.0), std::max(psi(s), 0.0)};
}

Vec3 FoldCurve::tangent_dz(double s) const {
  const double k = 3.0 * s + p_.beta1 + p_.beta2 - 1.0;
  const double db = p_.beta1 - p_.beta2;
  const double dphi = -2.0 * (p_.beta1 + s) * k / db;
  const double dpsi = 2.0 * (p_.beta2 + s) * k / db;
  return {1.0 / dpsi, dphi / dpsi, 1.0};
}

State fold_curve_point(const FoldCurve& fc, double s) { return fc.point(s); }

double manifold_graph_y(const ModelParams& p, double x, double z) {
  return (p.beta1 + x) * (1.0 - x - z / (p.beta2 + x));
}

Eigen::Vector2d desingularized_rhs(const ModelParams& p, double x, double z) {
  const double y = manifold_graph_y(p, x, z);
  if (y < 0.0 || x < 0.0 || z < 0.0) {
    throw InvalidArgument("(x, z) maps outside the first quadrant of the critical manifold");
  }
  const double r1 = 1.0 / (p.beta1 + x);
  const double r2 = 1.0 / (p.beta2 + x);
  const Nullclines n = kernel::nullclines(p, x, y, z);
  const double u_x = -1.0 + y * r1 * r1 + z * r2 * r2;
  return {-r1 * y * n.v - r2 * z * n.w, -u_x * z * n.w};
}

Eigen::Matrix2d desingularized_jacobian(const ModelParams& p, double x, double z) {
  const double y = manifold_graph_y(p, x, z);
  const double r1 = 1.0 / (p.beta1 + x);
  const double r2 = 1.0 / (p.beta2 + x);
  const Nullclines n = kernel::nullclines(p, x, y, z);
  const double u_y = -r1, u_z = -r2;
  const double u_x = -1.0 + y * r1 * r1 + z * r2 * r2;
  const double u_xx = -2.0 * y * r1 * r1 * r1 - 2.0 * z * r2 * r2 * r2;
  const double v_x = p.beta1 * r1 * r1;
  const double w_x = p.beta2 * r2 * r2;

  const double y_x = 1.0 - p.beta1 - 2.0 * x - z * (p.beta2 - p.beta1) * r2 * r2;
  const double y_z = -(p.beta1 + x) * r2;

  const double F_x = r1 * r1 * y * n.v + u_y * y * v_x + r2 * r2 * z * n.w + u_z * z * w_x;
  const double F_y = u_y * n.v;
  const double F_z = u_z * (n.w - p.h * z);
  const double G_x = -(u_xx * z * n.w + u_x * z * w_x);
  const double G_y = -r1 * r1 * z * n.w;
  const double G_z = -(r2 * r2 * z * n.w + u_x * (n.w - p.h * z));

  Eigen::Matrix2d j;
  j << F_x + F_y * y_x, F_z + F_y * y_z, G_x + G_y * y_x, G_z + G_y * y_z;
  return j;
}

double folded_singularity_residual(const ModelParams& p, double s) {
  return residual_impl(p, s);
}

std::string_view to_string(SingularityKind k) {
  switch (k) {
    case SingularityKind::node: return "node";
    case SingularityKind::focus: return "focus";
    case SingularityKind::saddle: return "saddle";
    case SingularityKind::degenerate: return "degenerate";
  }
  return "unknown";
}

FoldedSingularity classify_fold_point(const ModelParams& p, double s) {
  const FoldCurve fc(p);
  FoldedSingularity fs;
  fs.s = s;
  fs.point = fc.point(s);

  const Eigen::Matrix2d j = desingularized_jacobian(p, fs.point.x, fs.point.z);
  const double tr = j.trace();
  const double det = j.determinant();
  const double disc = tr * tr - 4.0 * det;
  const double scale = std::sqrt(std::abs(det)) + std::abs(tr);

  if (disc < 0.0 && std::sqrt(-disc) / 2.0 >= 1e-10 * scale) {
    fs.lambda_s = fs.lambda_w = fs.mu = std::numeric_limits<double>::quiet_NaN();
    fs.kind = SingularityKind::focus;
    return fs;
  }
  const double root = std::sqrt(std::max(disc, 0.0));
  // Larger-magnitude root first, the other from det to avoid cancellation.
  const double big = tr >= 0.0 ? (tr + root) / 2.0 : (tr - root) / 2.0;
  fs.lambda_s = big;
  fs.lambda_w = big != 0.0 ? det / big : 0.0;
  fs.mu = big != 0.0 ? fs.lambda_w / fs.lambda_s : 0.0;
  if (std::abs(fs.lambda_w) < 1e-8) {
    fs.kind = SingularityKind::degenerate;
  } else if (fs.lambda_s * fs.lambda_w > 0.0) {
    fs.kind = SingularityKind::node;
  } else {
    fs.kind = SingularityKind::saddle;
  }
  return fs;
}

FoldedSingularity solve_folded_singularity(const ModelParams& p, double s_init) {
  const FoldCurve fc(p);
  const double a = fc.lower(), b = fc.upper();
  if (!(s_init > a && s_init < b)) {
    throw InvalidArgument("initial fold parameter must lie in (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
  }
  double s = s_init;
  for (int it = 1; it <= kMaxNewton; ++it) {
    const Dual r = residual_impl(p, Dual{s, 1.0});
    if (r.d == 0.0 || !std::isfinite(r.d)) throw ConvergenceError("singular fold residual slope");
    double step = r.v / r.d;
    double next = s - step;
    int halvings = 0;
    while (!(next > a && next < b) && halvings < 30) {
      step /= 2.0;
      next = s - step;
      ++halvings;
    }
    if (!(next > a && next < b)) throw ConvergenceError("Newton iterate left the fold domain");
    s = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s)) ||
        std::abs(residual_impl(p, s)) < 1e-15) {
      if (std::abs(residual_impl(p, s)) >= 1e-12) break;
      FoldedSingularity fs = classify_fold_point(p, s);
      fs.newton_iterations = it;
      return fs;
    }
  }
  throw ConvergenceError("folded singularity Newton iteration did not converge from s = " +
                         std::to_string(s_init));
}

FoldedSingularity find_folded_singularity(const ModelParams& p, double s_init) {
  FoldedSingularity fs = solve_folded_singularity(p, s_init);
  const double xe = equilibrium_x(p);
  if (!(fs.point.x > xe - 1e-9) || !(fs.point.y > 0.0) || !(fs.point.z > 0.0)) {
    throw ConvergenceError("fold point at s = " + std::to_string(fs.s) +
                           " violates x* > c b1/(1-c), y* > 0, z* > 0");
  }
  return fs;
}

std::vector<double> bracket_folded_singularities(const ModelParams& p, double grid_step) {
  const FoldCurve fc(p);
  if (!(grid_step > 0.0)) throw InvalidArgument("grid step must be positive");
  const double a = fc.lower(), b = fc.upper();
  const auto n = static_cast<long>(std::ceil((b - a) / grid_step));
  std::vector<double> roots;
  double s0 = a;
  double r0 = folded_singularity_residual(p, s0);
  for (long i = 1; i <= n; ++i) {
    const double s1 = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    const double r1 = folded_singularity_residual(p, s1);
    if (r0 == 0.0 && s0 > a) {
      roots.push_back(s0);
    } else if ((r0 < 0.0) != (r1 < 0.0) && r1 != 0.0) {
      double lo = s0, hi = s1, rlo = r0;
      while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        const double rm = folded_singularity_residual(p, mid);
        if ((rm < 0.0) == (rlo < 0.0)) {
          lo = mid;
          rlo = rm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    s0 = s1;
    r0 = r1;
  }
  return roots;
}

FoldedSingularity locate_folded_singularity(const ModelParams& p) {
  const auto roots = bracket_folded_singularities(p);
  if (roots.empty()) throw ConvergenceError("no folded singularity on the fold curve");
  const double xe = equilibrium_x(p);
  double best = roots.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double r : roots) {
    // Prefer the node branch (x* > xe), nearest to xe.
    const double score = r > xe ? r - xe : 1.0 + (xe - r);
    if (score < best_score) {
      best_score = score;
      best = r;
    }
  }
  const FoldCurve fc(p);
  if (best <= fc.lower() || best >= fc.upper()) return classify_fold_point(p, best);
  return solve_folded_singularity(p, best);
}

std::optional<int> secondary_canard_count(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("mu must lie in (0,1)");
  const double inv = 1.0 / mu;
  if (std::abs(inv - std::round(inv)) < 1e-9) return std::nullopt;
  return static_cast<int>(std::floor((inv + 1.0) / 2.0));
}

double chi_k(double mu, int k) {
  if (!(mu > 0.0)) throw InvalidArgument("chi_k requires mu > 0");
  if (k < 0) throw InvalidArgument("chi_k requires k >= 0");
  const double m = 2.0 * k + 1.0;
  return std::pow(mu, 0.25) * std::exp(-m * m * mu);
}

void HRange::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidArgument("h range must satisfy lo < hi");
  }
  if (!(step > 0.0)) throw InvalidArgument("h step must be positive");
}

namespace {

std::vector<double> grid(const HRange& r) {
  const auto n = std::max<long>(1, static_cast<long>(std::ceil((r.hi - r.lo) / r.step - 1e-9)));
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    g[static_cast<std::size_t>(i)] =
        i == n ? r.hi : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n);
  }
  return g;
}

struct PairInfo {
  bool complex = false;
  double re = 0.0;
  double im = 0.0;
};

PairInfo complex_pair(const ModelParams& p) {
  const State eq = coexistence_equilibrium(p);
  Eigen::EigenSolver<Eigen::Matrix3d> es(jacobian(p, eq), false);
  const auto ev = es.eigenvalues();
  PairInfo info;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(ev[i].imag()) > 1e-12 * (1.0 + std::abs(ev[i]))) {
      info.complex = true;
      info.re = ev[i].real();
      info.im = std::abs(ev[i].imag());
    }
  }
  return info;
}

}  // namespace

HopfResult scan_hopf(const ModelParams& base, const HRange& range) {
  range.validate();
  const auto hs = grid(range);
  bool any_complex = false;
  std::optional<std::pair<double, double>> prev;  // (h, re)
  for (double h : hs) {
    const PairInfo info = complex_pair(base.with_h(h));
    if (!info.complex) {
      prev.reset();
      continue;
    }
    any_complex = true;
    if (prev && (prev->second < 0.0) != (info.re < 0.0)) {
      double lo = prev->first, hi = h;
      const bool lo_negative = prev->second < 0.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const PairInfo m = complex_pair(base.with_h(mid));
        if (!m.complex) throw ConvergenceError("complex pair lost during Hopf bisection");
        if ((m.re < 0.0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double hh = 0.5 * (lo + hi);
      const ModelParams ph = base.with_h(hh);
      return {hh, coexistence_equilibrium(ph), complex_pair(ph).im};
    }
    prev = std::make_pair(h, info.re);
  }
  if (!any_complex) throw ConvergenceError("equilibrium eigenvalues never form a complex pair");
  throw ConvergenceError("no Hopf crossing in [" + std::to_string(range.lo) + ", " +
                         std::to_string(range.hi) + "]");
}

std::vector<TrackPoint> track_folded_singularity(const ModelParams& base, const HRange& range) {
  range.validate();
  const auto hs = grid(range);
  std::vector<TrackPoint> track;
  track.reserve(hs.size());
  FoldedSingularity fs = locate_folded_singularity(base.with_h(hs.front()));
  track.push_back({hs.front(), fs});
  for (std::size_t i = 1; i < hs.size(); ++i) {
    try {
      fs = solve_folded_singularity(base.with_h(hs[i]), fs.s);
    } catch (const Error& e) {
      throw ConvergenceError("lost the folded singularity at h = " + std::to_string(hs[i]) +
                             ": " + e.what());
    }
    track.push_back({hs[i], fs});
  }
  return track;
}

FsnResult scan_fsn2(const ModelParams& base, const HRange& range) {
  const auto track = track_folded_singularity(base, range);
  for (std::size_t i = 1; i < track.size(); ++i) {
    const double m0 = track[i - 1].singularity.mu;
    const double m1 = track[i].singularity.mu;
    if (std::isnan(m0) || std::isnan(m1)) continue;
    if ((m0 > 0.0) == (m1 > 0.0)) continue;

    double lo = track[i - 1].h, hi = track[i].h;
    double s = track[i - 1].singularity.s;
    const bool lo_positive = m0 > 0.0;
    FoldedSingularity at_lo = track[i - 1].singularity;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const FoldedSingularity fm = solve_folded_singularity(base.with_h(mid), s);
      if (std::isnan(fm.mu)) throw ConvergenceError("folded singularity became a focus");
      if ((fm.mu > 0.0) == lo_positive) {
        lo = mid;
        at_lo = fm;
      } else {
        hi = mid;
      }
      s = fm.s;
    }
    return {lo, at_lo};
  }
  throw ConvergenceError("no FSN II crossing (mu sign change) in [" + std::to_string(range.lo) +
                         ", " + std::to_string(range.hi) + "]");
}

}  // namespace mmo::slowfast
