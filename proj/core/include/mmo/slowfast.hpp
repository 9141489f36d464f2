#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mmo/types.hpp"

namespace mmo::slowfast {

/// u on the critical manifold S = {u = 0} and its x-derivative.
struct ManifoldResidual {
  double u;
  double u_x;
};

ManifoldResidual manifold_residual(const ModelParams& p, const State& s);

/// The fold curve F+ = {u = 0, u_x = 0}, parametrised by its x-coordinate s:
///   phi(s) = (b1+s)^2 (1 - b2 - 2s) / (b1 - b2)
///   psi(s) = (b2+s)^2 (2s + b1 - 1) / (b1 - b2)
/// on [a, b] with a = (1 - max(b1,b2))/2, b = (1 - min(b1,b2))/2.
class FoldCurve {
 public:
  explicit FoldCurve(const ModelParams& p);

  double lower() const { return a_; }
  double upper() const { return b_; }
  const ModelParams& params() const { return p_; }

  double phi(double s) const;
  double psi(double s) const;

  /// (s, phi(s), psi(s)). Throws InvalidArgument outside [a, b].
  State point(double s) const;

  /// Tangent direction normalised to unit z-component: (1/psi', phi'/psi', 1).
  Vec3 tangent_dz(double s) const;

 private:
  ModelParams p_;
  double a_;
  double b_;
};

State fold_curve_point(const FoldCurve& fc, double s);

/// Explicit graph of S: y = (b1 + x)(1 - x - z/(b2 + x)).
double manifold_graph_y(const ModelParams& p, double x, double z);

/// Desingularized reduced flow on S in the (x, z) chart:
///   x' = u_y y v + u_z z w,   z' = -u_x z w,   evaluated at y = manifold_graph_y(x, z).
/// Throws InvalidArgument when the graph leaves y >= 0.
Eigen::Vector2d desingularized_rhs(const ModelParams& p, double x, double z);

/// Analytic Jacobian of desingularized_rhs (total derivatives along the graph).
Eigen::Matrix2d desingularized_jacobian(const ModelParams& p, double x, double z);

/// Scalar residual whose zeros on (a, b) are folded singularities:
/// u_y phi v + u_z psi w at (s, phi(s), psi(s)).
double folded_singularity_residual(const ModelParams& p, double s);

enum class SingularityKind { node, focus, saddle, degenerate };

std::string_view to_string(SingularityKind k);

struct FoldedSingularity {
  State point;
  double s = 0.0;
  /// Strong (larger magnitude) and weak eigenvalues; NaN for a focus.
  double lambda_s = 0.0;
  double lambda_w = 0.0;
  /// lambda_w / lambda_s. Positive for a node, negative for a saddle, NaN for a focus.
  double mu = 0.0;
  SingularityKind kind = SingularityKind::node;
  int newton_iterations = 0;
};

/// Eigenvalue structure of the desingularized flow at a fold point.
/// Real if |Im| < 1e-10 |lambda|; degenerate if |lambda_w| < 1e-8.
FoldedSingularity classify_fold_point(const ModelParams& p, double s);

/// Newton iteration on folded_singularity_residual starting from s_init, without
/// the ecological side conditions. Throws ConvergenceError after 100 iterations
/// or when the iterate leaves (a, b).
FoldedSingularity solve_folded_singularity(const ModelParams& p, double s_init);

/// solve_folded_singularity followed by the side conditions
/// x* > c b1/(1-c), y* > 0, z* > 0 (a 1e-9 slack on the first admits the
/// degenerate point at FSN II).
FoldedSingularity find_folded_singularity(const ModelParams& p, double s_init);

/// All sign changes of the residual on a uniform grid over (a, b), refined by
/// bisection. Useful for picking Newton starting points.
std::vector<double> bracket_folded_singularities(const ModelParams& p, double grid_step = 1e-4);

/// Folded singularity on the node branch: the root with x* > c b1/(1-c) if any,
/// otherwise the root closest to it.
FoldedSingularity locate_folded_singularity(const ModelParams& p);

/// k with 2k-1 < 1/mu < 2k+1; nullopt within 1e-9 of an integer 1/mu
/// (resonance). Throws InvalidArgument for mu outside (0,1).
std::optional<int> secondary_canard_count(double mu);

/// Noise level mu^{1/4} exp(-(2k+1)^2 mu). Throws InvalidArgument for mu <= 0 or k < 0.
double chi_k(double mu, int k);

struct HRange {
  double lo;
  double hi;
  double step;

  void validate() const;
};

struct HopfResult {
  double h;
  State equilibrium;
  /// Imaginary part of the crossing pair (angular frequency on the fast scale).
  double frequency;
};

/// h where the complex pair of the coexistence-equilibrium Jacobian crosses the
/// imaginary axis, bisected to |dh| < 1e-5 (tighter in practice).
HopfResult scan_hopf(const ModelParams& base, const HRange& range);

struct TrackPoint {
  double h;
  FoldedSingularity singularity;
};

/// Continuation of the folded singularity over h (Newton warm-started from the
/// previous s). Throws ConvergenceError when tracking loses the fold point.
std::vector<TrackPoint> track_folded_singularity(const ModelParams& base, const HRange& range);

struct FsnResult {
  double h;
  FoldedSingularity singularity;
};

/// h where lambda_w (and mu) crosses zero along the tracked branch.
FsnResult scan_fsn2(const ModelParams& base, const HRange& range);

}  // namespace mmo::slowfast
