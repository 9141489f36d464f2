#include <cmath>
#include <random>

#include "doctest.h"
#include "mmo/error.hpp"
#include "mmo/model.hpp"
#include "mmo/slowfast.hpp"
#include "oracle_values.hpp"

using namespace mmo;
using namespace mmo::slowfast;

TEST_SUITE("slowfast") {
  TEST_CASE("manifold residual") {
    const auto p = reference_parameters(2.4);
    const auto r0 = manifold_residual(p, {1, 0, 0});
    CHECK(r0.u == 0.0);
    const auto r = manifold_residual(p, {0.3, 0.3, 0.1});
    CHECK(r.u == doctest::Approx(oracle::kManifoldU).epsilon(1e-14));
    CHECK(r.u_x == doctest::Approx(oracle::kManifoldUx).epsilon(1e-14));
  }

  TEST_CASE("fold curve endpoints and forced zeros") {
    const FoldCurve fc(reference_parameters(2.4));
    CHECK(fc.lower() == 0.25);
    CHECK(fc.upper() == 0.375);
    CHECK(fc.psi(fc.lower()) == 0.0);
    CHECK(fc.phi(fc.upper()) == 0.0);
    CHECK(fc.phi(fc.lower()) == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK_THROWS_AS(fc.point(0.2), InvalidArgument);
    CHECK_THROWS_AS(fc.point(0.38), InvalidArgument);
  }

  TEST_CASE("sampled fold points satisfy both fold conditions") {
    const auto p = reference_parameters(2.4);
    const FoldCurve fc(p);
    for (int i = 0; i <= 100; ++i) {
      const double s = fc.lower() + (fc.upper() - fc.lower()) * i / 100.0;
      const auto r = manifold_residual(p, fold_curve_point(fc, s));
      CHECK(std::abs(r.u) < 1e-10);
      CHECK(std::abs(r.u_x) < 1e-10);
    }
  }

  TEST_CASE("fold curve lies on the graph of the critical manifold") {
    const auto p = reference_parameters(2.4);
    const FoldCurve fc(p);
    for (double s : {0.26, 0.3, 0.33, 0.37}) {
      const State q = fc.point(s);
      CHECK(manifold_graph_y(p, q.x, q.z) == doctest::Approx(q.y).epsilon(1e-13));
    }
  }

  TEST_CASE("tangent agrees with central differences of the parametrisation") {
    const FoldCurve fc(reference_parameters(2.4));
    for (double s : {0.27, 0.3, 0.32, 0.36}) {
      const double e = 1e-6;
      const State a = fc.point(s - e), b = fc.point(s + e);
      const double dz = (b.z - a.z) / (2 * e);
      const Vec3 t = fc.tangent_dz(s);
      CHECK(t[2] == 1.0);
      CHECK(t[0] == doctest::Approx(1.0 / dz).epsilon(1e-7));
      CHECK(t[1] == doctest::Approx((b.y - a.y) / (2 * e) / dz).epsilon(1e-7));
    }
  }

  TEST_CASE("desingularized flow") {
    const auto p = reference_parameters(2.3);
    const Eigen::Vector2d v = desingularized_rhs(p, 0.3, 0.1);
    CHECK(v[0] == doctest::Approx(oracle::kDesingularized[0]).epsilon(1e-13));
    CHECK(v[1] == doctest::Approx(oracle::kDesingularized[1]).epsilon(1e-13));

    const FoldCurve fc(p);
    const State q = fc.point(0.3);  // not a folded singularity
    const Eigen::Vector2d jump = desingularized_rhs(p, q.x, q.z);
    CHECK(std::abs(jump[1]) < 1e-14);
    CHECK(std::abs(jump[0]) > 1e-4);

    const double s = oracle::kFoldedNode23[0];
    const Eigen::Vector2d at_node = desingularized_rhs(p, s, fc.psi(s));
    CHECK(at_node.cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(desingularized_rhs(p, 0.3, 5.0), InvalidArgument);
  }

  TEST_CASE("desingularized Jacobian agrees with central differences") {
    const auto p = reference_parameters(2.3);
    for (const auto& [x, z] : {std::pair{0.3, 0.1}, std::pair{0.32, 0.17}, std::pair{0.28, 0.05}}) {
      const Eigen::Matrix2d j = desingularized_jacobian(p, x, z);
      const double e = 1e-6;
      const Eigen::Vector2d dx =
          (desingularized_rhs(p, x + e, z) - desingularized_rhs(p, x - e, z)) / (2 * e);
      const Eigen::Vector2d dz =
          (desingularized_rhs(p, x, z + e) - desingularized_rhs(p, x, z - e)) / (2 * e);
      for (int r = 0; r < 2; ++r) {
        CHECK(j(r, 0) == doctest::Approx(dx[r]).epsilon(1e-6).scale(1e-3));
        CHECK(j(r, 1) == doctest::Approx(dz[r]).epsilon(1e-6).scale(1e-3));
      }
    }
  }

  TEST_CASE("residual roots agree with a dense-scan bisection oracle") {
    const auto p = reference_parameters(2.3);
    const auto roots = bracket_folded_singularities(p);
    REQUIRE(roots.size() == oracle::kFoldRoots23.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      CHECK(roots[i] == doctest::Approx(oracle::kFoldRoots23[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("folded node at h = 2.3") {
    const auto p = reference_parameters(2.3);
    const FoldedSingularity fs = locate_folded_singularity(p);
    CHECK(fs.kind == SingularityKind::node);
    CHECK(fs.point.x == doctest::Approx(oracle::kFoldedNode23[0]).epsilon(1e-12));
    CHECK(fs.point.y == doctest::Approx(oracle::kFoldedNode23[1]).epsilon(1e-12));
    CHECK(fs.point.z == doctest::Approx(oracle::kFoldedNode23[2]).epsilon(1e-12));
    CHECK(fs.mu == doctest::Approx(oracle::kFoldedNodeMu23).epsilon(1e-8));
    CHECK(fs.mu > 0.0);
    CHECK(fs.mu < 1.0);
    CHECK(std::abs(fs.lambda_s) > std::abs(fs.lambda_w));

    const FoldedSingularity newton = find_folded_singularity(p, 0.31);
    CHECK(newton.s == doctest::Approx(fs.s).epsilon(1e-13));
    CHECK(newton.newton_iterations < 20);
    CHECK(std::abs(folded_singularity_residual(p, newton.s)) < 1e-14);
  }

  TEST_CASE("G1 squared at the folded node equals twice its x coordinate") {
    for (double h : {2.3, 2.5, 2.7}) {
      const auto p = reference_parameters(h);
      const auto fs = locate_folded_singularity(p);
      CHECK(diffusion_approx_G_squared(p, fs.point)[0] ==
            doctest::Approx(2.0 * fs.point.x).epsilon(1e-12));
    }
  }

  TEST_CASE("the lower residual root fails the side conditions") {
    const auto p = reference_parameters(2.3);
    CHECK_THROWS_AS(find_folded_singularity(p, oracle::kFoldRoots23[0]), ConvergenceError);
  }

  TEST_CASE("Newton start outside the fold domain is rejected") {
    const auto p = reference_parameters(2.3);
    CHECK_THROWS_AS(solve_folded_singularity(p, 0.1), InvalidArgument);
    CHECK_THROWS_AS(solve_folded_singularity(p, 0.375), InvalidArgument);
  }

  TEST_CASE("folded saddle-node of type II is degenerate") {
    const auto p = reference_parameters(oracle::kFsn2);
    const auto fs = locate_folded_singularity(p);
    CHECK(fs.kind == SingularityKind::degenerate);
    CHECK(std::abs(fs.mu) < 1e-6);
    const double xe = p.c * p.beta1 / (1.0 - p.c);
    CHECK(fs.point.x == doctest::Approx(xe).epsilon(1e-9));
  }

  TEST_CASE("secondary canard count") {
    CHECK(secondary_canard_count(0.3) == 2);
    CHECK(secondary_canard_count(0.6) == 1);
    CHECK_FALSE(secondary_canard_count(0.5).has_value());
    CHECK_FALSE(secondary_canard_count(1.0 / 3.0).has_value());
    CHECK(secondary_canard_count(0.011757) == 43);
    CHECK_THROWS_AS(secondary_canard_count(0.0), InvalidArgument);
    CHECK_THROWS_AS(secondary_canard_count(1.0), InvalidArgument);
  }

  TEST_CASE("chi_k") {
    CHECK(chi_k(1.0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(chi_k(1e-12, 0) < 2e-3);
    CHECK(chi_k(1e-40, 3) < 1e-9);
    for (double mu : {1e-4, 1e-3, 0.01, 0.1, 0.5}) {
      for (int k = 0; k < 6; ++k) CHECK(chi_k(mu, k) > chi_k(mu, k + 1));
    }
    CHECK_THROWS_AS(chi_k(0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(chi_k(0.1, -1), InvalidArgument);
  }

  TEST_CASE("Hopf scan") {
    const auto base = reference_parameters(2.4);
    const HopfResult r = scan_hopf(base, {2.5, 2.8, 0.01});
    // Routh-Hurwitz oracle: a2 a1 - a0 = 0 in 50-digit arithmetic.
    CHECK(r.h == doctest::Approx(oracle::kHopf).epsilon(1e-8));
    CHECK(r.frequency > 0.0);
    CHECK_THROWS_AS(scan_hopf(base, {1.0, 1.5, 0.01}), ConvergenceError);
    CHECK_THROWS_AS(scan_hopf(base, {2.5, 2.5, 0.01}), InvalidArgument);
    CHECK_THROWS_AS(scan_hopf(base, {2.5, 2.8, 0.0}), InvalidArgument);
  }

  TEST_CASE("FSN II scan") {
    const auto base = reference_parameters(2.4);
    const FsnResult r = scan_fsn2(base, {2.6, 2.8, 0.01});
    // Analytic location: the folded node reaches x = c b1/(1-c).
    CHECK(r.h == doctest::Approx(oracle::kFsn2).epsilon(1e-9));
    CHECK_THROWS_AS(scan_fsn2(base, {2.2, 2.5, 0.01}), ConvergenceError);
    CHECK_THROWS_AS(scan_fsn2(base, {2.8, 2.6, 0.01}), InvalidArgument);
  }

  TEST_CASE("tracked folded node stays a node with mu decreasing towards FSN II") {
    const auto track = track_folded_singularity(reference_parameters(2.3), {2.3, 2.7, 0.05});
    REQUIRE(track.size() == 9);
    CHECK(track.front().h == 2.3);
    CHECK(track.back().h == doctest::Approx(2.7).epsilon(1e-15));
    for (std::size_t i = 0; i < track.size(); ++i) {
      CHECK(track[i].singularity.kind == SingularityKind::node);
      CHECK(track[i].singularity.mu > 0.0);
      if (i > 0) CHECK(track[i].singularity.mu < track[i - 1].singularity.mu);
    }
    CHECK(track.front().singularity.mu == doctest::Approx(oracle::kFoldedNodeMu23).epsilon(1e-8));
  }

  TEST_CASE("classification labels") {
    CHECK(to_string(SingularityKind::node) == "node");
    CHECK(to_string(SingularityKind::saddle) == "saddle");
    CHECK(to_string(SingularityKind::focus) == "focus");
    CHECK(to_string(SingularityKind::degenerate) == "degenerate");
  }
}
