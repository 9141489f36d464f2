#include <cmath>
#include <random>

#include "doctest.h"
#include "mmo/error.hpp"
#include "mmo/model.hpp"
#include "mmo/normalform.hpp"
#include "mmo/slowfast.hpp"
#include "oracle_values.hpp"

using namespace mmo;
using namespace mmo::normalform;

namespace {

struct Fixture {
  ModelParams p = reference_parameters(2.3);
  slowfast::FoldedSingularity fs = slowfast::locate_folded_singularity(p);
  NoiseParams n{1e-6, 1e-3, 1e-2};
  NormalFormConstants k = compute_constants(p, fs, n);
};

void check_rel(double got, double want, double rel = 1e-9) {
  CHECK(got == doctest::Approx(want).epsilon(rel));
}

}  // namespace

TEST_SUITE("normalform") {
  TEST_CASE_FIXTURE(Fixture, "constants agree with a 50-digit evaluation") {
    check_rel(k.kappa, oracle::kkappa);
    check_rel(k.c11, oracle::kc11);
    check_rel(k.c22, oracle::kc22);
    check_rel(k.A1, oracle::kA1);
    check_rel(k.A2, oracle::kA2);
    check_rel(k.A3, oracle::kA3);
    check_rel(k.A4, oracle::kA4);
    check_rel(k.B0, oracle::kB0, 1e-7);  // B0 vanishes at FSN II; relative digits are scarcer
    check_rel(k.B1, oracle::kB1);
    check_rel(k.B2, oracle::kB2);
    check_rel(k.C, oracle::kC);
    check_rel(k.C0, oracle::kC0);
    check_rel(k.C1, oracle::kC1);
    check_rel(k.D0, oracle::kD0);
    check_rel(k.D1, oracle::kD1);
    check_rel(k.D2, oracle::kD2);
    check_rel(k.D3, oracle::kD3);
    check_rel(k.D4, oracle::kD4, 1e-7);
    check_rel(k.E0, oracle::kE0);
    check_rel(k.M, -k.A3 * (p.beta1 + k.point.x) / (k.point.x * k.kappa), 1e-15);
  }

  TEST_CASE_FIXTURE(Fixture, "signs of the linearisation constants") {
    CHECK(k.kappa < 0.0);
    CHECK(k.c22 < -1.0);
    CHECK(k.c11 > 0.0);
    // D0 is G2^2 at the folded node.
    check_rel(k.D0, diffusion_approx_G_squared(p, k.point)[1], 1e-13);
  }

  TEST_CASE_FIXTURE(Fixture, "A4 scales with the square of sigma3") {
    const auto zero = compute_constants(p, fs, {1e-6, 1e-3, 0.0});
    CHECK(zero.A4 == 0.0);
    const auto twice = compute_constants(p, fs, {1e-6, 1e-3, 2e-2});
    CHECK(twice.A4 == doctest::Approx(4.0 * k.A4).epsilon(1e-15));

    const auto a = noise_prefactors(p, n, fs);
    const auto b = noise_prefactors(p, {1e-6, 1e-3, 2e-2}, fs);
    CHECK(b.sigma_F[2] == doctest::Approx(2.0 * a.sigma_F[2]).epsilon(1e-15));
    CHECK(b.sigma_G[2] == doctest::Approx(2.0 * a.sigma_G[2]).epsilon(1e-15));
    CHECK(b.sigma_F[0] == a.sigma_F[0]);
  }

  TEST_CASE_FIXTURE(Fixture, "noise prefactors") {
    const auto z = noise_prefactors(p, NoiseParams{}, fs);
    CHECK(z.sigma_F == Vec3{0, 0, 0});
    CHECK(z.sigma_G == Vec3{0, 0, 0});
    const auto a = noise_prefactors(p, n, fs);
    check_rel(a.sigma_G[0], n.sigma1 * std::sqrt(2.0 * k.point.x), 1e-13);
    // F1^2 and G1^2 coincide on the fold curve.
    check_rel(a.sigma_F[0], a.sigma_G[0], 1e-13);
    for (int i = 1; i < 3; ++i) CHECK(a.sigma_F[i] < a.sigma_G[i]);

    const auto sweep = noise_prefactor_sweep(p, n, {2.3, 2.7, 0.1});
    REQUIRE(sweep.size() == 5);
    CHECK(sweep.front().values.sigma_G[0] == doctest::Approx(a.sigma_G[0]).epsilon(1e-12));
    for (std::size_t i = 1; i < sweep.size(); ++i) CHECK(sweep[i].mu < sweep[i - 1].mu);
  }

  TEST_CASE_FIXTURE(Fixture, "image of the folded node") {
    const Vec3 img = forward(k, k.point.as_vec());
    CHECK(img[0] == 0.0);
    CHECK(img[2] == 0.0);
    check_rel(img[1], -p.zeta * k.c11 * k.kappa * k.E0, 1e-14);
  }

  TEST_CASE_FIXTURE(Fixture, "rectification straightens the fold tangent") {
    for (double d : {1e-3, -2e-3, 1e-2}) {
      const Vec3 s{k.point.x + k.c11 * d, k.point.y + k.c22 * d, k.point.z + d};
      const Vec3 r = forward(k, s, Stage::rectified);
      CHECK(std::abs(r[0]) < 1e-15);
      CHECK(std::abs(r[1]) < 1e-15);
      CHECK(r[2] == doctest::Approx(d).epsilon(1e-12));
    }
    // The linearisation matches the fold-curve tangent at the node.
    const slowfast::FoldCurve fc(p);
    const Vec3 t = fc.tangent_dz(k.point.x);
    check_rel(t[0], k.c11, 1e-10);
    check_rel(t[1], k.c22, 1e-10);
  }

  TEST_CASE_FIXTURE(Fixture, "forward and inverse maps are mutually inverse") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> U(-0.02, 0.02);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 s{k.point.x + U(gen), k.point.y + U(gen), k.point.z + U(gen)};
      for (Stage st : {Stage::translated, Stage::rectified, Stage::stretched, Stage::normal}) {
        const Vec3 back = inverse(k, forward(k, s, st), st);
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[j] - s[j]));
      }
      const Vec3 via = transform_state(k, transform_state(k, s, Direction::forward), Direction::inverse);
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(via[j] - s[j]));
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(inverse(k, {0.0, 1.0, -1.0 / k.k4}), InvalidArgument);
  }

  TEST_CASE_FIXTURE(Fixture, "Ito correction adds A4 G3^2 to the second component") {
    const Vec3 q{0.01, -0.003, 0.02};
    const Vec3 with = transformed_drift(k, q, true);
    const Vec3 without = transformed_drift(k, q, false);
    const Vec3 s = inverse(k, q);
    CHECK(with[0] == without[0]);
    CHECK(with[2] == without[2]);
    check_rel(with[1] - without[1], k.A4 * diffusion_approx_G_squared(p, State::from_vec(s))[2], 1e-6);
  }

  TEST_CASE_FIXTURE(Fixture, "drift is the model drift in the new coordinates") {
    // Chain rule through the affine steps: g1 = kappa (f1 - c11 zeta f3), g3 = zeta f3.
    const Vec3 q{0.004, 0.002, -0.003};
    const Vec3 s = inverse(k, q);
    const Vec3 f = drift(p, State::from_vec(s), Timescale::fast);
    const Vec3 g = transformed_drift(k, q);
    check_rel(g[0], k.kappa * (f[0] - k.c11 * f[2]), 1e-13);
    check_rel(g[2], f[2], 1e-15);
  }

  TEST_CASE_FIXTURE(Fixture, "finite-difference certification at delta = 1e-3") {
    const VerificationReport r = verify_normal_form(k, 1e-3);
    CHECK(r.tolerance == doctest::Approx(1e-3 + 5 * p.zeta));
    CHECK(r.leading_coefficients_pass());
    CHECK(std::abs(r.y.deviation()) < 1e-6);
    CHECK(std::abs(r.xx.deviation()) < 5e-3);
    CHECK(std::abs(r.xy.deviation()) < 1e-3);
    CHECK(std::abs(r.g1_constant.deviation()) < 1e-10);
    CHECK(r.g1_constant.expected == doctest::Approx(2.0 * k.point.x).epsilon(1e-15));
    CHECK(std::abs(r.g1_x.deviation()) < 1e-5);
    CHECK(std::abs(r.g1_y.deviation()) < 1e-5);
    CHECK(std::abs(r.g1_z.deviation()) < 1e-3);
    CHECK(std::abs(r.f2_x.deviation()) < 1e-3);
    CHECK(std::abs(r.f2_y.deviation()) < 1e-6);
    CHECK(std::abs(r.f2_z.deviation()) < 1e-3);
    CHECK(std::abs(r.f3_const.deviation()) < 1e-8);
    CHECK(std::abs(r.f3_x.deviation()) < 1e-5);
    CHECK(std::abs(r.f3_z.deviation()) < 1e-3);
    CHECK(r.round_trip_error < 1e-12);
  }

  TEST_CASE_FIXTURE(Fixture, "Taylor remainder of g1 is cubic") {
    const double r1 = cubic_remainder(k, 1e-3);
    const double r2 = cubic_remainder(k, 1e-2);
    CHECK(r1 > 0.0);
    const double slope = std::log10(r2 / r1);
    CHECK(slope > 2.5);
    CHECK(slope < 3.5);
  }

  TEST_CASE_FIXTURE(Fixture, "invalid inputs") {
    CHECK_THROWS_AS(verify_normal_form(k, 0.0), InvalidArgument);
    CHECK_THROWS_AS(verify_normal_form(k, 0.1), InvalidArgument);
    auto off = fs;
    off.point.y += 1e-3;
    CHECK_THROWS_AS(compute_constants(p, off, n), InvalidArgument);
    CHECK_THROWS_AS(chi_vs_h(p, {2.3, 2.4, 0.05}, -1), InvalidArgument);
  }

  TEST_CASE("chi along the folded-node branch") {
    const auto base = reference_parameters(2.3);
    const auto rows = chi_vs_h(base, {2.3, oracle::kFsn2, 0.01}, 4);
    REQUIRE(rows.size() > 40);
    for (const auto& row : rows) {
      REQUIRE(row.chi.size() == 5);
      for (std::size_t kk = 0; kk + 1 < row.chi.size(); ++kk) {
        if (row.chi[kk] > 0.0) CHECK(row.chi[kk] > row.chi[kk + 1]);
      }
    }
    CHECK(rows.front().mu == doctest::Approx(oracle::kFoldedNodeMu23).epsilon(1e-8));
    CHECK(rows.back().chi[0] < 0.06);
    CHECK(rows.back().chi[0] < rows.front().chi[0]);
    CHECK_THROWS_AS(chi_vs_h(base, {2.3, 2.9, 0.05}, 2), Error);
  }
}
