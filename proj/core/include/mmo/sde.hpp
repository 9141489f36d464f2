#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmo/error.hpp"
#include "mmo/model.hpp"
#include "mmo/rng.hpp"
#include "mmo/types.hpp"

namespace mmo {

enum class Scheme { rk4_deterministic, euler_maruyama };
enum class BoundaryPolicy { reflect_to_zero, absorb };

std::string_view to_string(Scheme s);
std::string_view to_string(BoundaryPolicy b);
Scheme parse_scheme(std::string_view text);
BoundaryPolicy parse_boundary_policy(std::string_view text);

struct SimConfig {
  double dt = 1e-4;
  double t_end = 2000.0;
  Timescale timescale = Timescale::slow;
  Scheme scheme = Scheme::euler_maruyama;
  std::uint64_t seed = 0;
  State initial{};
  BoundaryPolicy boundary_policy = BoundaryPolicy::reflect_to_zero;
  /// Keep every `thinning`-th step (the first and last states are always kept).
  std::size_t thinning = 1;

  void validate() const;
  /// Number of steps taken: ceil(t_end / dt).
  std::int64_t step_count() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  Timescale timescale = Timescale::slow;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  /// True when the absorb policy stopped the path early.
  bool extinct = false;

  std::size_t size() const { return times.size(); }
};

/// Classical RK4 on the drift of the chosen timescale. The boundary policy is
/// applied after each step. Throws IntegrationError on a non-finite state.
Trajectory integrate_deterministic(const ModelParams& p, const SimConfig& cfg);

/// Euler-Maruyama with normals from NormalTriples(cfg.seed, path).
Trajectory integrate_em(const ModelParams& p, const NoiseParams& n, const SimConfig& cfg,
                        std::uint64_t path = 0);

/// `count` EM paths; path i uses stream i. Output is ordered by path index and
/// does not depend on MMO_THREADS. Errors carry the failing path index.
std::vector<Trajectory> run_ensemble(const ModelParams& p, const NoiseParams& n,
                                     const SimConfig& cfg, std::size_t count);

/// Writes `t,x,y,z` rows.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// ---------------------------------------------------------------------------
// Generic Euler-Maruyama driver.
//
// The noise source is any callable step -> std::array<double,3> of standard
// normals; the sink is called as sink(t, state) for every kept sample and may
// return false to stop the path.

/// Default noise: the Philox stream of one path.
using PhiloxBrownian = NormalTriples;

/// Coarse-grid normals built from a fine source: step k of the coarse path
/// uses (xi_{km} + ... + xi_{km+m-1}) / sqrt(m), i.e. the same Brownian path
/// observed at m-times larger steps.
template <class Fine>
class CoarsenedBrownian {
 public:
  CoarsenedBrownian(Fine fine, std::int64_t factor)
      : fine_(std::move(fine)), factor_(factor), scale_(1.0 / std::sqrt(double(factor))) {}

  std::array<double, 3> operator()(std::int64_t step) const {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (std::int64_t j = 0; j < factor_; ++j) {
      const auto xi = fine_(step * factor_ + j);
      for (int i = 0; i < 3; ++i) acc[i] += xi[i];
    }
    for (auto& a : acc) a *= scale_;
    return acc;
  }

 private:
  Fine fine_;
  std::int64_t factor_;
  double scale_;
};

struct EmOutcome {
  double t_final = 0.0;
  State final_state{};
  std::int64_t steps = 0;
  bool extinct = false;
  bool stopped_by_sink = false;
};

namespace detail {

struct EmCoefficients {
  double drift_scale[3];
  double noise_scale[3];
};

inline EmCoefficients em_coefficients(const ModelParams& p, const NoiseParams& n, double dt,
                                      Timescale ts) {
  const double sq = std::sqrt(dt);
  const double sz = std::sqrt(p.zeta);
  if (ts == Timescale::slow) {
    return {{dt / p.zeta, dt, dt},
            {n.sigma1 / sz * sq, n.sigma2 * sq, n.sigma3 * sq}};
  }
  return {{dt, p.zeta * dt, p.zeta * dt},
          {n.sigma1 * sq, sz * n.sigma2 * sq, sz * n.sigma3 * sq}};
}

[[noreturn]] void throw_step_too_large(double t, int component, double change);
[[noreturn]] void throw_non_finite(double t);

}  // namespace detail

template <class Noise, class Sink>
EmOutcome simulate_em(const ModelParams& p, const NoiseParams& n, const SimConfig& cfg,
                      const Noise& noise, Sink&& sink) {
  const auto k = detail::em_coefficients(p, n, cfg.dt, cfg.timescale);
  const std::int64_t steps = cfg.step_count();
  const std::size_t thin = cfg.thinning;
  const bool absorb = cfg.boundary_policy == BoundaryPolicy::absorb;

  double x[3] = {cfg.initial.x, cfg.initial.y, cfg.initial.z};
  EmOutcome out;
  if (!sink(0.0, cfg.initial)) {
    out.final_state = cfg.initial;
    out.stopped_by_sink = true;
    return out;
  }
  std::size_t since_kept = 0;
  for (std::int64_t step = 0; step < steps; ++step) {
    const double t_prev = static_cast<double>(step) * cfg.dt;
    const auto [f, g] = kernel::drift_and_noise(p, x[0], x[1], x[2]);
    const auto xi = noise(step);
    bool hit_zero = false;
    for (int i = 0; i < 3; ++i) {
      const double move = f[i] * k.drift_scale[i];
      if (std::abs(move) > 0.5) detail::throw_step_too_large(t_prev, i, move);
      double next = x[i] + move + g[i] * k.noise_scale[i] * xi[i];
      if (!std::isfinite(next)) detail::throw_non_finite(t_prev);
      if (next <= 0.0 && x[i] > 0.0) {
        next = 0.0;
        hit_zero = true;
      } else if (next < 0.0) {
        next = 0.0;
      }
      x[i] = next;
    }
    const double t = static_cast<double>(step + 1) * cfg.dt;
    const State s{x[0], x[1], x[2]};
    ++since_kept;
    const bool last = step + 1 == steps;
    if (absorb && hit_zero) {
      out.extinct = true;
      out.t_final = t;
      out.final_state = s;
      out.steps = step + 1;
      sink(t, s);
      return out;
    }
    if (since_kept == thin || last) {
      since_kept = 0;
      if (!sink(t, s)) {
        out.t_final = t;
        out.final_state = s;
        out.steps = step + 1;
        out.stopped_by_sink = true;
        return out;
      }
    }
    if (last) {
      out.t_final = t;
      out.final_state = s;
      out.steps = steps;
    }
  }
  return out;
}

}  // namespace mmo
