#include "mmo/sde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmo/io.hpp"
#include "mmo/parallel.hpp"

namespace mmo {

std::string_view to_string(Scheme s) {
  return s == Scheme::rk4_deterministic ? "rk4" : "em";
}

std::string_view to_string(BoundaryPolicy b) {
  return b == BoundaryPolicy::reflect_to_zero ? "reflect_to_zero" : "absorb";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "rk4" || text == "rk4_deterministic") return Scheme::rk4_deterministic;
  if (text == "em" || text == "euler_maruyama") return Scheme::euler_maruyama;
  throw InvalidArgument("unknown scheme '" + std::string(text) + "' (expected rk4 or em)");
}

BoundaryPolicy parse_boundary_policy(std::string_view text) {
  if (text == "reflect_to_zero" || text == "reflect") return BoundaryPolicy::reflect_to_zero;
  if (text == "absorb") return BoundaryPolicy::absorb;
  throw InvalidArgument("unknown boundary policy '" + std::string(text) + "'");
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end > dt) || !std::isfinite(t_end)) throw InvalidArgument("t_end must exceed dt");
  if (thinning == 0) throw InvalidArgument("thinning must be at least 1");
  initial.validate();
}

std::int64_t SimConfig::step_count() const {
  return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

namespace detail {

void throw_step_too_large(double t, int component, double change) {
  throw IntegrationError("step size too large: drift moves component " +
                             std::to_string(component) + " by " + std::to_string(change) +
                             " in one step at t = " + std::to_string(t),
                         t);
}

void throw_non_finite(double t) {
  throw IntegrationError("non-finite state after t = " + std::to_string(t), t);
}

}  // namespace detail

namespace {

Vec3 rhs(const ModelParams& p, const Vec3& s, Timescale ts) {
  const Vec3 f = kernel::reaction_terms(p, s[0], s[1], s[2]);
  if (ts == Timescale::slow) return {f[0] / p.zeta, f[1], f[2]};
  return {f[0], p.zeta * f[1], p.zeta * f[2]};
}

Vec3 axpy(const Vec3& x, double a, const Vec3& y) {
  return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
}

}  // namespace

Trajectory integrate_deterministic(const ModelParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  if (cfg.scheme != Scheme::rk4_deterministic) {
    throw InvalidArgument("integrate_deterministic requires scheme rk4");
  }
  const std::int64_t steps = cfg.step_count();
  const double h = cfg.dt;
  Trajectory traj;
  traj.timescale = cfg.timescale;
  traj.seed = cfg.seed;
  traj.times.reserve(static_cast<std::size_t>(steps) / cfg.thinning + 2);
  traj.states.reserve(traj.times.capacity());
  traj.times.push_back(0.0);
  traj.states.push_back(cfg.initial);

  Vec3 x = cfg.initial.as_vec();
  for (std::int64_t step = 0; step < steps; ++step) {
    const Vec3 k1 = rhs(p, x, cfg.timescale);
    const Vec3 k2 = rhs(p, axpy(x, h / 2, k1), cfg.timescale);
    const Vec3 k3 = rhs(p, axpy(x, h / 2, k2), cfg.timescale);
    const Vec3 k4 = rhs(p, axpy(x, h, k3), cfg.timescale);
    bool hit_zero = false;
    for (int i = 0; i < 3; ++i) {
      double next = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (!std::isfinite(next)) detail::throw_non_finite(static_cast<double>(step) * h);
      if (next <= 0.0) {
        hit_zero = hit_zero || x[i] > 0.0;
        next = 0.0;
      }
      x[i] = next;
    }
    const double t = static_cast<double>(step + 1) * h;
    const bool last = step + 1 == steps;
    const bool stop = hit_zero && cfg.boundary_policy == BoundaryPolicy::absorb;
    if (stop || last || (step + 1) % static_cast<std::int64_t>(cfg.thinning) == 0) {
      traj.times.push_back(t);
      traj.states.push_back(State::from_vec(x));
    }
    if (stop) {
      traj.extinct = true;
      break;
    }
  }
  return traj;
}

Trajectory integrate_em(const ModelParams& p, const NoiseParams& n, const SimConfig& cfg,
                        std::uint64_t path) {
  p.validate();
  n.validate();
  cfg.validate();
  if (cfg.scheme != Scheme::euler_maruyama) {
    throw InvalidArgument("integrate_em requires scheme em");
  }
  Trajectory traj;
  traj.timescale = cfg.timescale;
  traj.seed = cfg.seed;
  traj.path = path;
  const auto expected = static_cast<std::size_t>(cfg.step_count()) / cfg.thinning + 2;
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  const auto outcome = simulate_em(p, n, cfg, PhiloxBrownian(cfg.seed, path),
                                   [&](double t, const State& s) {
                                     traj.times.push_back(t);
                                     traj.states.push_back(s);
                                     return true;
                                   });
  traj.extinct = outcome.extinct;
  return traj;
}

std::vector<Trajectory> run_ensemble(const ModelParams& p, const NoiseParams& n,
                                     const SimConfig& cfg, std::size_t count) {
  if (count == 0) throw InvalidArgument("ensemble count must be at least 1");
  p.validate();
  n.validate();
  cfg.validate();
  std::vector<Trajectory> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = integrate_em(p, n, cfg, i); });
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  io::CsvWriter csv(path, {"t", "x", "y", "z"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const State& s = traj.states[i];
    const double row[4] = {traj.times[i], s.x, s.y, s.z};
    csv.row(row);
  }
  csv.close();
}

}  // namespace mmo
