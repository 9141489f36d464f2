#include "mmo/birthdeath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mmo/error.hpp"
#include "mmo/model.hpp"
#include "mmo/parallel.hpp"
#include "mmo/rng.hpp"

namespace mmo::birthdeath {

namespace {

void check_omega(const Vec3& omega) {
  for (double w : omega) {
    if (!(w >= 10.0) || !std::isfinite(w)) {
      throw InvalidArgument("population scales must be finite and at least 10");
    }
  }
}

}  // namespace

State DiscreteState::densities() const {
  return {static_cast<double>(n_x) / omega[0], static_cast<double>(n_y) / omega[1],
          static_cast<double>(n_z) / omega[2]};
}

DiscreteState DiscreteState::from_densities(const State& s, const Vec3& omega) {
  s.validate();
  return {std::llround(s.x * omega[0]), std::llround(s.y * omega[1]), std::llround(s.z * omega[2]),
          omega};
}

std::array<EventProbabilities, 3> event_probabilities(const ModelParams& p, const State& s) {
  s.validate();
  const auto rates = kernel::species_rates(p, s.x, s.y, s.z);
  std::array<EventProbabilities, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const double d = rates[i].normaliser();
    out[i].up = rates[i].gain / d;
    out[i].down = rates[i].loss / d;
    out[i].none = 1.0 / d;
  }
  return out;
}

std::string_view to_string(Clock c) { return c == Clock::regular ? "regular" : "exponential"; }

Clock parse_clock(std::string_view text) {
  if (text == "regular") return Clock::regular;
  if (text == "exponential") return Clock::exponential;
  throw InvalidArgument("unknown clock '" + std::string(text) + "'");
}

Vec3 base_rates(const ModelParams& p, const Vec3& omega) {
  return {omega[0] / p.zeta, omega[1], omega[2]};
}

ChainResult simulate_chain(const ModelParams& p, const DiscreteState& start, double horizon,
                           std::uint64_t seed, std::uint64_t stream, const ChainOptions& opt) {
  p.validate();
  check_omega(start.omega);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be positive");
  }
  if (start.n_x < 0 || start.n_y < 0 || start.n_z < 0) {
    throw InvalidArgument("counts must be non-negative");
  }

  const Vec3 lambda = base_rates(p, start.omega);
  const Vec3 inv_omega{1.0 / start.omega[0], 1.0 / start.omega[1], 1.0 / start.omega[2]};
  std::array<std::int64_t, 3> n = start.counts();

  auto rates_of = [&](int i) {
    const double x = static_cast<double>(n[0]) * inv_omega[0];
    const double y = static_cast<double>(n[1]) * inv_omega[1];
    const double z = static_cast<double>(n[2]) * inv_omega[2];
    return kernel::species_rates(p, x, y, z)[static_cast<std::size_t>(i)];
  };

  {
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) expected += lambda[i] * rates_of(i).normaliser() * horizon;
    if (expected > opt.event_budget) {
      throw BudgetError("expected " + std::to_string(expected) + " events exceed the budget of " +
                        std::to_string(opt.event_budget));
    }
  }

  ChainResult res;
  if (opt.record) {
    res.times.push_back(0.0);
    res.path.push_back(n);
  }
  UniformStream rng(seed, stream);

  // One event of species i at time t: +1 / -1 / 0 with the current probabilities.
  auto fire = [&](int i, double t) {
    const SpeciesRates r = rates_of(i);
    const double u = rng.next() * r.normaliser();
    ++res.events[static_cast<std::size_t>(i)];
    int change = 0;
    if (u < r.gain) {
      change = 1;
    } else if (u < r.gain + r.loss) {
      change = -1;
    }
    if (change != 0) {
      n[static_cast<std::size_t>(i)] = std::max<std::int64_t>(0, n[static_cast<std::size_t>(i)] + change);
      if (opt.record) {
        res.times.push_back(t);
        res.path.push_back(n);
      }
    }
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  if (opt.clock == Clock::regular) {
    std::array<double, 3> next{};
    for (int i = 0; i < 3; ++i) {
      next[static_cast<std::size_t>(i)] =
          n[static_cast<std::size_t>(i)] == 0 ? inf : rng.next() / (lambda[i] * rates_of(i).normaliser());
    }
    while (true) {
      const auto it = std::min_element(next.begin(), next.end());
      const double t = *it;
      if (t > horizon) break;
      const int i = static_cast<int>(it - next.begin());
      fire(i, t);
      next[static_cast<std::size_t>(i)] =
          n[static_cast<std::size_t>(i)] == 0 ? inf : t + 1.0 / (lambda[i] * rates_of(i).normaliser());
    }
  } else {
    double t = 0.0;
    while (true) {
      std::array<double, 3> r{};
      double total = 0.0;
      for (int i = 0; i < 3; ++i) {
        r[static_cast<std::size_t>(i)] =
            n[static_cast<std::size_t>(i)] == 0 ? 0.0 : lambda[i] * rates_of(i).normaliser();
        total += r[static_cast<std::size_t>(i)];
      }
      if (total == 0.0) break;
      t += -std::log(rng.next()) / total;
      if (t > horizon) break;
      const double pick = rng.next() * total;
      const int i = pick < r[0] ? 0 : (pick < r[0] + r[1] ? 1 : 2);
      fire(i, t);
    }
  }
  res.final_state = start;
  res.final_state.n_x = n[0];
  res.final_state.n_y = n[1];
  res.final_state.n_z = n[2];
  return res;
}

namespace {

void check_moment_inputs(const State& s, const Vec3& omega, double delta_s) {
  s.validate();
  for (double w : omega) {
    if (!(w > 0.0)) throw InvalidArgument("population scales must be positive");
  }
  if (!(delta_s > 0.0)) throw InvalidArgument("delta_s must be positive");
  if (delta_s > 1e-2) throw InvalidArgument("delta_s must not exceed 1e-2");
}

}  // namespace

Moments increment_moments_analytic(const ModelParams& p, const State& s, const Vec3& omega,
                                   double delta_s) {
  check_moment_inputs(s, omega, delta_s);
  const auto r = kernel::species_rates(p, s.x, s.y, s.z);
  Moments m{};
  m.mean = {r[0].net() / p.zeta * delta_s, r[1].net() * delta_s, r[2].net() * delta_s};
  m.variance = {r[0].variance() / (omega[0] * p.zeta) * delta_s,
                r[1].variance() / omega[1] * delta_s, r[2].variance() / omega[2] * delta_s};
  return m;
}

Moments increment_moments_exponential(const ModelParams& p, const State& s, const Vec3& omega,
                                      double delta_s) {
  Moments m = increment_moments_analytic(p, s, omega, delta_s);
  const auto r = kernel::species_rates(p, s.x, s.y, s.z);
  const Vec3 lambda = base_rates(p, omega);
  for (int i = 0; i < 3; ++i) {
    m.variance[i] = (r[i].gain + r[i].loss) * lambda[i] / (omega[i] * omega[i]) * delta_s;
  }
  return m;
}

ComparisonReport compare_to_diffusion(const ModelParams& p, const State& s, const Vec3& omega,
                                      double delta_s, std::size_t replicas, std::uint64_t seed,
                                      Clock clock) {
  p.validate();
  if (!(delta_s > 0.0)) throw InvalidArgument("delta_s must be positive");
  if (replicas < 1000) throw InvalidArgument("at least 1000 replicas are required");
  check_omega(omega);

  const DiscreteState start = DiscreteState::from_densities(s, omega);
  const State s0 = start.densities();

  ComparisonReport rep;
  rep.state = s0;
  rep.omega = omega;
  rep.delta_s = delta_s;
  rep.replicas = replicas;
  rep.clock = clock;
  rep.analytic = clock == Clock::regular ? increment_moments_analytic(p, s0, omega, delta_s)
                                         : increment_moments_exponential(p, s0, omega, delta_s);

  std::vector<Vec3> inc(replicas);
  ChainOptions opt;
  opt.clock = clock;
  parallel_for(replicas, [&](std::size_t r) {
    const ChainResult res = simulate_chain(p, start, delta_s, seed, r, opt);
    const State s1 = res.final_state.densities();
    inc[r] = {s1.x - s0.x, s1.y - s0.y, s1.z - s0.z};
  });

  const double R = static_cast<double>(replicas);
  for (int i = 0; i < 3; ++i) {
    double mean = 0.0;
    for (const auto& v : inc) mean += v[i];
    mean /= R;
    double m2 = 0.0, m4 = 0.0;
    for (const auto& v : inc) {
      const double d = v[i] - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double var = m2 / (R - 1.0);
    m4 /= R;
    rep.empirical.mean[i] = mean;
    rep.empirical.variance[i] = var;
    rep.mean_se[i] = std::sqrt(var / R);
    rep.variance_se[i] = std::sqrt(std::max(m4 - var * var, 0.0) / R);
    rep.z_mean[i] = rep.mean_se[i] > 0.0 ? (mean - rep.analytic.mean[i]) / rep.mean_se[i]
                                         : (mean == rep.analytic.mean[i] ? 0.0 : INFINITY);
    rep.z_variance[i] = rep.variance_se[i] > 0.0
                            ? (var - rep.analytic.variance[i]) / rep.variance_se[i]
                            : (var == rep.analytic.variance[i] ? 0.0 : INFINITY);
  }
  rep.small_omega = *std::min_element(omega.begin(), omega.end()) < 1e3;
  rep.pass = true;
  for (int i = 0; i < 3; ++i) {
    rep.pass = rep.pass && std::abs(rep.z_mean[i]) < 3.0 && std::abs(rep.z_variance[i]) < 3.0;
  }
  return rep;
}

}  // namespace mmo::birthdeath
