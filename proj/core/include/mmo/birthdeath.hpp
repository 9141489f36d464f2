#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mmo/types.hpp"

namespace mmo::birthdeath {

/// Individual counts and the population scales that convert them to densities.
struct DiscreteState {
  std::int64_t n_x = 0;
  std::int64_t n_y = 0;
  std::int64_t n_z = 0;
  Vec3 omega{1.0, 1.0, 1.0};

  State densities() const;
  std::array<std::int64_t, 3> counts() const { return {n_x, n_y, n_z}; }

  /// Nearest-integer counts for the given densities.
  static DiscreteState from_densities(const State& s, const Vec3& omega);
};

/// (P(+1), P(-1), P(0)) for one event of each species.
struct EventProbabilities {
  double up;
  double down;
  double none;
};

std::array<EventProbabilities, 3> event_probabilities(const ModelParams& p, const State& s);

/// How events of one species are spaced in time.
///   regular:     deterministic spacing 1/(lambda_i D_i), random initial phase.
///   exponential: Gillespie clock with rate lambda_i D_i.
/// lambda = (omega1/zeta, omega2, omega3) and D_i = 1 + gain_i + loss_i is the
/// normaliser of species i's outcome probabilities.
enum class Clock { regular, exponential };

std::string_view to_string(Clock c);
Clock parse_clock(std::string_view text);

/// Per-species base rates lambda_i.
Vec3 base_rates(const ModelParams& p, const Vec3& omega);

struct ChainOptions {
  Clock clock = Clock::regular;
  bool record = false;
  /// Refuse to run when the expected number of events exceeds this.
  double event_budget = 1e10;
};

struct ChainResult {
  DiscreteState final_state;
  std::array<std::int64_t, 3> events{0, 0, 0};
  /// Filled only with ChainOptions::record: the state after every count change.
  std::vector<double> times;
  std::vector<std::array<std::int64_t, 3>> path;
};

/// Simulates the chain over [0, horizon] (slow time) with its own uniform
/// stream (seed, stream). A species whose count reaches 0 never changes again.
ChainResult simulate_chain(const ModelParams& p, const DiscreteState& start, double horizon,
                           std::uint64_t seed, std::uint64_t stream = 0,
                           const ChainOptions& opt = {});

struct Moments {
  Vec3 mean;
  Vec3 variance;
};

/// Density-increment moments over delta_s:
///   mean = (f1/zeta, f2, f3) delta_s
///   variance = (F1^2/(omega1 zeta), F2^2/omega2, F3^2/omega3) delta_s.
Moments increment_moments_analytic(const ModelParams& p, const State& s, const Vec3& omega,
                                   double delta_s);

/// Moments the exponential clock actually produces: same mean, variance
/// (gain + loss) lambda_i / omega_i^2 delta_s.
Moments increment_moments_exponential(const ModelParams& p, const State& s, const Vec3& omega,
                                      double delta_s);

struct ComparisonReport {
  State state;
  Vec3 omega;
  double delta_s = 0.0;
  std::size_t replicas = 0;
  Clock clock = Clock::regular;
  Moments analytic;
  Moments empirical;
  Vec3 mean_se;
  Vec3 variance_se;
  Vec3 z_mean;
  Vec3 z_variance;
  bool small_omega = false;
  bool pass = false;
};

/// Runs `replicas` chains from s over delta_s and compares the density
/// increments with the analytic moments (of the chosen clock). Standard errors:
/// sqrt(var/R) for means, sqrt((m4 - var^2)/R) for variances. pass iff every
/// |z| < 3. small_omega flags any omega_i < 1e3 where the Gaussian limit is
/// not expected to hold.
ComparisonReport compare_to_diffusion(const ModelParams& p, const State& s, const Vec3& omega,
                                      double delta_s, std::size_t replicas, std::uint64_t seed,
                                      Clock clock = Clock::regular);

}  // namespace mmo::birthdeath
