#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmo/sde.hpp"
#include "mmo/types.hpp"

namespace mmo::analysis {

enum class OscillationKind { SAO, LAO };

std::string_view to_string(OscillationKind k);

struct OscillationEvent {
  OscillationKind kind;
  double t_start;
  double t_peak;
  double t_end;
  /// Peak minus the higher of the two neighbouring troughs.
  double amplitude;
  double peak;
};

struct ClassifierOptions {
  double sao_amplitude = 0.1;
  double lao_peak = 0.6;
  /// Odd median-filter window applied before extremum detection (1 disables).
  int median_window = 5;
  /// Largest allowed jump between consecutive raw samples.
  double max_sample_jump = 0.05;
};

/// Oscillation events of an x time series.
///
/// After median smoothing, turning points are located with a zig-zag filter:
/// a maximum is confirmed once x falls more than `sao_amplitude` below it,
/// a minimum once x rises more than `sao_amplitude` above it. Each confirmed
/// maximum between two troughs becomes one event [t_start, t_end); it is a LAO
/// when its peak reaches `lao_peak` and a SAO otherwise. A maximum seen before
/// the first confirmed trough is a partial oscillation and is dropped.
///
/// Throws InvalidArgument when consecutive samples differ by
/// `max_sample_jump` or more (the series is too coarse to resolve extrema).
std::vector<OscillationEvent> classify_oscillations(std::span<const double> t,
                                                    std::span<const double> x,
                                                    const ClassifierOptions& opt = {});

std::vector<OscillationEvent> classify_oscillations(const Trajectory& traj,
                                                    const ClassifierOptions& opt = {});

/// Number of SAOs strictly between each consecutive pair of LAOs.
std::vector<int> sao_counts_between_spikes(std::span<const OscillationEvent> events);

struct SaoHistogram {
  std::map<int, std::int64_t> counts;
  std::size_t n_paths = 0;
  std::int64_t total = 0;

  void add(int n, std::int64_t times = 1);
  void merge(const SaoHistogram& other);

  int min_n() const;
  int max_n() const;
  /// Lower and upper quartile of the pooled N values (nearest rank).
  double quantile(double q) const;
  double iqr() const { return quantile(0.75) - quantile(0.25); }
  int mode() const;
};

SaoHistogram build_histogram(std::span<const std::vector<int>> per_path);

void write_histogram_csv(const SaoHistogram& h, const std::string& path);

/// Gap counts N for each of `count` EM paths (path i uses stream i). Paths are
/// streamed through the classifier, so only one thinned x series per worker is
/// alive at a time.
std::vector<std::vector<int>> ensemble_sao_counts(const ModelParams& p, const NoiseParams& n,
                                                  const SimConfig& cfg, std::size_t count,
                                                  const ClassifierOptions& opt = {});

enum class ReturnStatus { ok, timeout, extinct };

std::string_view to_string(ReturnStatus s);

struct ReturnMapSample {
  double z0 = 0.0;
  /// Interpolated crossing point; x1 equals the section position up to rounding.
  double x1 = 0.0;
  double y1 = 0.0;
  double z1 = 0.0;
  double return_time = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  ReturnStatus status = ReturnStatus::ok;
};

struct ReturnMapConfig {
  double section_x = 0.18;
  double y0 = 0.22;
  double z_lo = 0.05;
  double z_hi = 0.18;
  std::size_t grid_size = 1000;
  /// Slow-time step and return-time budget.
  double ds = 1e-4;
  double timeout = 500.0;
  /// x must first move this far from the section before a crossing counts.
  double exclusion = 0.02;
  std::uint64_t seed = 0;

  void validate() const;
};

/// First return of the path started at (section_x, y0, z0) to the section,
/// crossing in the same direction as it departed (the sign of the x drift at
/// the start). The crossing point is linearly interpolated between the two
/// bracketing EM states. Uses stream `path` of cfg.seed and the absorb policy.
ReturnMapSample first_return(const ModelParams& p, const NoiseParams& n,
                             const ReturnMapConfig& cfg, double z0, std::uint64_t path);

/// first_return for grid_size equally spaced z0 in [z_lo, z_hi]; sample i uses
/// stream i, so two maps with the same seed share their Brownian paths.
std::vector<ReturnMapSample> return_map(const ModelParams& p, const NoiseParams& n,
                                        const ReturnMapConfig& cfg);

/// Median of |z1[i+1] - 2 z1[i] + z1[i-1]| over consecutive triples of `ok` samples.
double median_second_difference(std::span<const ReturnMapSample> samples);

void write_return_map_csv(std::span<const ReturnMapSample> samples, const std::string& path);

}  // namespace mmo::analysis
