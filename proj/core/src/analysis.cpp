#include "mmo/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mmo/error.hpp"
#include "mmo/io.hpp"
#include "mmo/parallel.hpp"

namespace mmo::analysis {

std::string_view to_string(OscillationKind k) { return k == OscillationKind::SAO ? "SAO" : "LAO"; }

namespace {

std::vector<double> median_filter(std::span<const double> x, int window) {
  if (window <= 1) return {x.begin(), x.end()};
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
  std::array<double, 64> buf{};
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    const auto len = hi - lo + 1;
    std::copy(x.begin() + lo, x.begin() + hi + 1, buf.begin());
    std::nth_element(buf.begin(), buf.begin() + len / 2, buf.begin() + len);
    out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(len / 2)];
  }
  return out;
}

struct Extremum {
  std::size_t index;
  bool is_max;
};

}  // namespace

std::vector<OscillationEvent> classify_oscillations(std::span<const double> t,
                                                    std::span<const double> x,
                                                    const ClassifierOptions& opt) {
  if (t.size() != x.size()) throw InvalidArgument("time and value series differ in length");
  if (opt.median_window < 1 || opt.median_window % 2 == 0 || opt.median_window > 63) {
    throw InvalidArgument("median window must be odd and in [1, 63]");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(std::abs(x[i] - x[i - 1]) < opt.max_sample_jump)) {
      throw InvalidArgument("undersampled trajectory: |dx| = " +
                            std::to_string(std::abs(x[i] - x[i - 1])) + " at t = " +
                            std::to_string(t[i]));
    }
  }
  if (x.size() < 3) return {};

  const std::vector<double> xs = median_filter(x, opt.median_window);
  const double thr = opt.sao_amplitude;

  enum class Trend { unknown, up, down };
  Trend trend = Trend::unknown;
  std::vector<Extremum> ext;
  std::size_t lo = 0, hi = 0, cand = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = xs[i];
    switch (trend) {
      case Trend::unknown:
        if (v < xs[lo]) lo = i;
        if (v > xs[hi]) hi = i;
        // The running extremum of the opening leg is not a turning point of
        // a full oscillation, so it is not recorded.
        if (v - xs[lo] > thr) {
          trend = Trend::up;
          cand = i;
        } else if (xs[hi] - v > thr) {
          trend = Trend::down;
          cand = i;
        }
        break;
      case Trend::up:
        if (v > xs[cand]) {
          cand = i;
        } else if (xs[cand] - v > thr) {
          ext.push_back({cand, true});
          trend = Trend::down;
          cand = i;
        }
        break;
      case Trend::down:
        if (v < xs[cand]) {
          cand = i;
        } else if (v - xs[cand] > thr) {
          ext.push_back({cand, false});
          trend = Trend::up;
          cand = i;
        }
        break;
    }
  }
  // The last maximum is already confirmed; the running minimum closes it.
  if (trend == Trend::down && !ext.empty() && ext.back().is_max) ext.push_back({cand, false});

  std::vector<OscillationEvent> events;
  for (std::size_t k = 1; k + 1 < ext.size(); ++k) {
    if (!ext[k].is_max) continue;
    const std::size_t before = ext[k - 1].index;
    const std::size_t peak = ext[k].index;
    const std::size_t after = ext[k + 1].index;
    OscillationEvent e;
    e.peak = xs[peak];
    e.amplitude = e.peak - std::max(xs[before], xs[after]);
    e.t_start = t[before];
    e.t_peak = t[peak];
    e.t_end = t[after];
    e.kind = e.peak >= opt.lao_peak ? OscillationKind::LAO : OscillationKind::SAO;
    events.push_back(e);
  }
  return events;
}

std::vector<OscillationEvent> classify_oscillations(const Trajectory& traj,
                                                    const ClassifierOptions& opt) {
  std::vector<double> x(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) x[i] = traj.states[i].x;
  return classify_oscillations(traj.times, x, opt);
}

std::vector<int> sao_counts_between_spikes(std::span<const OscillationEvent> events) {
  std::vector<int> out;
  bool seen_lao = false;
  int saos = 0;
  for (const auto& e : events) {
    if (e.kind == OscillationKind::LAO) {
      if (seen_lao) out.push_back(saos);
      seen_lao = true;
      saos = 0;
    } else {
      ++saos;
    }
  }
  return out;
}

void SaoHistogram::add(int n, std::int64_t times) {
  if (n < 0) throw InvalidArgument("SAO counts are non-negative");
  if (times <= 0) return;
  counts[n] += times;
  total += times;
}

void SaoHistogram::merge(const SaoHistogram& other) {
  for (const auto& [n, c] : other.counts) add(n, c);
  n_paths += other.n_paths;
}

int SaoHistogram::min_n() const {
  if (counts.empty()) throw InvalidArgument("empty histogram");
  return counts.begin()->first;
}

int SaoHistogram::max_n() const {
  if (counts.empty()) throw InvalidArgument("empty histogram");
  return counts.rbegin()->first;
}

double SaoHistogram::quantile(double q) const {
  if (counts.empty()) throw InvalidArgument("empty histogram");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile must lie in [0,1]");
  const auto rank = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(q * static_cast<double>(total))));
  std::int64_t seen = 0;
  for (const auto& [n, c] : counts) {
    seen += c;
    if (seen >= rank) return n;
  }
  return counts.rbegin()->first;
}

int SaoHistogram::mode() const {
  if (counts.empty()) throw InvalidArgument("empty histogram");
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

SaoHistogram build_histogram(std::span<const std::vector<int>> per_path) {
  SaoHistogram h;
  for (const auto& path : per_path) {
    for (int n : path) h.add(n);
    ++h.n_paths;
  }
  return h;
}

void write_histogram_csv(const SaoHistogram& h, const std::string& path) {
  io::CsvWriter csv(path, {"N", "count"});
  for (const auto& [n, c] : h.counts) {
    csv.cell(static_cast<long long>(n)).cell(static_cast<long long>(c));
    csv.end_row();
  }
  csv.close();
}

std::vector<std::vector<int>> ensemble_sao_counts(const ModelParams& p, const NoiseParams& n,
                                                  const SimConfig& cfg, std::size_t count,
                                                  const ClassifierOptions& opt) {
  if (count == 0) throw InvalidArgument("ensemble count must be at least 1");
  p.validate();
  n.validate();
  cfg.validate();
  std::vector<std::vector<int>> out(count);
  parallel_for(count, [&](std::size_t i) {
    std::vector<double> ts, xs;
    const auto expected = static_cast<std::size_t>(cfg.step_count()) / cfg.thinning + 2;
    ts.reserve(expected);
    xs.reserve(expected);
    simulate_em(p, n, cfg, PhiloxBrownian(cfg.seed, i), [&](double t, const State& s) {
      ts.push_back(t);
      xs.push_back(s.x);
      return true;
    });
    const auto events = classify_oscillations(ts, xs, opt);
    out[i] = sao_counts_between_spikes(events);
  });
  return out;
}

std::string_view to_string(ReturnStatus s) {
  switch (s) {
    case ReturnStatus::ok: return "ok";
    case ReturnStatus::timeout: return "timeout";
    case ReturnStatus::extinct: return "extinct";
  }
  return "unknown";
}

void ReturnMapConfig::validate() const {
  if (grid_size < 2) throw InvalidArgument("return-map grid needs at least 2 points");
  if (!(z_lo < z_hi)) throw InvalidArgument("return-map z range must satisfy z_lo < z_hi");
  if (!(ds > 0.0) || !(timeout > ds)) throw InvalidArgument("need 0 < ds < timeout");
  if (!(exclusion > 0.0)) throw InvalidArgument("exclusion window must be positive");
  if (!(section_x > 0.0) || !(y0 >= 0.0) || !(z_lo >= 0.0)) {
    throw InvalidArgument("section start must lie in the first quadrant");
  }
}

ReturnMapSample first_return(const ModelParams& p, const NoiseParams& n,
                             const ReturnMapConfig& cfg, double z0, std::uint64_t path) {
  p.validate();
  n.validate();
  cfg.validate();
  const State start{cfg.section_x, cfg.y0, z0};
  start.validate();

  SimConfig sim;
  sim.dt = cfg.ds;
  sim.t_end = cfg.timeout;
  sim.timescale = Timescale::slow;
  sim.scheme = Scheme::euler_maruyama;
  sim.seed = cfg.seed;
  sim.initial = start;
  sim.boundary_policy = BoundaryPolicy::absorb;

  const double xs = cfg.section_x;
  const double dir = kernel::reaction_terms(p, start.x, start.y, start.z)[0] >= 0.0 ? 1.0 : -1.0;

  ReturnMapSample out;
  out.z0 = z0;
  out.seed = cfg.seed;
  out.path = path;
  bool left = false;
  bool found = false;
  double t_prev = 0.0;
  State prev = start;
  const auto outcome =
      simulate_em(p, n, sim, PhiloxBrownian(cfg.seed, path), [&](double t, const State& s) {
        if (!left) {
          left = std::abs(s.x - xs) > cfg.exclusion;
        } else if (dir * (prev.x - xs) < 0.0 && dir * (s.x - xs) >= 0.0) {
          const double theta = (xs - prev.x) / (s.x - prev.x);
          out.x1 = prev.x + theta * (s.x - prev.x);
          out.y1 = prev.y + theta * (s.y - prev.y);
          out.z1 = prev.z + theta * (s.z - prev.z);
          out.return_time = t_prev + theta * (t - t_prev);
          found = true;
          return false;
        }
        prev = s;
        t_prev = t;
        return true;
      });
  if (!found) {
    out.status = outcome.extinct ? ReturnStatus::extinct : ReturnStatus::timeout;
    out.x1 = out.y1 = out.z1 = out.return_time = std::nan("");
  }
  return out;
}

std::vector<ReturnMapSample> return_map(const ModelParams& p, const NoiseParams& n,
                                        const ReturnMapConfig& cfg) {
  cfg.validate();
  std::vector<ReturnMapSample> out(cfg.grid_size);
  const double step = (cfg.z_hi - cfg.z_lo) / static_cast<double>(cfg.grid_size - 1);
  parallel_for(cfg.grid_size, [&](std::size_t i) {
    const double z0 = i + 1 == cfg.grid_size ? cfg.z_hi : cfg.z_lo + step * static_cast<double>(i);
    out[i] = first_return(p, n, cfg, z0, i);
  });
  return out;
}

double median_second_difference(std::span<const ReturnMapSample> samples) {
  std::vector<double> d;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    const auto& c = samples[i + 1];
    if (a.status != ReturnStatus::ok || b.status != ReturnStatus::ok ||
        c.status != ReturnStatus::ok) {
      continue;
    }
    d.push_back(std::abs(c.z1 - 2.0 * b.z1 + a.z1));
  }
  if (d.empty()) throw InvalidArgument("no three consecutive returns to difference");
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

void write_return_map_csv(std::span<const ReturnMapSample> samples, const std::string& path) {
  io::CsvWriter csv(path, {"z0", "y1", "z1", "return_time", "status"});
  for (const auto& s : samples) {
    csv.cell(s.z0).cell(s.y1).cell(s.z1).cell(s.return_time).cell(to_string(s.status));
    csv.end_row();
  }
  csv.close();
}

}  // namespace mmo::analysis
