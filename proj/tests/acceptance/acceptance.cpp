// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion NAME]... [--out-dir DIR] [--list]
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "mmo/analysis.hpp"
#include "mmo/birthdeath.hpp"
#include "mmo/io.hpp"
#include "mmo/model.hpp"
#include "mmo/normalform.hpp"
#include "mmo/parallel.hpp"
#include "mmo/sde.hpp"
#include "mmo/slowfast.hpp"

namespace fs = std::filesystem;
using namespace mmo;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome(const fs::path&)> run;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string fmt3(const Vec3& v, int digits = 3) {
  return "(" + fmt(v[0], digits) + ", " + fmt(v[1], digits) + ", " + fmt(v[2], digits) + ")";
}

// Runs one `mmo` command and returns the first data row of the CSV it wrote.
std::vector<double> cli_first_row(const std::vector<std::string>& args, const fs::path& csv) {
  std::vector<std::string> full{"mmo"};
  full.insert(full.end(), args.begin(), args.end());
  const int code = cli::run(full);
  if (code != 0) throw std::runtime_error("mmo exited with code " + std::to_string(code));
  std::ifstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  return io::parse_double_list(row);
}

// ---------------------------------------------------------------------------

Outcome hopf(const fs::path& out) {
  const auto row = cli_first_row({"scan", "--what", "hopf", "--h-range", "2.5:2.8", "--out-dir",
                                  out.string()},
                                 out / "scan_hopf.csv");
  const double h = row.at(0);
  const double target = 2.6413;
  return {std::abs(h - target) <= 0.002,
          "h_H = " + fmt(h, 8) + ", target 2.6413 +- 0.002, |diff| = " + fmt(std::abs(h - target), 3)};
}

Outcome fsn2(const fs::path& out) {
  const auto row = cli_first_row({"scan", "--what", "fsn2", "--h-range", "2.6:2.8", "--out-dir",
                                  out.string()},
                                 out / "scan_fsn2.csv");
  const double h = row.at(0);
  return {std::abs(h - 2.722) <= 0.005, "h_FSN = " + fmt(h, 8) + ", target 2.722 +- 0.005"};
}

Outcome fold_identity(const fs::path&) {
  const auto p = reference_parameters(2.4);
  const slowfast::FoldCurve fc(p);
  double worst_u = 0.0, worst_ux = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double s = fc.lower() + (fc.upper() - fc.lower()) * i / (n - 1);
    const auto r = slowfast::manifold_residual(p, slowfast::fold_curve_point(fc, s));
    worst_u = std::max(worst_u, std::abs(r.u));
    worst_ux = std::max(worst_ux, std::abs(r.u_x));
  }
  const bool ends = fc.lower() == 0.25 && fc.upper() == 0.375;
  const bool zeros = fc.phi(fc.upper()) == 0.0 && fc.psi(fc.lower()) == 0.0;
  return {worst_u < 1e-10 && worst_ux < 1e-10 && ends && zeros,
          "max|u| = " + fmt(worst_u, 3) + ", max|u_x| = " + fmt(worst_ux, 3) + ", [a, b] = [" +
              fmt(fc.lower()) + ", " + fmt(fc.upper()) + "], phi(b) = " + fmt(fc.phi(fc.upper())) +
              ", psi(a) = " + fmt(fc.psi(fc.lower()))};
}

Outcome diffusion_oracle(const fs::path&) {
  const auto p = reference_parameters(2.4);
  // Interior state on the fast nullcline u = 0 (see README).
  const State s{0.3, 0.41454545454545455, 0.1};
  const auto r =
      birthdeath::compare_to_diffusion(p, s, {1e6, 1e6, 1e6}, 1e-3, 10000, 20240611);
  return {r.pass, "z(mean) = " + fmt3(r.z_mean) + ", z(var) = " + fmt3(r.z_variance)};
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Outcome integrator_orders(const fs::path&) {
  const auto p = reference_parameters(2.4);
  const State init{0.3, 0.3, 0.1};

  // RK4: differences of successive halvings shrink by 2^4.
  SimConfig rk;
  rk.scheme = Scheme::rk4_deterministic;
  rk.timescale = Timescale::fast;
  rk.t_end = 5.0;
  rk.initial = init;
  std::vector<Vec3> ends;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    rk.dt = dt;
    ends.push_back(integrate_deterministic(p, rk).states.back().as_vec());
  }
  std::vector<double> rk_orders;
  for (std::size_t i = 0; i + 2 < ends.size(); ++i) {
    double e1 = 0.0, e2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      e1 = std::max(e1, std::abs(ends[i][c] - ends[i + 1][c]));
      e2 = std::max(e2, std::abs(ends[i + 1][c] - ends[i + 2][c]));
    }
    rk_orders.push_back(std::log2(e1 / e2));
  }
  const double rk_order = rk_orders.back();

  // EM strong error against a fine path driven by the same Brownian increments.
  const NoiseParams n{0.3, 0.3, 0.3};
  const std::int64_t fine_steps = 4096;
  SimConfig em;
  em.timescale = Timescale::fast;
  em.t_end = 1.0;
  em.initial = init;
  em.seed = 99;
  em.thinning = 1u << 30;
  const std::vector<std::int64_t> factors{8, 16, 32, 64, 128, 256};
  std::vector<double> sq_err(factors.size(), 0.0);
  const std::size_t paths = 200;
  auto final_state = [&](const SimConfig& cfg, const auto& noise) {
    return simulate_em(p, n, cfg, noise, [](double, const State&) { return true; }).final_state;
  };
  for (std::size_t path = 0; path < paths; ++path) {
    PhiloxBrownian fine(em.seed, path);
    SimConfig cf = em;
    cf.dt = em.t_end / static_cast<double>(fine_steps);
    const State ref = final_state(cf, fine);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      SimConfig cc = em;
      cc.dt = cf.dt * static_cast<double>(factors[j]);
      const State s = final_state(cc, CoarsenedBrownian<PhiloxBrownian>(fine, factors[j]));
      sq_err[j] += std::pow(s.x - ref.x, 2) + std::pow(s.y - ref.y, 2) + std::pow(s.z - ref.z, 2);
    }
  }
  std::vector<double> log_dt, log_err;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    log_dt.push_back(std::log(em.t_end / fine_steps * factors[j]));
    log_err.push_back(0.5 * std::log(sq_err[j] / paths));
  }
  const double em_order = regression_slope(log_dt, log_err);
  return {rk_order >= 3.5 && rk_order <= 4.5 && em_order >= 0.3 && em_order <= 0.7,
          "RK4 exponent = " + fmt(rk_order, 4) + " (want [3.5, 4.5]), EM strong exponent = " +
              fmt(em_order, 4) + " (want [0.3, 0.7])"};
}

Outcome normal_form(const fs::path&) {
  const auto p = reference_parameters(2.3);
  const auto fs_ = slowfast::locate_folded_singularity(p);
  const auto k = normalform::compute_constants(p, fs_, {1e-6, 1e-3, 1e-4});
  const auto r = normalform::verify_normal_form(k, 1e-3);
  const bool g1 = std::abs(r.g1_constant.deviation()) <= 1e-10;
  const bool rt = r.round_trip_error <= 1e-12;
  return {r.leading_coefficients_pass() && g1 && rt,
          "Y " + fmt(r.y.value, 6) + " vs 1, X^2 " + fmt(r.xx.value, 6) + " vs 1, XY " +
              fmt(r.xy.value, 6) + " vs C = " + fmt(r.xy.expected, 6) + " (tol " +
              fmt(r.tolerance, 3) + "); G1^2 const dev " + fmt(r.g1_constant.deviation(), 3) +
              "; round trip " + fmt(r.round_trip_error, 3)};
}

analysis::SaoHistogram mmo_histogram(double h, const fs::path& out) {
  const auto p = reference_parameters(h);
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 2000.0;
  cfg.thinning = 10;
  cfg.seed = 2024;
  cfg.initial = coexistence_equilibrium(p);
  const auto per_path = analysis::ensemble_sao_counts(p, {1e-6, 3e-3, 3e-3}, cfg, 200);
  const auto hist = analysis::build_histogram(per_path);
  analysis::write_histogram_csv(hist, (out / ("histogram_h" + fmt(h) + ".csv")).string());
  return hist;
}

std::string describe(const analysis::SaoHistogram& h) {
  std::string s = "{";
  int shown = 0;
  for (const auto& [n, c] : h.counts) {
    if (shown++ == 8) {
      s += " ...";
      break;
    }
    s += (shown > 1 ? " " : "") + std::to_string(n) + ":" + std::to_string(c);
  }
  return s + "}";
}

Outcome mmo_statistics(const fs::path& out) {
  const auto low = mmo_histogram(2.4, out);
  const auto high = mmo_histogram(2.66, out);
  if (low.total == 0 || high.total == 0) {
    return {false, "no complete inter-spike interval observed (h=2.4: " + std::to_string(low.total) +
                       ", h=2.66: " + std::to_string(high.total) + ")"};
  }
  // Reverse J: mode at the smallest observed N and no increase over the first
  // five integer bins from there.
  const int n0 = low.min_n();
  bool non_increasing = true;
  auto freq = [&](int n) {
    const auto it = low.counts.find(n);
    return it == low.counts.end() ? std::int64_t{0} : it->second;
  };
  for (int n = n0; n < n0 + 4; ++n) non_increasing = non_increasing && freq(n + 1) <= freq(n);
  const bool j_shape = low.mode() == n0 && non_increasing;
  const double iqr = low.iqr();
  const int support = high.max_n() - high.min_n();
  const bool wide = support >= 3.0 * iqr;
  return {j_shape && wide,
          "h=2.4: " + std::to_string(low.total) + " gaps " + describe(low) + ", mode " +
              std::to_string(low.mode()) + ", IQR " + fmt(iqr) + "; h=2.66: " +
              std::to_string(high.total) + " gaps, support [" + std::to_string(high.min_n()) +
              ", " + std::to_string(high.max_n()) + "] width " + std::to_string(support) +
              " (want >= " + fmt(3.0 * iqr) + ")"};
}

Outcome return_map(const fs::path& out) {
  const auto p = reference_parameters(2.3);
  analysis::ReturnMapConfig cfg;
  cfg.seed = 3;
  cfg.grid_size = 1000;
  std::vector<double> medians;
  std::string detail;
  for (double s3 : {1e-4, 1e-2}) {
    const auto map = analysis::return_map(p, {1e-6, 1e-3, s3}, cfg);
    analysis::write_return_map_csv(map, (out / ("returnmap_sigma3_" + fmt(s3) + ".csv")).string());
    std::size_t ok = 0;
    for (const auto& r : map) ok += r.status == analysis::ReturnStatus::ok;
    medians.push_back(analysis::median_second_difference(map));
    detail += "sigma3=" + fmt(s3) + ": median|d2 z1| = " + fmt(medians.back(), 4) + " (" +
              std::to_string(ok) + "/1000 returned); ";
  }
  return {medians[1] < medians[0], detail};
}

Outcome chi_suite(const fs::path& out) {
  std::string detail;
  // Pointwise decrease in k.
  bool monotone = true;
  for (int i = 1; i <= 2000; ++i) {
    const double mu = std::pow(10.0, -8.0 + 8.0 * i / 2000.0);
    for (int k = 0; k < 6; ++k) monotone = monotone && slowfast::chi_k(mu, k) > slowfast::chi_k(mu, k + 1);
  }
  // Location of the maximum: golden-section search on log mu.
  bool argmax_ok = true;
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    auto f = [k](double lm) { return slowfast::chi_k(std::exp(lm), k); };
    double a = std::log(1e-8), b = 0.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    while (b - a > 1e-10) {
      if (f(c) > f(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - g * (b - a);
      d = a + g * (b - a);
    }
    const double found = std::exp(0.5 * (a + b));
    const double expected = 1.0 / (4.0 * (2 * k + 1) * (2 * k + 1));
    const double rel = std::abs(found / expected - 1.0);
    worst = std::max(worst, rel);
    argmax_ok = argmax_ok && rel < 1e-6;
  }
  // Decay towards the folded saddle-node.
  const auto base = reference_parameters(2.3);
  const double h_fsn = slowfast::scan_fsn2(base, {2.6, 2.8, 0.01}).h;
  bool decays = true;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (int e = 1; e <= 8; ++e) {
    const auto fs_ = slowfast::locate_folded_singularity(base.with_h(h_fsn - std::pow(10.0, -e)));
    const double chi = fs_.mu > 0.0 ? slowfast::chi_k(fs_.mu, 0) : 0.0;
    decays = decays && chi < prev;
    prev = last = chi;
  }
  decays = decays && last < 0.05;
  const auto rows = normalform::chi_vs_h(base, {2.3, h_fsn, 0.005}, 4);
  io::CsvWriter csv((out / "chi.csv").string(), {"h", "mu", "chi0", "chi1", "chi2", "chi3", "chi4"});
  for (const auto& r : rows) {
    csv.cell(r.h).cell(r.mu);
    for (double v : r.chi) csv.cell(v);
    csv.end_row();
  }
  csv.close();
  return {monotone && argmax_ok && decays,
          std::string("decreasing in k: ") + (monotone ? "yes" : "no") +
              ", worst argmax rel. error " + fmt(worst, 3) + ", chi_0 at h_FSN - 1e-8: " +
              fmt(last, 4)};
}

Outcome extinction(const fs::path&) {
  const auto p = reference_parameters(2.4);
  const NoiseParams n{1e-5, 1e-4, 1e-4};
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 2000.0;
  cfg.seed = 77;
  cfg.initial = {0.3, 0.3, 0.1};
  cfg.boundary_policy = BoundaryPolicy::reflect_to_zero;
  std::vector<double> min_component(100, 0.0);
  parallel_for(100, [&](std::size_t i) {
    double lo = std::numeric_limits<double>::infinity();
    simulate_em(p, n, cfg, PhiloxBrownian(cfg.seed, i), [&](double, const State& s) {
      lo = std::min({lo, s.x, s.y, s.z});
      return true;
    });
    min_component[i] = lo;
  });
  const double em_min = *std::min_element(min_component.begin(), min_component.end());

  // Chain: small predator populations die out and must stay extinct.
  birthdeath::ChainOptions opt;
  opt.record = true;
  const birthdeath::DiscreteState start{300, 3, 2, {1e3, 20, 20}};
  int extinctions = 0, revivals = 0;
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto res = birthdeath::simulate_chain(p, start, 20.0, 5, r, opt);
    for (int sp = 0; sp < 3; ++sp) {
      bool dead = false;
      for (const auto& c : res.path) {
        const auto v = c[static_cast<std::size_t>(sp)];
        if (dead && v != 0) ++revivals;
        if (v == 0 && !dead) {
          dead = true;
          ++extinctions;
        }
      }
    }
  }
  return {em_min >= 0.0 && revivals == 0 && extinctions > 0,
          "EM min component over 100 paths = " + fmt(em_min, 4) + "; chain extinctions " +
              std::to_string(extinctions) + ", revivals " + std::to_string(revivals)};
}

std::vector<Criterion> criteria() {
  return {
      {"hopf", 10, hopf},
      {"fsn2", 10, fsn2},
      {"fold-identity", 1, fold_identity},
      {"diffusion-oracle", 120, diffusion_oracle},
      {"integrator-orders", 60, integrator_orders},
      {"normal-form", 10, normal_form},
      {"mmo-statistics", 900, mmo_statistics},
      {"return-map", 900, return_map},
      {"chi", 1, chi_suite},
      {"extinction", 300, extinction},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<std::string> selected;
  std::string out_dir = "acceptance-output";
  bool list = false;
  app.add_option("--criterion", selected, "Run only these criteria");
  app.add_option("--out-dir", out_dir, "Directory for CSV outputs");
  app.add_flag("--list", list, "Print criterion names and exit");
  CLI11_PARSE(app, argc, argv);

  const auto all = criteria();
  if (list) {
    for (const auto& c : all) std::cout << c.name << '\n';
    return 0;
  }
  for (const auto& s : selected) {
    if (std::none_of(all.begin(), all.end(), [&](const Criterion& c) { return c.name == s; })) {
      std::cerr << "unknown criterion '" << s << "'\n";
      return 2;
    }
  }
  fs::create_directories(out_dir);

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(out_dir);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << fmt(secs, 3)
              << " s, budget " << fmt(c.budget_seconds) << " s"
              << (in_time ? "" : ", over budget") << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
