#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmo/analysis.hpp"
#include "mmo/birthdeath.hpp"
#include "mmo/error.hpp"
#include "mmo/io.hpp"
#include "mmo/model.hpp"
#include "mmo/normalform.hpp"
#include "mmo/sde.hpp"
#include "mmo/slowfast.hpp"

#ifndef MMO_VERSION
#define MMO_VERSION "0.0.0"
#endif

namespace mmo::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Option parsing helpers

Vec3 parse_triple(const std::string& text, const char* what) {
  const auto v = io::parse_double_list(text);
  if (v.size() != 3) throw InvalidArgument(std::string(what) + " needs three comma separated values");
  return {v[0], v[1], v[2]};
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument(std::string(what) + " must be lo:hi");
  const double lo = io::parse_double(std::string_view(text).substr(0, colon));
  const double hi = io::parse_double(std::string_view(text).substr(colon + 1));
  if (!(lo < hi)) throw InvalidArgument(std::string(what) + " must satisfy lo < hi");
  return {lo, hi};
}

struct ModelOptions {
  ModelParams params = reference_parameters(2.4);

  void attach(CLI::App* app, double default_h) {
    params.h = default_h;
    app->add_option("--h", params.h, "Intraspecific competition of z");
    app->add_option("--zeta", params.zeta, "Timescale ratio");
    app->add_option("--beta1", params.beta1, "Semi-saturation constant of y");
    app->add_option("--beta2", params.beta2, "Semi-saturation constant of z");
    app->add_option("--c", params.c, "Death rate of y");
    app->add_option("--d", params.d, "Death rate of z");
  }
};

struct Context {
  fs::path out_dir = ".";
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;

  std::string path(const std::string& name) {
    const fs::path p = out_dir / name;
    outputs.push_back(p.string());
    return p.string();
  }
};

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path);
}

json to_json(const ModelParams& p) {
  return {{"zeta", p.zeta}, {"beta1", p.beta1}, {"beta2", p.beta2},
          {"c", p.c},       {"d", p.d},         {"h", p.h}};
}

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
json to_json(const State& s) { return {{"x", s.x}, {"y", s.y}, {"z", s.z}}; }

json to_json(const slowfast::FoldedSingularity& f) {
  return {{"s", f.s},
          {"point", to_json(f.point)},
          {"lambda_s", f.lambda_s},
          {"lambda_w", f.lambda_w},
          {"mu", f.mu},
          {"kind", slowfast::to_string(f.kind)}};
}

json to_json(const normalform::Coefficient& c) {
  return {{"value", c.value}, {"expected", c.expected}, {"deviation", c.deviation()}};
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  ModelOptions model;
  std::string scheme;
  std::string timescale = "slow";
  std::string sigma;
  std::string initial = "0.3,0.3,0.1";
  std::string boundary = "reflect_to_zero";
  double dt = 1e-4;
  double t_end = 2000.0;
  std::size_t thinning = 1;
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  std::string output = "trajectory.csv";
};

void cmd_simulate(const SimulateOptions& o, Context& ctx) {
  SimConfig cfg;
  cfg.scheme = parse_scheme(o.scheme);
  cfg.timescale = parse_timescale(o.timescale);
  cfg.boundary_policy = parse_boundary_policy(o.boundary);
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.thinning = o.thinning;
  cfg.seed = o.seed;
  cfg.initial = State::from_vec(parse_triple(o.initial, "--initial"));
  ctx.seed = o.seed;
  if (o.paths == 0) throw InvalidArgument("--paths must be at least 1");

  if (cfg.scheme == Scheme::rk4_deterministic) {
    if (!o.sigma.empty()) throw InvalidArgument("--sigma is only meaningful with --scheme em");
    const Trajectory traj = integrate_deterministic(o.model.params, cfg);
    write_trajectory_csv(traj, ctx.path(o.output));
    return;
  }
  if (o.sigma.empty()) throw InvalidArgument("--scheme em requires --sigma s1,s2,s3");
  const Vec3 s = parse_triple(o.sigma, "--sigma");
  const NoiseParams noise{s[0], s[1], s[2]};
  if (o.paths == 1) {
    write_trajectory_csv(integrate_em(o.model.params, noise, cfg, 0), ctx.path(o.output));
    return;
  }
  const auto ensemble = run_ensemble(o.model.params, noise, cfg, o.paths);
  const fs::path stem = fs::path(o.output).stem();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    write_trajectory_csv(ensemble[i], ctx.path(stem.string() + "_" + std::to_string(i) + ".csv"));
  }
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
  ModelOptions model;
  std::string what;
  std::string h_range;
  double h_step = 0.01;
  std::string output;
};

void cmd_scan(const ScanOptions& o, Context& ctx) {
  const auto [lo, hi] = parse_range(o.h_range, "--h-range");
  const slowfast::HRange range{lo, hi, o.h_step};
  range.validate();
  const ModelParams& base = o.model.params;
  const std::string out = o.output.empty() ? "scan_" + o.what + ".csv" : o.output;

  if (o.what == "hopf") {
    const auto r = slowfast::scan_hopf(base, range);
    io::CsvWriter csv(ctx.path(out), {"h", "x", "y", "z", "frequency"});
    csv.cell(r.h).cell(r.equilibrium.x).cell(r.equilibrium.y).cell(r.equilibrium.z).cell(r.frequency);
    csv.end_row();
    csv.close();
    std::cout << "hopf h = " << io::format_double(r.h) << '\n';
  } else if (o.what == "fsn2") {
    const auto r = slowfast::scan_fsn2(base, range);
    io::CsvWriter csv(ctx.path(out), {"h", "s", "x", "y", "z", "lambda_s", "lambda_w", "mu"});
    const auto& f = r.singularity;
    csv.cell(r.h).cell(f.s).cell(f.point.x).cell(f.point.y).cell(f.point.z);
    csv.cell(f.lambda_s).cell(f.lambda_w).cell(f.mu);
    csv.end_row();
    csv.close();
    std::cout << "fsn2 h = " << io::format_double(r.h) << '\n';
  } else if (o.what == "track") {
    const auto track = slowfast::track_folded_singularity(base, range);
    io::CsvWriter csv(ctx.path(out),
                      {"h", "s", "x", "y", "z", "lambda_s", "lambda_w", "mu", "kind"});
    for (const auto& tp : track) {
      const auto& f = tp.singularity;
      csv.cell(tp.h).cell(f.s).cell(f.point.x).cell(f.point.y).cell(f.point.z);
      csv.cell(f.lambda_s).cell(f.lambda_w).cell(f.mu).cell(slowfast::to_string(f.kind));
      csv.end_row();
    }
    csv.close();
  } else {
    throw InvalidArgument("--what must be hopf, fsn2 or track");
  }
}

// ---------------------------------------------------------------------------
// histogram

struct HistogramOptions {
  ModelOptions model;
  std::size_t paths = 200;
  std::string sigma = "1e-6,3e-3,3e-3";
  std::uint64_t seed = 0;
  double ds = 1e-4;
  double t_end = 2000.0;
  std::size_t thinning = 10;
  std::string output = "histogram.csv";
};

void cmd_histogram(const HistogramOptions& o, Context& ctx) {
  if (o.paths == 0) throw InvalidArgument("--paths must be at least 1");
  const Vec3 s = parse_triple(o.sigma, "--sigma");
  SimConfig cfg;
  cfg.dt = o.ds;
  cfg.t_end = o.t_end;
  cfg.thinning = o.thinning;
  cfg.seed = o.seed;
  cfg.initial = coexistence_equilibrium(o.model.params);
  ctx.seed = o.seed;

  const auto per_path = analysis::ensemble_sao_counts(o.model.params, {s[0], s[1], s[2]}, cfg, o.paths);
  const auto hist = analysis::build_histogram(per_path);
  analysis::write_histogram_csv(hist, ctx.path(o.output));

  io::CsvWriter per(ctx.path(fs::path(o.output).stem().string() + "_paths.csv"), {"path", "N"});
  for (std::size_t i = 0; i < per_path.size(); ++i) {
    for (int n : per_path[i]) {
      per.cell(static_cast<long long>(i)).cell(static_cast<long long>(n));
      per.end_row();
    }
  }
  per.close();

  std::cout << "gaps " << hist.total;
  if (hist.total > 0) {
    std::cout << ", N in [" << hist.min_n() << ", " << hist.max_n() << "], mode " << hist.mode()
              << ", IQR " << io::format_double(hist.iqr());
  }
  std::cout << '\n';
}

// ---------------------------------------------------------------------------
// returnmap

struct ReturnMapOptions {
  ModelOptions model;
  std::size_t grid = 1000;
  std::string sigma = "1e-6,1e-3,1e-4";
  std::uint64_t seed = 0;
  double section_x = 0.18;
  double y0 = 0.22;
  std::string z_range = "0.05:0.18";
  double ds = 1e-4;
  double timeout = 500.0;
  std::string output = "returnmap.csv";
};

void cmd_returnmap(const ReturnMapOptions& o, Context& ctx) {
  const Vec3 s = parse_triple(o.sigma, "--sigma");
  const auto [zlo, zhi] = parse_range(o.z_range, "--z-range");
  analysis::ReturnMapConfig cfg;
  cfg.grid_size = o.grid;
  cfg.seed = o.seed;
  cfg.section_x = o.section_x;
  cfg.y0 = o.y0;
  cfg.z_lo = zlo;
  cfg.z_hi = zhi;
  cfg.ds = o.ds;
  cfg.timeout = o.timeout;
  ctx.seed = o.seed;
  const auto samples = analysis::return_map(o.model.params, {s[0], s[1], s[2]}, cfg);
  analysis::write_return_map_csv(samples, ctx.path(o.output));
  std::size_t ok = 0;
  for (const auto& r : samples) ok += r.status == analysis::ReturnStatus::ok;
  std::cout << ok << " of " << samples.size() << " paths returned";
  if (ok >= 3) {
    std::cout << ", median |second difference| "
              << io::format_double(analysis::median_second_difference(samples));
  }
  std::cout << '\n';
}

// ---------------------------------------------------------------------------
// normalform

struct NormalFormOptions {
  ModelOptions model;
  std::string sigma = "1e-6,3e-3,3e-3";
  bool verify = false;
  double delta = 1e-3;
  std::string chi_range;
  std::string prefactor_range;
  double h_step = 0.005;
  int k_max = 4;
  std::string output = "normalform.json";
};

void cmd_normalform(const NormalFormOptions& o, Context& ctx) {
  const Vec3 s = parse_triple(o.sigma, "--sigma");
  const NoiseParams noise{s[0], s[1], s[2]};
  const ModelParams& p = o.model.params;
  const auto node = slowfast::locate_folded_singularity(p);
  const auto k = normalform::compute_constants(p, node, noise);

  json j;
  j["params"] = to_json(p);
  j["sigma"] = to_json(noise.sigmas());
  j["folded_singularity"] = to_json(node);
  j["constants"] = {{"A1", k.A1},   {"A2", k.A2},   {"A3", k.A3},       {"A4", k.A4},
                    {"B0", k.B0},   {"B1", k.B1},   {"B2", k.B2},       {"C", k.C},
                    {"C0", k.C0},   {"C1", k.C1},   {"D0", k.D0},       {"D1", k.D1},
                    {"D2", k.D2},   {"D3", k.D3},   {"D4", k.D4},       {"E0", k.E0},
                    {"kappa", k.kappa}, {"c11", k.c11}, {"c22", k.c22}, {"M", k.M},
                    {"L", json::array({k.L[0], k.L[1], k.L[2]})},       {"k4", k.k4}};
  const auto pre = normalform::noise_prefactors(p, noise, node);
  j["noise_prefactors"] = {{"sigma_F", to_json(pre.sigma_F)}, {"sigma_G", to_json(pre.sigma_G)}};

  if (o.verify) {
    const auto r = normalform::verify_normal_form(k, o.delta);
    j["verification"] = {
        {"delta", r.delta},
        {"tolerance", r.tolerance},
        {"drift1", {{"Y", to_json(r.y)}, {"X2", to_json(r.xx)}, {"XY", to_json(r.xy)},
                    {"Z2", r.zz}, {"cubic_remainder", r.cubic_remainder}}},
        {"drift2_over_zeta", {{"X", to_json(r.f2_x)}, {"Y", to_json(r.f2_y)},
                              {"Z", to_json(r.f2_z)}, {"Y_vs_A2", to_json(r.a2_printed)}}},
        {"drift3_over_zeta", {{"const", to_json(r.f3_const)}, {"X", to_json(r.f3_x)},
                              {"Z", to_json(r.f3_z)}}},
        {"G1_squared", {{"const", to_json(r.g1_constant)}, {"X", to_json(r.g1_x)},
                        {"Y", to_json(r.g1_y)}, {"Z", to_json(r.g1_z)}}},
        {"round_trip_error", r.round_trip_error},
        {"pass", r.leading_coefficients_pass()}};
  }
  write_json(j, ctx.path(o.output));

  if (!o.chi_range.empty()) {
    const auto [lo, hi] = parse_range(o.chi_range, "--chi-range");
    const auto rows = normalform::chi_vs_h(p, {lo, hi, o.h_step}, o.k_max);
    std::vector<std::string> header{"h", "mu"};
    for (int i = 0; i <= o.k_max; ++i) header.push_back("chi" + std::to_string(i));
    std::ofstream out(ctx.path("chi.csv"));
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
      out << io::format_double(r.h) << ',' << io::format_double(r.mu);
      for (double c : r.chi) out << ',' << io::format_double(c);
      out << '\n';
    }
    if (!out) throw Error("failed writing chi.csv");
  }
  if (!o.prefactor_range.empty()) {
    const auto [lo, hi] = parse_range(o.prefactor_range, "--prefactor-range");
    const auto rows = normalform::noise_prefactor_sweep(p, noise, {lo, hi, o.h_step});
    io::CsvWriter csv(ctx.path("prefactors.csv"), {"h", "mu", "sigmaF1", "sigmaF2", "sigmaF3",
                                                   "sigmaG1", "sigmaG2", "sigmaG3"});
    for (const auto& r : rows) {
      csv.cell(r.h).cell(r.mu);
      for (double v : r.values.sigma_F) csv.cell(v);
      for (double v : r.values.sigma_G) csv.cell(v);
      csv.end_row();
    }
    csv.close();
  }
}

// ---------------------------------------------------------------------------
// birthdeath-check

struct BirthDeathOptions {
  ModelOptions model;
  std::string omega = "1e6,1e6,1e6";
  std::string state = "0.3,0.41454545454545455,0.1";
  double delta_s = 1e-3;
  std::size_t replicas = 10000;
  std::uint64_t seed = 0;
  std::string clock = "regular";
  std::string output = "birthdeath.json";
};

void cmd_birthdeath(const BirthDeathOptions& o, Context& ctx) {
  const Vec3 omega = parse_triple(o.omega, "--omega");
  const State s = State::from_vec(parse_triple(o.state, "--state"));
  ctx.seed = o.seed;
  const auto r = birthdeath::compare_to_diffusion(o.model.params, s, omega, o.delta_s, o.replicas,
                                                  o.seed, birthdeath::parse_clock(o.clock));
  json j;
  j["params"] = to_json(o.model.params);
  j["state"] = to_json(r.state);
  j["omega"] = to_json(r.omega);
  j["delta_s"] = r.delta_s;
  j["replicas"] = r.replicas;
  j["clock"] = birthdeath::to_string(r.clock);
  j["analytic"] = {{"mean", to_json(r.analytic.mean)}, {"variance", to_json(r.analytic.variance)}};
  j["empirical"] = {{"mean", to_json(r.empirical.mean)},
                    {"variance", to_json(r.empirical.variance)}};
  j["standard_error"] = {{"mean", to_json(r.mean_se)}, {"variance", to_json(r.variance_se)}};
  j["z"] = {{"mean", to_json(r.z_mean)}, {"variance", to_json(r.z_variance)}};
  j["small_omega"] = r.small_omega;
  j["pass"] = r.pass;
  write_json(j, ctx.path(o.output));
  std::cout << (r.pass ? "pass" : "fail") << (r.small_omega ? " (small-omega regime)" : "")
            << '\n';
}

// ---------------------------------------------------------------------------

json resolved_options(const CLI::App* sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "config" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto res = opt->reduced_results();
      if (opt->get_expected_max() == 0) {
        params[name] = true;
      } else {
        params[name] = res.size() == 1 ? json(res.front()) : json(res);
      }
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Simulation and analysis of a stochastic fast-slow predator-prey model", "mmo"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "key=value configuration file (command line flags take precedence)");
  app.set_version_flag("--version", MMO_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Context ctx;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for outputs and manifest.json");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Integrate one trajectory or an ensemble");
  sim.model.attach(s, 2.4);
  s->add_option("--scheme", sim.scheme, "rk4 or em")->required();
  s->add_option("--timescale", sim.timescale, "slow or fast");
  s->add_option("--sigma", sim.sigma, "Noise intensities s1,s2,s3 (em only)");
  s->add_option("--initial", sim.initial, "Initial state x,y,z");
  s->add_option("--boundary", sim.boundary, "reflect_to_zero or absorb");
  s->add_option("--dt", sim.dt, "Step size in units of the chosen timescale");
  s->add_option("--t-end", sim.t_end, "Horizon");
  s->add_option("--thinning", sim.thinning, "Keep every n-th step");
  s->add_option("--paths", sim.paths, "Number of ensemble paths (em)");
  s->add_option("--seed", sim.seed, "Master seed");
  s->add_option("--output", sim.output, "Trajectory CSV name");

  ScanOptions scan;
  auto* sc = app.add_subcommand("scan", "Locate the Hopf or FSN II value, or track mu(h)");
  scan.model.attach(sc, 2.4);
  sc->add_option("--what", scan.what, "hopf, fsn2 or track")->required();
  sc->add_option("--h-range", scan.h_range, "lo:hi")->required();
  sc->add_option("--h-step", scan.h_step, "Grid spacing before refinement");
  sc->add_option("--output", scan.output, "CSV name (default scan_<what>.csv)");

  HistogramOptions hist;
  auto* hi = app.add_subcommand("histogram", "SAO counts between spikes over an EM ensemble");
  hist.model.attach(hi, 2.4);
  hi->add_option("--paths", hist.paths, "Number of sample paths");
  hi->add_option("--sigma", hist.sigma, "Noise intensities s1,s2,s3");
  hi->add_option("--seed", hist.seed, "Master seed");
  hi->add_option("--ds", hist.ds, "Slow-time step");
  hi->add_option("--t-end", hist.t_end, "Slow-time horizon per path");
  hi->add_option("--thinning", hist.thinning, "Classifier sampling stride");
  hi->add_option("--output", hist.output, "Histogram CSV name");

  ReturnMapOptions rm;
  auto* r = app.add_subcommand("returnmap", "First-return map on the section x = const");
  rm.model.attach(r, 2.3);
  r->add_option("--grid", rm.grid, "Number of initial points");
  r->add_option("--sigma", rm.sigma, "Noise intensities s1,s2,s3");
  r->add_option("--seed", rm.seed, "Master seed");
  r->add_option("--section-x", rm.section_x, "Section position");
  r->add_option("--y0", rm.y0, "Fixed y of the initial segment");
  r->add_option("--z-range", rm.z_range, "z interval of the initial segment, lo:hi");
  r->add_option("--ds", rm.ds, "Slow-time step");
  r->add_option("--timeout", rm.timeout, "Slow-time budget per path");
  r->add_option("--output", rm.output, "CSV name");

  NormalFormOptions nf;
  auto* n = app.add_subcommand("normalform", "Normal-form constants, verification and sweeps");
  nf.model.attach(n, 2.3);
  n->add_option("--sigma", nf.sigma, "Noise intensities s1,s2,s3");
  n->add_flag("--verify", nf.verify, "Run the finite-difference certification");
  n->add_option("--delta", nf.delta, "Certification step");
  n->add_option("--chi-range", nf.chi_range, "Write chi.csv over lo:hi");
  n->add_option("--prefactor-range", nf.prefactor_range, "Write prefactors.csv over lo:hi");
  n->add_option("--h-step", nf.h_step, "Sweep spacing");
  n->add_option("--k-max", nf.k_max, "Largest k in chi.csv");
  n->add_option("--output", nf.output, "JSON name");

  BirthDeathOptions bd;
  auto* b = app.add_subcommand("birthdeath-check", "Birth-death chain against diffusion moments");
  bd.model.attach(b, 2.4);
  b->add_option("--omega", bd.omega, "Population scales w1,w2,w3");
  b->add_option("--state", bd.state, "Interior state x,y,z");
  b->add_option("--delta-s", bd.delta_s, "Slow-time increment");
  b->add_option("--replicas", bd.replicas, "Number of chains");
  b->add_option("--seed", bd.seed, "Master seed");
  b->add_option("--clock", bd.clock, "regular or exponential");
  b->add_option("--output", bd.output, "JSON name");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "mmo: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* chosen = app.get_subcommands().front();
  try {
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);
    const std::string name = chosen->get_name();
    if (name == "simulate") {
      cmd_simulate(sim, ctx);
    } else if (name == "scan") {
      cmd_scan(scan, ctx);
    } else if (name == "histogram") {
      cmd_histogram(hist, ctx);
    } else if (name == "returnmap") {
      cmd_returnmap(rm, ctx);
    } else if (name == "normalform") {
      cmd_normalform(nf, ctx);
    } else {
      cmd_birthdeath(bd, ctx);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "mmo " << chosen->get_name() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "mmo " << chosen->get_name() << ": " << e.what() << '\n';
    return kFailure;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["command"] = chosen->get_name();
  manifest["parameters"] = resolved_options(chosen);
  manifest["parameters"]["out-dir"] = out_dir;
  manifest["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
  manifest["version"] = MMO_VERSION;
  manifest["outputs"] = ctx.outputs;
  manifest["duration_seconds"] = seconds;
  try {
    write_json(manifest, (ctx.out_dir / "manifest.json").string());
  } catch (const std::exception& e) {
    std::cerr << "mmo: " << e.what() << '\n';
    return kFailure;
  }
  return kSuccess;
}

}  // namespace mmo::cli
