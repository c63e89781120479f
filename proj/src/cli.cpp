// Copyright 2026 The dcsl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcsl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include "dcsl/collapse_ops.hpp"
#include "dcsl/macro_rates.hpp"
#include "dcsl/master.hpp"
#include "dcsl/params.hpp"
#include "dcsl/sde.hpp"

#ifndef DCSL_VERSION
#define DCSL_VERSION "unknown"
#endif

namespace dcsl::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

const std::vector<double> kFig1Times = {0.0, 0.1, 0.3, 0.4, 0.5, 0.6, 0.8, 0.9};

/// Usage problems (bad flags, bad config keys); exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json sim_params_defaults() {
  return {{"hbar", 1.0}, {"mass", 1.0}, {"m0", 1.0}, {"r_C", 1.0}, {"lambda", 1.0}, {"k", 0.0}};
}

json trajectory_defaults() {
  json j = sim_params_defaults();
  j.update({{"n_grid", 512},
            {"box", 40.0},
            {"sigma", 0.55},
            {"alpha", 2.5},
            {"weight_right", 0.5},
            {"dt", 0.01},
            {"t_end", 1.0},
            {"record_every", 1},
            {"scheme", "nonlinear"},
            {"hamiltonian", "none"},
            {"renormalize", true},
            {"seed", 0},
            {"resolve_variance", 0.55 * 0.55},
            {"snapshot_times", kFig1Times}});
  return j;
}

// Overlays `patch` onto `base`; every patched key must already exist.
void overlay(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& item : patch.items()) {
    if (!base.contains(item.key())) throw UsageError("unknown key '" + item.key() + "' in " + where);
    base[item.key()] = item.value();
  }
}

void apply_model_preset(json& cfg, const std::string& name) {
  const auto sim = SimParams::from_model(ModelParams::preset(name));
  overlay(cfg, sim.to_json(), "model preset");
}

SimParams sim_params(const json& c) {
  SimParams p;
  p.hbar = c.at("hbar").get<double>();
  p.mass = c.at("mass").get<double>();
  p.m0 = c.at("m0").get<double>();
  p.r_C = c.at("r_C").get<double>();
  p.lambda = c.at("lambda").get<double>();
  p.k = c.at("k").get<double>();
  p.validate();
  return p;
}

std::size_t grid_size(const json& c) {
  const auto n = c.at("n_grid").get<long long>();
  if (n < 4) throw std::domain_error("n_grid must be at least 4");
  return static_cast<std::size_t>(n);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot open " + (dir / name).string() + " for writing");
  os << std::setprecision(17);
  return os;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  auto os = open_output(dir, name);
  os << j.dump(2) << '\n';
}

SdeConfig sde_config(const json& c) {
  SdeConfig s;
  s.dt = c.at("dt").get<double>();
  s.t_end = c.at("t_end").get<double>();
  const auto every = c.at("record_every").get<long long>();
  if (every < 1) throw std::domain_error("record_every must be at least 1");
  s.record_every = static_cast<std::size_t>(every);
  s.scheme = scheme_from_string(c.at("scheme").get<std::string>());
  s.hamiltonian = hamiltonian_from_string(c.at("hamiltonian").get<std::string>());
  s.renormalize = c.at("renormalize").get<bool>();
  s.seed = c.at("seed").get<std::uint64_t>();
  s.resolve_variance = c.at("resolve_variance").get<double>();
  // Requested times past the end of the run are dropped.
  for (double t : c.at("snapshot_times").get<std::vector<double>>()) {
    if (t <= s.t_end + 0.5 * s.dt) s.snapshot_times.push_back(t);
  }
  if (c.contains("density_times")) {
    for (double t : c.at("density_times").get<std::vector<double>>()) {
      if (t <= s.t_end + 0.5 * s.dt) s.density_times.push_back(t);
    }
  }
  return s;
}

WaveState initial_state(const Grid& grid, const json& c) {
  const double w = c.at("weight_right").get<double>();
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("weight_right must lie in [0, 1]");
  return gaussian_superposition(grid, c.at("alpha").get<double>(), c.at("sigma").get<double>(),
                                {cplx(std::sqrt(w)), cplx(std::sqrt(1.0 - w))});
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,norm,mean_x,var_x,mean_P,E\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto& o = tr.observables[i];
    os << tr.times[i] << ',' << o.norm << ',' << o.mean_x << ',' << o.var_x << ',' << o.mean_p << ','
       << o.kinetic_energy << '\n';
  }
}

void write_snapshots_csv(std::ostream& os, const std::vector<Snapshot>& snaps) {
  os << "t,x,abs2\n";
  for (const auto& s : snaps) {
    const auto& g = s.state.grid();
    for (std::size_t i = 0; i < g.size(); ++i) os << s.time << ',' << g.x(i) << ',' << std::norm(s.state.psi()[i]) << '\n';
  }
}

void run_simulate(const json& c, const fs::path& out, std::ostream& log) {
  const auto p = sim_params(c);
  const Grid grid(grid_size(c), c.at("box").get<double>(), p.hbar);
  const KernelL kernel(grid, p);
  const auto init = initial_state(grid, c);
  const auto cfg = sde_config(c);
  const auto tr = run_trajectory(cfg, init, kernel, c.at("trajectory_id").get<std::uint64_t>());

  auto traj_os = open_output(out, "trajectory.csv");
  write_trajectory_csv(traj_os, tr);
  auto snap_os = open_output(out, "snapshots.csv");
  write_snapshots_csv(snap_os, tr.snapshots);
  write_json(out, "final_state.json",
             to_json(*tr.final_state, {{"time", cfg.t_end}, {"outcome", to_string(tr.outcome)},
                                       {"resolve_time", tr.resolve_time},
                                       {"log_weight", tr.log_weight}}));
  const auto& last = tr.observables.back();
  log << "simulate: " << tr.times.size() << " records, final var_x = " << last.var_x
      << ", outcome = " << to_string(tr.outcome) << '\n';
}

void run_ensemble_cmd(const json& c, const fs::path& out, int threads, std::ostream& log) {
  const auto p = sim_params(c);
  const Grid grid(grid_size(c), c.at("box").get<double>(), p.hbar);
  const KernelL kernel(grid, p);
  const auto init = initial_state(grid, c);
  const auto cfg = sde_config(c);
  const auto n_traj = c.at("n_traj").get<long long>();
  if (n_traj < 1) throw std::domain_error("n_traj must be at least 1");
  const auto sum = run_ensemble(cfg, init, kernel, static_cast<std::size_t>(n_traj), threads);

  json summary = sum.to_json();
  summary["resolved_fraction_by_t_end"] = sum.resolved_fraction_by(cfg.t_end);
  write_json(out, "ensemble_summary.json", summary);

  auto tl = open_output(out, "ensemble_timeline.csv");
  tl << "t,norm,mean_x,mean_x_se,var_x,var_x_se,median_var_x,mean_P,mean_P_se,E,E_se\n";
  for (std::size_t i = 0; i < sum.times.size(); ++i) {
    tl << sum.times[i] << ',' << sum.norm[i].mean << ',' << sum.mean_x[i].mean << ','
       << sum.mean_x[i].standard_error << ',' << sum.var_x[i].mean << ',' << sum.var_x[i].standard_error
       << ',' << sum.median_var_x[i] << ',' << sum.mean_p[i].mean << ',' << sum.mean_p[i].standard_error
       << ',' << sum.kinetic_energy[i].mean << ',' << sum.kinetic_energy[i].standard_error << '\n';
  }

  auto vt = open_output(out, "variance_trajectories.csv");
  vt << "trajectory,t,var_x\n";
  for (const auto& tr : sum.trajectories) {
    for (std::size_t i = 0; i < tr.times.size(); ++i) vt << tr.id << ',' << tr.times[i] << ',' << tr.observables[i].var_x << '\n';
  }

  auto oc = open_output(out, "outcomes.csv");
  oc << "trajectory,outcome,resolve_time,log_weight\n";
  for (const auto& tr : sum.trajectories) {
    oc << tr.id << ',' << to_string(tr.outcome) << ',' << tr.resolve_time << ',' << tr.log_weight << '\n';
  }

  // Ensemble position density next to the single realisation of trajectory 0.
  auto ds = open_output(out, "density_snapshots.csv");
  ds << "t,x,ensemble,trajectory0\n";
  const auto& first = sum.trajectories.front();
  for (std::size_t d = 0; d < sum.densities.size(); ++d) {
    const double t = sum.density_times[d];
    const Eigen::MatrixXcd pos = sum.densities[d].position_matrix();
    const Snapshot* snap = nullptr;
    for (const auto& s : first.snapshots) {
      if (std::abs(s.time - t) < 0.5 * cfg.dt) snap = &s;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ds << t << ',' << grid.x(i) << ',' << pos(i, i).real() / grid.dx() << ',';
      if (snap) {
        ds << std::norm(snap->state.psi()[i]);
      } else {
        ds << "nan";
      }
      ds << '\n';
    }
  }
  log << "ensemble: " << n_traj << " trajectories, left " << sum.left << ", right " << sum.right
      << ", unresolved " << sum.unresolved << '\n';
}

void run_master(const json& c, const fs::path& out, std::ostream& log) {
  const auto p = sim_params(c);
  const double dq = c.at("dq").get<double>();
  if (!(dq > 0.0)) throw std::domain_error("dq must be positive");
  const Grid grid(grid_size(c), 2.0 * std::numbers::pi * p.hbar / dq, p.hbar);
  GeneratorSpec spec{p, kernel_variant_from_string(c.at("variant").get<std::string>()),
                     hamiltonian_from_string(c.at("hamiltonian").get<std::string>())};
  const LindbladGenerator gen(grid, spec);

  const double width = c.at("initial_p_width").get<double>();
  const double center = c.at("initial_p_center").get<double>();
  if (!(width > 0.0)) throw std::domain_error("initial_p_width must be positive");
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = (grid.p(j) - center) / width;
    w[j] = std::exp(-0.5 * u * u);
  }
  const auto rho0 = DensityMatrix::diagonal(grid, w);

  PropagationOptions opts;
  opts.t_end = c.at("t_end").get<double>();
  opts.dt = c.at("dt").get<double>();
  const auto every = c.at("record_every").get<long long>();
  if (every < 1) throw std::domain_error("record_every must be at least 1");
  opts.record_every = static_cast<std::size_t>(every);
  opts.check_positivity = c.at("check_positivity").get<bool>();
  const auto tl = propagate(rho0, gen, opts);

  auto et = open_output(out, "energy_timeline.csv");
  et << "t,H,H_analytic\n";
  const double h0 = tl.energies.front();
  for (std::size_t i = 0; i < tl.times.size(); ++i) {
    et << tl.times[i] << ',' << tl.energies[i] << ',' << energy_law(p, h0, tl.times[i]) << '\n';
  }

  json res;
  res["generator"] = spec.to_json();
  double trace_err = 0.0;
  for (double t : tl.traces) trace_err = std::max(trace_err, std::abs(t - 1.0));
  res["max_trace_error"] = trace_err;
  res["final_hermiticity_error"] = tl.final_state->hermiticity_error();
  if (!tl.min_eigenvalues.empty()) {
    res["min_eigenvalue"] = *std::min_element(tl.min_eigenvalues.begin(), tl.min_eigenvalues.end());
  }
  try {
    res["energy_fit"] = relax_energy(tl.times, tl.energies, p).to_json();
  } catch (const std::exception& e) {
    res["energy_fit"] = {{"skipped", e.what()}};
  }
  if (p.k > 0.0) {
    try {
      res["gibbs_residual"] = gibbs_residual(gen);
      res["gibbs_residual_2T"] = gibbs_residual(gen, 2.0);
    } catch (const std::domain_error& e) {
      res["gibbs_residual"] = {{"skipped", e.what()}};
    }
  }
  res["appendix_a_kernel_difference"] = appendix_a_kernel_difference(grid, p);
  write_json(out, "residuals.json", res);
  log << "master: " << tl.times.size() << " records, final H = " << tl.energies.back() << '\n';
}

void run_rates(const json& c, const fs::path& out, std::ostream& log) {
  const auto model = ModelParams::from_json(c.at("model"));
  const double radius = c.at("radius_m").get<double>();
  MacroBody body;
  if (!c.at("N").is_null() && !c.at("density_per_m3").is_null()) {
    throw UsageError("give at most one of N and density");
  }
  if (!c.at("N").is_null()) {
    body = MacroBody::from_count(radius, c.at("N").get<double>(), model);
  } else if (!c.at("density_per_m3").is_null()) {
    body = MacroBody::from_density(radius, c.at("density_per_m3").get<double>(), model);
  } else {
    body = MacroBody::reference(radius, model);
  }
  const auto report = rate_ratio(body);
  json j = report.to_json();
  j["model"] = model.to_json();
  j["Lambda_saturated_per_s"] = sharp_scanning_Lambda(2.0 * radius, body);
  write_json(out, "rates.json", j);

  log << std::setprecision(4) << std::scientific;
  log << "quantity              value\n";
  log << "R [m]                 " << body.R << '\n';
  log << "N                     " << body.N << '\n';
  log << "lambda [1/s]          " << body.lambda << '\n';
  log << "k                     " << body.k << '\n';
  log << "Gamma [1/s]           " << report.Gamma << '\n';
  log << "chi [1/s]             " << report.chi << '\n';
  log << "Gamma/chi             " << report.ratio << '\n';
  log << "1e4 N^2 (R/r_C)^2     " << report.ratio_asymptotic << '\n';
  log << std::defaultfloat;
}

void run_kernel_dump(const json& c, const fs::path& out, std::ostream& log) {
  const auto p = sim_params(c);
  const Grid grid(grid_size(c), c.at("box").get<double>(), p.hbar);
  const KernelL kernel(grid, p, kernel_variant_from_string(c.at("variant").get<std::string>()));
  auto os = open_output(out, "kernel.csv");
  kernel.write_csv(os);
  log << "kernel-dump: " << grid.size() * grid.size() << " rows\n";
}

}  // namespace

json default_config(const std::string& subcommand, const std::string& preset) {
  json c;
  if (subcommand == "simulate") {
    c = trajectory_defaults();
    c["trajectory_id"] = 0;
  } else if (subcommand == "ensemble") {
    c = trajectory_defaults();
    c["n_traj"] = 100;
    c["density_times"] = kFig1Times;
  } else if (subcommand == "master") {
    c = sim_params_defaults();
    c.update({{"k", 0.25},
              {"n_grid", 96},
              {"dq", 0.1},
              {"t_end", 10.0},
              {"dt", 0.01},
              {"record_every", 10},
              {"variant", "main"},
              {"hamiltonian", "free"},
              {"initial_p_width", 0.2},
              {"initial_p_center", 0.0},
              {"check_positivity", true}});
  } else if (subcommand == "rates") {
    c = {{"model", {{"preset", "ghirardi1990"}}}, {"radius_m", 1e-3}, {"N", nullptr}, {"density_per_m3", nullptr}};
  } else if (subcommand == "kernel-dump") {
    c = sim_params_defaults();
    c.update({{"k", 0.25}, {"n_grid", 64}, {"box", 20.0}, {"variant", "main"}});
  } else {
    throw UsageError("unknown subcommand '" + subcommand + "'");
  }

  if (preset.empty()) return c;
  if (preset == "fig1") {
    if (subcommand != "simulate" && subcommand != "ensemble") {
      throw UsageError("preset fig1 applies to simulate and ensemble only");
    }
    overlay(c, {{"k", 0.0}, {"lambda", 1.0}, {"hbar", 1.0}, {"mass", 1.0}, {"m0", 1.0}, {"r_C", 1.0},
                {"sigma", 0.55}, {"alpha", 2.5}, {"weight_right", 0.5}, {"dt", 0.01}, {"t_end", 1.0},
                {"hamiltonian", "none"}, {"scheme", "nonlinear"}, {"resolve_variance", 0.55 * 0.55},
                {"snapshot_times", kFig1Times}},
            "fig1 preset");
    if (subcommand == "ensemble") overlay(c, {{"n_traj", 500}, {"density_times", kFig1Times}}, "fig1 preset");
  } else if (preset == "ghirardi1990" || preset == "adler2007") {
    if (subcommand == "rates") {
      c["model"] = {{"preset", preset}};
    } else {
      apply_model_preset(c, preset);
    }
  } else {
    throw UsageError("unknown preset '" + preset + "'");
  }
  return c;
}

void execute(const RunConfig& run, std::ostream& log) {
  fs::create_directories(run.out_dir);
  json manifest = {{"tool", "dcsl"},
                   {"version", DCSL_VERSION},
                   {"subcommand", run.subcommand},
                   {"config", run.config}};
  if (run.config.contains("seed")) manifest["seed"] = run.config.at("seed");
  write_json(run.out_dir, "manifest.json", manifest);

  const auto& c = run.config;
  if (run.subcommand == "simulate") {
    run_simulate(c, run.out_dir, log);
  } else if (run.subcommand == "ensemble") {
    run_ensemble_cmd(c, run.out_dir, run.threads, log);
  } else if (run.subcommand == "master") {
    run_master(c, run.out_dir, log);
  } else if (run.subcommand == "rates") {
    run_rates(c, run.out_dir, log);
  } else if (run.subcommand == "kernel-dump") {
    run_kernel_dump(c, run.out_dir, log);
  } else {
    throw UsageError("unknown subcommand '" + run.subcommand + "'");
  }
}

namespace {

// Flag values that override resolved config keys only when given.
class Overrides {
 public:
  template <class T>
  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    actions_.push_back([value, opt, key](json& cfg) {
      if (opt->count() > 0) cfg[key] = *value;
    });
  }
  void apply(json& cfg) const {
    for (const auto& a : actions_) a(cfg);
  }

 private:
  std::vector<std::function<void(json&)>> actions_;
};

void bind_sim_params(CLI::App* app, Overrides& o) {
  o.bind<double>(app, "--k", "k", "dissipation parameter k");
  o.bind<double>(app, "--lambda", "lambda", "1D collapse rate");
  o.bind<double>(app, "--mass", "mass", "particle mass");
  o.bind<double>(app, "--m0", "m0", "reference mass");
  o.bind<double>(app, "--r-c", "r_C", "localization length");
  o.bind<double>(app, "--hbar", "hbar", "reduced Planck constant");
}

void bind_trajectory(CLI::App* app, Overrides& o) {
  bind_sim_params(app, o);
  o.bind<long long>(app, "--n-grid", "n_grid", "grid points (even)");
  o.bind<double>(app, "--box", "box", "box length");
  o.bind<double>(app, "--sigma", "sigma", "gaussian width");
  o.bind<double>(app, "--alpha", "alpha", "peak offset");
  o.bind<double>(app, "--weight-right", "weight_right", "probability weight of the +alpha peak");
  o.bind<double>(app, "--dt", "dt", "time step");
  o.bind<double>(app, "--t-end", "t_end", "final time");
  o.bind<long long>(app, "--record-every", "record_every", "steps between records");
  o.bind<std::string>(app, "--scheme", "scheme", "nonlinear or linear");
  o.bind<std::string>(app, "--hamiltonian", "hamiltonian", "none or free");
  o.bind<bool>(app, "--renormalize", "renormalize", "renormalize after each nonlinear step");
  o.bind<double>(app, "--resolve-variance", "resolve_variance", "var_x threshold for outcome labels");
  o.bind<std::vector<double>>(app, "--snapshot-times", "snapshot_times", "wavefunction snapshot times");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dissipative collapse-model simulator and rate calculator", "dcsl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(DCSL_VERSION));

  std::string config_path, out_dir = "out", preset;
  std::uint64_t seed = 0;
  int threads = 1;
  long long steps = -1;
  std::string manifest_path;

  struct Sub {
    CLI::App* app;
    Overrides overrides;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add_sub = [&](const std::string& name, const std::string& help) {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    s->app->add_option("--config", config_path, "JSON config overlaid on the defaults");
    s->app->add_option("--out", out_dir, "output directory");
    s->app->add_option("--preset", preset, "fig1, ghirardi1990 or adler2007");
    s->app->add_option("--threads", threads, "worker threads");
    subs.push_back(std::move(s));
    return subs.back().get();
  };

  auto* sim = add_sub("simulate", "single trajectory of the collapse equation");
  bind_trajectory(sim->app, sim->overrides);
  sim->app->add_option("--seed", seed, "noise seed");
  sim->app->add_option("--steps", steps, "number of steps (sets t_end = steps dt)");
  sim->overrides.bind<std::uint64_t>(sim->app, "--trajectory-id", "trajectory_id", "noise substream id");

  auto* ens = add_sub("ensemble", "trajectory ensemble with averaged density matrices");
  bind_trajectory(ens->app, ens->overrides);
  ens->app->add_option("--seed", seed, "noise seed");
  ens->app->add_option("--steps", steps, "number of steps (sets t_end = steps dt)");
  ens->overrides.bind<long long>(ens->app, "--n-traj", "n_traj", "number of trajectories");
  ens->overrides.bind<std::vector<double>>(ens->app, "--density-times", "density_times",
                                           "times of ensemble density matrices");

  auto* mas = add_sub("master", "master-equation propagation and stationarity checks");
  bind_sim_params(mas->app, mas->overrides);
  mas->overrides.bind<long long>(mas->app, "--n-grid", "n_grid", "grid points (even)");
  mas->overrides.bind<double>(mas->app, "--dq", "dq", "momentum spacing");
  mas->overrides.bind<double>(mas->app, "--t-end", "t_end", "final time");
  mas->overrides.bind<double>(mas->app, "--dt", "dt", "time step");
  mas->overrides.bind<long long>(mas->app, "--record-every", "record_every", "steps between records");
  mas->overrides.bind<std::string>(mas->app, "--variant", "variant", "main or appendixA");
  mas->overrides.bind<std::string>(mas->app, "--hamiltonian", "hamiltonian", "none or free");
  mas->overrides.bind<double>(mas->app, "--p-width", "initial_p_width", "initial momentum width");
  mas->overrides.bind<double>(mas->app, "--p-center", "initial_p_center", "initial momentum centre");
  mas->overrides.bind<bool>(mas->app, "--check-positivity", "check_positivity", "eigenvalue check at records");

  auto* rat = add_sub("rates", "macroscopic localization and dissipation rates");
  rat->overrides.bind<double>(rat->app, "--radius", "radius_m", "sphere radius in m");
  rat->overrides.bind<double>(rat->app, "--N", "N", "nucleon count");
  rat->overrides.bind<double>(rat->app, "--density", "density_per_m3", "nucleons per m^3");

  auto* ker = add_sub("kernel-dump", "write the momentum kernel table");
  bind_sim_params(ker->app, ker->overrides);
  ker->overrides.bind<long long>(ker->app, "--n-grid", "n_grid", "grid points (even)");
  ker->overrides.bind<double>(ker->app, "--box", "box", "box length");
  ker->overrides.bind<std::string>(ker->app, "--variant", "variant", "main or appendixA");

  auto* rep = app.add_subcommand("replay", "rerun from a manifest.json");
  rep->add_option("--manifest", manifest_path, "manifest to replay")->required();
  rep->add_option("--out", out_dir, "output directory");
  rep->add_option("--threads", threads, "worker threads");

  std::string active = "dcsl";
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForVersion& e) {
      out << DCSL_VERSION << '\n';
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }
    if (threads < 0) throw UsageError("--threads must be non-negative");

    RunConfig runcfg;
    runcfg.out_dir = out_dir;
    runcfg.threads = threads;
    if (rep->parsed()) {
      active = "replay";
      std::ifstream is(manifest_path);
      if (!is) throw UsageError("cannot read manifest " + manifest_path);
      const json m = json::parse(is);
      runcfg.subcommand = m.at("subcommand").get<std::string>();
      runcfg.config = m.at("config");
      // Keys must match the current defaults; this rejects foreign manifests.
      json check = default_config(runcfg.subcommand);
      overlay(check, runcfg.config, "manifest config");
    } else {
      Sub* chosen = nullptr;
      for (auto& s : subs) {
        if (s->app->parsed()) chosen = s.get();
      }
      active = chosen->app->get_name();
      runcfg.subcommand = active;
      runcfg.config = default_config(active, preset);
      if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw UsageError("cannot read config " + config_path);
        json file;
        try {
          file = json::parse(is);
        } catch (const json::parse_error& e) {
          throw UsageError(std::string("malformed config: ") + e.what());
        }
        overlay(runcfg.config, file, "config " + config_path);
      }
      chosen->overrides.apply(runcfg.config);
      if (chosen->app->get_option_no_throw("--seed") && chosen->app->get_option("--seed")->count() > 0) {
        runcfg.config["seed"] = seed;
      }
      if (steps >= 0) runcfg.config["t_end"] = static_cast<double>(steps) * runcfg.config.at("dt").get<double>();
    }
    execute(runcfg, out);
    return 0;
  } catch (const UsageError& e) {
    err << json{{"error", {{"type", "usage"}, {"subcommand", active}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    err << json{{"error",
                 {{"type", "integration"},
                  {"subcommand", active},
                  {"message", e.what()},
                  {"step", e.step()},
                  {"trajectory", e.trajectory()}}}}
               .dump()
        << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", {{"type", "runtime"}, {"subcommand", active}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace dcsl::cli
