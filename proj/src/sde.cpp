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

#include "dcsl/sde.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcsl {

const char* to_string(Scheme s) { return s == Scheme::nonlinear ? "nonlinear" : "linear"; }
const char* to_string(Hamiltonian h) { return h == Hamiltonian::none ? "none" : "free"; }
const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::left: return "left";
    case Outcome::right: return "right";
    default: return "unresolved";
  }
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "nonlinear") return Scheme::nonlinear;
  if (s == "linear") return Scheme::linear;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

Hamiltonian hamiltonian_from_string(const std::string& s) {
  if (s == "none") return Hamiltonian::none;
  if (s == "free") return Hamiltonian::free;
  throw std::invalid_argument("unknown hamiltonian '" + s + "'");
}

std::size_t SdeConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void SdeConfig::validate(double lambda) const {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  if (!(t_end >= 0.0)) throw std::domain_error("t_end must be non-negative");
  if (lambda * dt > 0.05 + 1e-12) throw std::domain_error("lambda dt exceeds the stability bound 0.05");
  if (record_every == 0) throw std::domain_error("record_every must be at least 1");
  if (resolve_variance < 0.0) throw std::domain_error("resolve_variance must be non-negative");
}

nlohmann::json SdeConfig::to_json() const {
  return {{"dt", dt},
          {"t_end", t_end},
          {"record_every", record_every},
          {"scheme", to_string(scheme)},
          {"renormalize", renormalize},
          {"hamiltonian", to_string(hamiltonian)},
          {"seed", seed},
          {"resolve_variance", resolve_variance},
          {"snapshot_times", snapshot_times},
          {"density_times", density_times}};
}

double Trajectory::girsanov_weight() const { return std::exp(log_weight); }

SdeStepper::SdeStepper(const KernelL& kernel, Hamiltonian hamiltonian, bool renormalize)
    : kernel_(&kernel),
      hamiltonian_(hamiltonian),
      renormalize_(renormalize),
      field_(kernel.size()),
      delta_(kernel.size()) {}

std::vector<cplx> SdeStepper::r_transform(std::span<const cplx> psi_tilde) const {
  const auto& grid = kernel_->grid();
  const auto c = kernel_->correlation(psi_tilde);
  const double half_m = 0.5 * kernel_->params().mass;
  std::vector<cplx> r(c.size());
  for (std::size_t q = 0; q < c.size(); ++q) r[q] = half_m * (c[grid.negated(q)] + std::conj(c[q]));
  return r;
}

std::vector<double> SdeStepper::r_field(std::span<const cplx> psi_tilde) const {
  const auto& grid = kernel_->grid();
  const auto c = kernel_->correlation(psi_tilde);
  // sum_Q C(Q) exp(-i Q y / hbar) is the centred forward transform of C.
  auto s = grid.to_momentum(c);
  const double scale = kernel_->params().mass / grid.box_length() *
                       std::sqrt(2.0 * std::numbers::pi * grid.hbar()) / grid.dx();
  std::vector<double> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = scale * s[i].real();
  return r;
}

void SdeStepper::apply_free(std::vector<cplx>& psi_tilde, double dt) const {
  if (hamiltonian_ == Hamiltonian::none) return;
  const auto& grid = kernel_->grid();
  const auto& p = kernel_->params();
  for (std::size_t j = 0; j < psi_tilde.size(); ++j) {
    const double P = grid.p(j);
    psi_tilde[j] *= std::polar(1.0, -P * P * dt / (2.0 * p.mass * p.hbar));
  }
}

namespace {

double momentum_norm2(std::span<const cplx> v, double dq) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s * dq;
}

void check_finite(std::span<const cplx> v) {
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw IntegrationError("non-finite amplitude", 0, 0);
    }
  }
}

}  // namespace

void SdeStepper::step_nonlinear(std::vector<cplx>& psi_tilde, const NoiseField& noise) {
  const auto& grid = kernel_->grid();
  const auto& p = kernel_->params();
  const std::size_t n = grid.size();
  if (psi_tilde.size() != n || noise.transform.size() != n) {
    throw std::domain_error("state and noise grids do not match");
  }
  const double dt = noise.dt;
  const double sg = std::sqrt(p.gamma()) / p.m0;
  const double g = p.gamma() / (p.m0 * p.m0);
  const double inv_box = 1.0 / grid.box_length();

  const auto r_hat = r_transform(psi_tilde);
  double r_dw = 0.0, r_sq = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    r_dw += (r_hat[q] * std::conj(noise.transform[q])).real();
    r_sq += std::norm(r_hat[q]);
  }
  r_dw *= inv_box;
  r_sq *= inv_box;

  // Noise and the 2 r L drift share one kernel application.
  for (std::size_t q = 0; q < n; ++q) field_[q] = sg * noise.transform[q] + g * dt * r_hat[q];
  std::fill(delta_.begin(), delta_.end(), cplx{});
  kernel_->apply(field_, psi_tilde, delta_, p.mass);

  const double scalar = -sg * r_dw - 0.5 * g * dt * r_sq;
  const auto loss = kernel_->loss_sum();
  const double loss_scale = 0.5 * g * dt * p.mass * p.mass;
  for (std::size_t j = 0; j < n; ++j) {
    psi_tilde[j] += delta_[j] + (scalar - loss_scale * loss[j]) * psi_tilde[j];
  }
  apply_free(psi_tilde, dt);
  check_finite(psi_tilde);
  if (renormalize_) {
    const double n2 = momentum_norm2(psi_tilde, grid.dq());
    if (!(n2 > 0.0)) throw IntegrationError("state collapsed to zero norm", 0, 0);
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : psi_tilde) v *= s;
  }
}

double SdeStepper::step_linear(std::vector<cplx>& psi_tilde, const NoiseField& noise) {
  const auto& grid = kernel_->grid();
  const auto& p = kernel_->params();
  const std::size_t n = grid.size();
  if (psi_tilde.size() != n || noise.transform.size() != n) {
    throw std::domain_error("state and noise grids do not match");
  }
  const double before = momentum_norm2(psi_tilde, grid.dq());
  if (!(before > 0.0)) throw std::domain_error("linear step on a zero state");
  const double sg = std::sqrt(p.gamma()) / p.m0;
  const double g = p.gamma() / (p.m0 * p.m0);

  for (std::size_t q = 0; q < n; ++q) field_[q] = sg * noise.transform[q];
  std::fill(delta_.begin(), delta_.end(), cplx{});
  kernel_->apply(field_, psi_tilde, delta_, p.mass);

  const auto loss = kernel_->loss_sum();
  const double loss_scale = 0.5 * g * noise.dt * p.mass * p.mass;
  for (std::size_t j = 0; j < n; ++j) psi_tilde[j] += delta_[j] - loss_scale * loss[j] * psi_tilde[j];
  apply_free(psi_tilde, noise.dt);
  check_finite(psi_tilde);

  const double after = momentum_norm2(psi_tilde, grid.dq());
  if (!(after > 0.0)) throw IntegrationError("linear state collapsed to zero norm", 0, 0);
  const double s = 1.0 / std::sqrt(after);
  for (auto& v : psi_tilde) v *= s;
  return after / before;
}

namespace {

std::vector<std::size_t> step_indices(std::span<const double> times, double dt, std::size_t steps) {
  std::vector<std::size_t> idx;
  for (double t : times) {
    if (t < 0.0) throw std::domain_error("requested time is negative");
    const auto s = static_cast<std::size_t>(std::llround(t / dt));
    if (s > steps) throw std::domain_error("requested time lies beyond t_end");
    idx.push_back(s);
  }
  return idx;
}

}  // namespace

Trajectory run_trajectory(const SdeConfig& config, const WaveState& initial, const KernelL& kernel,
                          std::uint64_t id) {
  const auto& params = kernel.params();
  config.validate(params.lambda);
  const Grid& grid = kernel.grid();
  if (!grid.same_as(initial.grid())) throw std::domain_error("initial state and kernel grids differ");

  std::vector<cplx> psi = initial.momentum();
  {
    const double n2 = momentum_norm2(psi, grid.dq());
    if (!(n2 > 0.0)) throw std::domain_error("initial state has zero norm");
    for (auto& v : psi) v /= std::sqrt(n2);
  }

  const std::size_t steps = config.steps();
  const auto snap_idx = step_indices(config.snapshot_times, config.dt, steps);
  const auto dens_idx = step_indices(config.density_times, config.dt, steps);

  Trajectory traj;
  traj.id = id;
  SdeStepper stepper(kernel, config.hamiltonian, config.renormalize);
  NoiseStream stream(config.seed, id);
  bool pending = config.resolve_variance > 0.0;

  auto visit = [&](std::size_t s) {
    const double t = static_cast<double>(s) * config.dt;
    const bool record = s % config.record_every == 0 || s == steps;
    if (record || pending) {
      const auto obs = observables_from_momentum(grid, psi, params.mass);
      if (record) {
        traj.times.push_back(t);
        traj.observables.push_back(obs);
        traj.log_weights.push_back(traj.log_weight);
      }
      if (pending && obs.var_x < config.resolve_variance) {
        pending = false;
        traj.outcome = obs.mean_x < 0.0 ? Outcome::left : Outcome::right;
        traj.resolve_time = t;
      }
    }
    for (std::size_t k = 0; k < snap_idx.size(); ++k) {
      if (snap_idx[k] == s) traj.snapshots.push_back({t, WaveState::from_momentum(grid, psi)});
    }
    for (std::size_t k = 0; k < dens_idx.size(); ++k) {
      if (dens_idx[k] == s) {
        traj.density_amplitudes.push_back(psi);
        traj.density_log_weights.push_back(traj.log_weight);
      }
    }
  };

  visit(0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const NoiseField noise = draw_noise(stream, grid, config.dt);
    try {
      if (config.scheme == Scheme::nonlinear) {
        stepper.step_nonlinear(psi, noise);
      } else {
        traj.log_weight += std::log(stepper.step_linear(psi, noise));
      }
    } catch (const IntegrationError& e) {
      throw IntegrationError(std::string(e.what()) + " at step " + std::to_string(s) +
                                 " of trajectory " + std::to_string(id),
                             s, id);
    }
    visit(s);
  }
  traj.final_state = WaveState::from_momentum(grid, psi);
  return traj;
}

MomentStats weighted_stats(std::span<const double> values, std::span<const double> log_weights) {
  MomentStats st;
  const std::size_t n = values.size();
  if (n == 0) return st;
  std::vector<double> w(n, 1.0);
  if (!log_weights.empty()) {
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(log_weights[i] - top);
  }
  double wsum = 0.0;
  for (double v : w) wsum += v;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += w[i] * values[i];
  mean /= wsum;
  double var = 0.0, se2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    const double wi = w[i] / wsum;
    var += wi * d * d;
    se2 += wi * wi * d * d;
  }
  st.mean = mean;
  st.variance = var;
  st.standard_error = std::sqrt(se2);
  return st;
}

double EnsembleSummary::resolved_fraction_by(double t) const {
  if (trajectories.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& tr : trajectories) {
    if (tr.resolve_time >= 0.0 && tr.resolve_time <= t + 1e-9) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(trajectories.size());
}

nlohmann::json EnsembleSummary::to_json() const {
  auto series = [](const std::vector<MomentStats>& s) {
    nlohmann::json j = {{"mean", nlohmann::json::array()}, {"variance", nlohmann::json::array()},
                        {"standard_error", nlohmann::json::array()}};
    for (const auto& m : s) {
      j["mean"].push_back(m.mean);
      j["variance"].push_back(m.variance);
      j["standard_error"].push_back(m.standard_error);
    }
    return j;
  };
  nlohmann::json j;
  j["n_traj"] = n_traj;
  j["scheme"] = to_string(scheme);
  j["times"] = times;
  j["norm"] = series(norm);
  j["mean_x"] = series(mean_x);
  j["var_x"] = series(var_x);
  j["mean_p"] = series(mean_p);
  j["kinetic_energy"] = series(kinetic_energy);
  j["median_var_x"] = median_var_x;
  j["outcomes"] = {{"left", left}, {"right", right}, {"unresolved", unresolved}};
  if (!times.empty()) j["resolved_fraction_at_end"] = resolved_fraction_by(times.back());
  j["density_times"] = density_times;
  return j;
}

EnsembleSummary run_ensemble(const SdeConfig& config, const WaveState& initial, const KernelL& kernel,
                             std::size_t n_traj, int threads) {
  if (n_traj == 0) throw std::domain_error("ensemble needs at least one trajectory");
  config.validate(kernel.params().lambda);

  std::vector<Trajectory> trajs(n_traj);
  std::vector<std::exception_ptr> errors(n_traj);
#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n_traj); ++i) {
    try {
      trajs[i] = run_trajectory(config, initial, kernel, static_cast<std::uint64_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleSummary sum;
  sum.n_traj = n_traj;
  sum.scheme = config.scheme;
  sum.times = trajs.front().times;
  const bool weighted = config.scheme == Scheme::linear;
  const std::size_t nt = sum.times.size();
  std::vector<double> vals(n_traj), lw(n_traj);
  auto stats_at = [&](std::size_t k, auto field) {
    for (std::size_t i = 0; i < n_traj; ++i) {
      vals[i] = field(trajs[i].observables[k]);
      lw[i] = trajs[i].log_weights[k];
    }
    return weighted_stats(vals, weighted ? std::span<const double>(lw) : std::span<const double>());
  };
  for (std::size_t k = 0; k < nt; ++k) {
    sum.norm.push_back(stats_at(k, [](const ObservableSet& o) { return o.norm; }));
    sum.mean_x.push_back(stats_at(k, [](const ObservableSet& o) { return o.mean_x; }));
    sum.var_x.push_back(stats_at(k, [](const ObservableSet& o) { return o.var_x; }));
    sum.mean_p.push_back(stats_at(k, [](const ObservableSet& o) { return o.mean_p; }));
    sum.kinetic_energy.push_back(stats_at(k, [](const ObservableSet& o) { return o.kinetic_energy; }));
    std::vector<double> v(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) v[i] = trajs[i].observables[k].var_x;
    const std::size_t mid = n_traj / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double med = v[mid];
    if (n_traj % 2 == 0) med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + mid));
    sum.median_var_x.push_back(med);
  }
  for (const auto& tr : trajs) {
    if (tr.outcome == Outcome::left) ++sum.left;
    else if (tr.outcome == Outcome::right) ++sum.right;
    else ++sum.unresolved;
  }

  const Grid& grid = kernel.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  sum.density_times = config.density_times;
  for (std::size_t d = 0; d < config.density_times.size(); ++d) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& tr : trajs) top = std::max(top, weighted ? tr.density_log_weights[d] : 0.0);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    double wsum = 0.0;
    for (const auto& tr : trajs) {
      const double w = weighted ? std::exp(tr.density_log_weights[d] - top) : 1.0;
      Eigen::Map<const Eigen::VectorXcd> v(tr.density_amplitudes[d].data(), n);
      rho.noalias() += (w * grid.dq()) * v * v.adjoint();
      wsum += w;
    }
    sum.densities.emplace_back(grid, rho / wsum);
  }
  sum.trajectories = std::move(trajs);
  return sum;
}

}  // namespace dcsl
