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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcsl/collapse_ops.hpp"
#include "dcsl/density.hpp"
#include "dcsl/noise.hpp"
#include "dcsl/qstate.hpp"

namespace dcsl {

enum class Scheme { nonlinear, linear };
enum class Hamiltonian { none, free };
enum class Outcome { left, right, unresolved };

const char* to_string(Scheme s);
const char* to_string(Hamiltonian h);
const char* to_string(Outcome o);
Scheme scheme_from_string(const std::string& s);
Hamiltonian hamiltonian_from_string(const std::string& s);

/// Non-finite state during integration.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step, std::uint64_t trajectory)
      : std::runtime_error(what), step_(step), trajectory_(trajectory) {}
  std::size_t step() const { return step_; }
  std::uint64_t trajectory() const { return trajectory_; }

 private:
  std::size_t step_;
  std::uint64_t trajectory_;
};

struct SdeConfig {
  double dt = 0.01;
  double t_end = 1.0;
  std::size_t record_every = 1;
  Scheme scheme = Scheme::nonlinear;
  bool renormalize = true;
  Hamiltonian hamiltonian = Hamiltonian::none;
  std::uint64_t seed = 0;
  /// A trajectory counts as resolved the first time var_x drops below this
  /// value; its outcome is then the sign of <x>. Zero disables classification.
  double resolve_variance = 0.0;
  /// Times at which full wavefunction snapshots are kept.
  std::vector<double> snapshot_times;
  /// Times at which ensemble-averaged density matrices are accumulated.
  std::vector<double> density_times;

  std::size_t steps() const;
  /// Requires lambda dt <= 0.05, t_end >= 0, record_every >= 1.
  void validate(double lambda) const;
  nlohmann::json to_json() const;
};

struct Snapshot {
  double time;
  WaveState state;
};

struct Trajectory {
  std::uint64_t id = 0;
  std::vector<double> times;
  std::vector<ObservableSet> observables;
  /// Linear scheme: log ||psi_t||^2 at each recorded time.
  std::vector<double> log_weights;
  std::optional<WaveState> final_state;
  /// log ||psi_t||^2 of the linear equation; zero for the nonlinear scheme.
  double log_weight = 0.0;
  Outcome outcome = Outcome::unresolved;
  double resolve_time = -1.0;
  std::vector<Snapshot> snapshots;
  /// Normalised momentum amplitudes at SdeConfig::density_times, with the
  /// log weight at that time.
  std::vector<std::vector<cplx>> density_amplitudes;
  std::vector<double> density_log_weights;

  double girsanov_weight() const;
};

/// Euler-Maruyama stepping of the collapse SDE in the momentum representation.
/// Holds scratch buffers, so each worker needs its own instance; the kernel
/// itself is shared read-only.
class SdeStepper {
 public:
  SdeStepper(const KernelL& kernel, Hamiltonian hamiltonian, bool renormalize = true);

  /// One step of the nonlinear equation. `psi_tilde` must be normalised.
  void step_nonlinear(std::vector<cplx>& psi_tilde, const NoiseField& noise);
  /// One step of the linear equation driven by `noise` (read as dB). The state
  /// is returned normalised; the return value is ||psi_new||^2 / ||psi_old||^2.
  double step_linear(std::vector<cplx>& psi_tilde, const NoiseField& noise);

  /// r_t(y_i) = Re <L(y_i)> on the position grid.
  std::vector<double> r_field(std::span<const cplx> psi_tilde) const;
  /// Fourier transform of r_t, computed directly from the kernel correlation.
  std::vector<cplx> r_transform(std::span<const cplx> psi_tilde) const;

  const KernelL& kernel() const { return *kernel_; }

 private:
  void apply_free(std::vector<cplx>& psi_tilde, double dt) const;

  const KernelL* kernel_;
  Hamiltonian hamiltonian_;
  bool renormalize_;
  std::vector<cplx> field_;
  std::vector<cplx> delta_;
};

/// Integrates one trajectory with noise substream (config.seed, id).
Trajectory run_trajectory(const SdeConfig& config, const WaveState& initial, const KernelL& kernel,
                          std::uint64_t id);

struct MomentStats {
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
};

struct EnsembleSummary {
  std::size_t n_traj = 0;
  Scheme scheme = Scheme::nonlinear;
  std::vector<double> times;
  // Girsanov-weighted for the linear scheme, plain for the nonlinear one.
  std::vector<MomentStats> mean_x, var_x, mean_p, kinetic_energy, norm;
  std::vector<double> median_var_x;
  std::size_t left = 0, right = 0, unresolved = 0;
  std::vector<double> density_times;
  std::vector<DensityMatrix> densities;
  std::vector<Trajectory> trajectories;

  double resolved_fraction_by(double t) const;
  nlohmann::json to_json() const;
};

/// Runs n_traj independent trajectories (worker count `threads`, 0 = default).
/// Statistics are reduced in trajectory order, so results do not depend on
/// the thread count.
EnsembleSummary run_ensemble(const SdeConfig& config, const WaveState& initial, const KernelL& kernel,
                             std::size_t n_traj, int threads = 1);

/// Self-normalised weighted mean with delta-method standard error.
MomentStats weighted_stats(std::span<const double> values, std::span<const double> log_weights);

}  // namespace dcsl
