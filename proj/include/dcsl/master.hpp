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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dcsl/collapse_ops.hpp"
#include "dcsl/density.hpp"
#include "dcsl/sde.hpp"

namespace dcsl {

struct GeneratorSpec {
  SimParams params;
  KernelVariant variant = KernelVariant::main;
  Hamiltonian hamiltonian = Hamiltonian::free;
  nlohmann::json to_json() const;
};

/// One-particle Lindblad generator in the momentum representation:
///   d rho / dt = -(i/hbar)[P^2/2m, rho]
///              + c sum_Q dQ [ L(Q,P'-Q) L(Q,P''-Q) rho(P'-Q,P''-Q)
///                             - (L^2(Q,P') + L^2(Q,P'')) rho(P',P'') / 2 ],
/// c = gamma m^2 / (2 pi hbar m0^2). Momentum shifts wrap around the grid.
class LindbladGenerator {
 public:
  LindbladGenerator(const Grid& grid, const GeneratorSpec& spec);

  const Grid& grid() const { return kernel_.grid(); }
  const GeneratorSpec& spec() const { return spec_; }
  const KernelL& kernel() const { return kernel_; }
  /// The prefactor c.
  double rate() const { return kernel_.prefactor(); }

  Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const;
  DensityMatrix rhs(const DensityMatrix& rho) const;

 private:
  GeneratorSpec spec_;
  KernelL kernel_;
  std::vector<double> energy_;  // P^2 / 2m
  std::vector<double> loss_;    // (c dQ) sum_Q L^2(Q, P) / 2
  double gain_scale_;           // c dQ
};

class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, double time, double min_eigenvalue)
      : std::runtime_error(what), time_(time), min_eigenvalue_(min_eigenvalue) {}
  double time() const { return time_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double time_;
  double min_eigenvalue_;
};

struct PropagationOptions {
  double t_end = 1.0;
  double dt = 0.01;
  std::size_t record_every = 1;
  /// Eigenvalue check at each record point; aborts below -1e-6.
  bool check_positivity = false;
  bool keep_states = false;
};

struct Timeline {
  std::vector<double> times;
  std::vector<double> energies;  // <P^2>/2m
  std::vector<double> traces;
  std::vector<double> min_eigenvalues;  // filled when positivity is checked
  std::vector<DensityMatrix> states;    // filled when keep_states is set
  std::optional<DensityMatrix> final_state;
};

/// Classical fourth-order Runge-Kutta with fixed step; the last step is
/// shortened so that t_end is hit exactly.
Timeline propagate(const DensityMatrix& rho0, const LindbladGenerator& gen, const PropagationOptions& opts);

/// d<P^2>/dt from the generator, Tr(P^2 rhs(rho)) / Tr(rho).
double mean_p2_rate(const LindbladGenerator& gen, const DensityMatrix& rho);
/// Closed 1D energy law: (lambda m^2/m0^2) (1+k)^{-3} [hbar^2 / (2 r_C^2) - 4 k <P^2>].
double mean_p2_rate_law(const SimParams& p, double mean_p2);
/// H(t) = exp(-chi t)(H0 - H_as) + H_as, or H0 + xi t for k = 0.
double energy_law(const SimParams& p, double h0, double t);
/// k = 0 decay rate of the position coherence rho(x, x + d):
/// lambda (m/m0)^2 (1 - exp(-d^2 / 4 r_C^2)).
double coherence_decay_rate(const SimParams& p, double d);

class FitQualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnergyFit {
  double chi = 0.0;
  double h_as = 0.0;
  double h0 = 0.0;
  /// k = 0 only: fitted linear heating slope.
  double slope = 0.0;
  double rms_residual = 0.0;
  double chi_analytic = 0.0;
  double h_as_analytic = 0.0;
  double slope_analytic = 0.0;
  nlohmann::json to_json() const;
};

/// Least-squares fit of H(t) = A exp(-chi t) + H_as. For each trial chi the
/// amplitudes are solved linearly; chi itself is found by Brent minimisation
/// of the residual in log chi. For k = 0 a straight line is fitted instead.
/// Requires t_end chi_1d >= 3 for k > 0. Throws FitQualityError when the rms
/// residual exceeds `tolerance` times the energy range.
EnergyFit relax_energy(const std::vector<double>& times, const std::vector<double>& energies,
                       const SimParams& params, double tolerance = 1e-3);

/// Diagonal Gibbs state rho(P, P) ~ exp(-P^2 / (2 m k_B T)) with k_B T scaled
/// by `temperature_scale`. Requires the grid to cover +-3 thermal widths.
DensityMatrix gibbs_state(const Grid& grid, const SimParams& params, double temperature_scale = 1.0);

/// ||rhs(rho_beta)||_F / (||rho_beta||_F c).
double gibbs_residual(const LindbladGenerator& gen, double temperature_scale = 1.0);

/// max |L_appendixA - L_main| over the whole grid, Q = 0 included.
double appendix_a_kernel_difference(const Grid& grid, const SimParams& params);

}  // namespace dcsl
