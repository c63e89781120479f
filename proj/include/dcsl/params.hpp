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

#include <limits>
#include <string>

#include <json.hpp>

namespace dcsl {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;         // J s
  static constexpr double k_B = 1.380649e-23;             // J / K
  static constexpr double nucleon_mass = 1.67262192e-27;  // kg (proton)
  static constexpr double amu = 1.66053906660e-27;        // kg
};

// Closed-form parameter relations. All inputs SI, all throw std::domain_error
// on non-positive arguments.

/// Microscopic collapse rate in 3D, gamma / (4 pi r_C^2)^{3/2}.
double lambda_from_gamma(double gamma, double r_C);
/// Dissipation parameter hbar / (2 m v_eta r_C). Returns 0 for v_eta = +inf.
double k_from_v_eta(double mass, double v_eta, double r_C);
/// Noise temperature hbar v_eta / (4 k_B r_C); independent of the particle mass.
double temperature_from_v_eta(double v_eta, double r_C);

// 3D energy-law quantities for one particle.
double relaxation_rate_3d(double k, double lambda, double mass, double m0);
double asymptotic_energy_3d(double k, double mass, double r_C, double hbar = PhysicalConstants::hbar);
/// Linear heating rate of the non-dissipative model, 3 hbar^2 m lambda / (4 r_C^2 m0^2).
double heating_rate_3d(double lambda, double mass, double r_C, double m0,
                       double hbar = PhysicalConstants::hbar);

// One-dimensional counterparts used by the grid simulations. The 1D smearing
// (2 pi r_C^2)^{-1/2} exp(-u^2 / 2 r_C^2) gives a saturated decoherence rate
// lambda_1d = gamma_1d / (2 sqrt(pi) r_C); the Gaussian moment integral of the
// dissipator then yields chi_1d and H_as^1d below.
double lambda_1d_from_gamma(double gamma_1d, double r_C);
double gamma_1d_from_lambda(double lambda_1d, double r_C);
double relaxation_rate_1d(double k, double lambda_1d, double mass, double m0);
double asymptotic_energy_1d(double k, double mass, double r_C, double hbar);
double heating_rate_1d(double lambda_1d, double mass, double r_C, double m0, double hbar);

/// Physical model parameters in SI units. Immutable after construction.
class ModelParams {
 public:
  /// gamma in m^3/s, lengths in m, masses in kg, v_eta in m/s. v_eta may be
  /// +infinity, which gives the original (non-dissipative) model with k = 0.
  static ModelParams make(double gamma, double r_C, double mass, double m0, double v_eta);

  /// gamma = 1e-30 cm^3/s, r_C = 1e-7 m, one nucleon, v_eta = 1e5 m/s.
  static ModelParams ghirardi1990();
  /// As ghirardi1990 but with gamma chosen so that lambda = 1e-9 s^-1.
  static ModelParams adler2007();
  static ModelParams preset(const std::string& name);

  /// Keys: preset, gamma_cm3_per_s, r_C_m, v_eta_m_per_s, mass_amu. Explicit keys
  /// override the preset; unknown keys are rejected. A "derived" object, as
  /// written by to_json, is ignored and recomputed.
  static ModelParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  double gamma() const { return gamma_; }
  double r_C() const { return r_C_; }
  double lambda() const { return lambda_; }
  double mass() const { return mass_; }
  double m0() const { return m0_; }
  double v_eta() const { return v_eta_; }
  double k() const { return k_; }
  double temperature() const { return temperature_; }

 private:
  ModelParams() = default;

  double gamma_ = 0.0;
  double r_C_ = 0.0;
  double lambda_ = 0.0;
  double mass_ = 0.0;
  double m0_ = 0.0;
  double v_eta_ = 0.0;
  double k_ = 0.0;
  double temperature_ = 0.0;
};

/// Scale factors between SI and the dimensionless simulation units
/// (lengths in r_C, times in 1/lambda, momenta in hbar/r_C, energies in
/// hbar^2/(m r_C^2)).
struct SimUnits {
  double length = 1.0;
  double time = 1.0;
  double momentum = 1.0;
  double energy = 1.0;

  static SimUnits from(const ModelParams& params, double lambda_sim);

  double length_to_sim(double si) const { return si / length; }
  double length_to_si(double sim) const { return sim * length; }
  double time_to_sim(double si) const { return si / time; }
  double time_to_si(double sim) const { return sim * time; }
  double momentum_to_sim(double si) const { return si / momentum; }
  double momentum_to_si(double sim) const { return sim * momentum; }
  double energy_to_sim(double si) const { return si / energy; }
  double energy_to_si(double sim) const { return sim * energy; }
};

/// Parameter set consumed by the grid simulations. Any consistent unit system
/// works; the defaults are the dimensionless choice hbar = m = m0 = r_C = 1 with
/// unit 1D collapse rate.
struct SimParams {
  double hbar = 1.0;
  double mass = 1.0;
  double m0 = 1.0;
  double r_C = 1.0;
  double lambda = 1.0;  // 1D collapse rate
  double k = 0.0;

  static SimParams dimensionless(double k);
  /// Lengths in r_C, times in 1/lambda, hbar = 1; the mass becomes
  /// m r_C^2 lambda / hbar so that free evolution keeps its physical time scale.
  static SimParams from_model(const ModelParams& params);

  double gamma() const { return gamma_1d_from_lambda(lambda, r_C); }
  double chi() const { return relaxation_rate_1d(k, lambda, mass, m0); }
  double asymptotic_energy() const { return asymptotic_energy_1d(k, mass, r_C, hbar); }
  double heating_rate() const { return heating_rate_1d(lambda, mass, r_C, m0, hbar); }
  /// k_B T of the stationary Gibbs state, hbar^2 / (8 m k r_C^2). Infinite for k = 0.
  double thermal_energy() const;
  /// Momentum standard deviation of the Gibbs state, sqrt(m k_B T).
  double thermal_momentum() const;

  void validate() const;
  nlohmann::json to_json() const;
};

}  // namespace dcsl
