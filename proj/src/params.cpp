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

#include "dcsl/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcsl {

namespace {

using std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw std::domain_error(std::string(what) + " must be non-negative");
  }
}

}  // namespace

double lambda_from_gamma(double gamma, double r_C) {
  require_positive(gamma, "gamma");
  require_positive(r_C, "r_C");
  return gamma / std::pow(4.0 * pi * r_C * r_C, 1.5);
}

double k_from_v_eta(double mass, double v_eta, double r_C) {
  require_positive(mass, "mass");
  require_positive(v_eta, "v_eta");
  require_positive(r_C, "r_C");
  if (std::isinf(v_eta)) return 0.0;
  return PhysicalConstants::hbar / (2.0 * mass * v_eta * r_C);
}

double temperature_from_v_eta(double v_eta, double r_C) {
  require_positive(v_eta, "v_eta");
  require_positive(r_C, "r_C");
  return PhysicalConstants::hbar * v_eta / (4.0 * PhysicalConstants::k_B * r_C);
}

double relaxation_rate_3d(double k, double lambda, double mass, double m0) {
  require_nonnegative(k, "k");
  return 4.0 * k * lambda * mass * mass / (std::pow(1.0 + k, 5) * m0 * m0);
}

double asymptotic_energy_3d(double k, double mass, double r_C, double hbar) {
  require_nonnegative(k, "k");
  if (k == 0.0) return std::numeric_limits<double>::infinity();
  return 3.0 * hbar * hbar / (16.0 * k * mass * r_C * r_C);
}

double heating_rate_3d(double lambda, double mass, double r_C, double m0, double hbar) {
  return 3.0 * hbar * hbar * mass * lambda / (4.0 * r_C * r_C * m0 * m0);
}

double lambda_1d_from_gamma(double gamma_1d, double r_C) {
  require_positive(gamma_1d, "gamma_1d");
  require_positive(r_C, "r_C");
  return gamma_1d / (2.0 * std::sqrt(pi) * r_C);
}

double gamma_1d_from_lambda(double lambda_1d, double r_C) {
  return lambda_1d * 2.0 * std::sqrt(pi) * r_C;
}

double relaxation_rate_1d(double k, double lambda_1d, double mass, double m0) {
  require_nonnegative(k, "k");
  return 4.0 * k * lambda_1d * mass * mass / (std::pow(1.0 + k, 3) * m0 * m0);
}

double asymptotic_energy_1d(double k, double mass, double r_C, double hbar) {
  require_nonnegative(k, "k");
  if (k == 0.0) return std::numeric_limits<double>::infinity();
  return hbar * hbar / (16.0 * k * mass * r_C * r_C);
}

double heating_rate_1d(double lambda_1d, double mass, double r_C, double m0, double hbar) {
  return hbar * hbar * mass * lambda_1d / (4.0 * r_C * r_C * m0 * m0);
}

ModelParams ModelParams::make(double gamma, double r_C, double mass, double m0, double v_eta) {
  require_positive(gamma, "gamma");
  require_positive(r_C, "r_C");
  require_positive(mass, "mass");
  require_positive(m0, "m0");
  require_positive(v_eta, "v_eta");
  ModelParams p;
  p.gamma_ = gamma;
  p.r_C_ = r_C;
  p.mass_ = mass;
  p.m0_ = m0;
  p.v_eta_ = v_eta;
  p.lambda_ = lambda_from_gamma(gamma, r_C);
  p.k_ = k_from_v_eta(mass, v_eta, r_C);
  p.temperature_ = temperature_from_v_eta(v_eta, r_C);
  return p;
}

ModelParams ModelParams::ghirardi1990() {
  constexpr double cm3 = 1e-6;
  return make(1e-30 * cm3, 1e-7, PhysicalConstants::nucleon_mass, PhysicalConstants::nucleon_mass,
              1e5);
}

ModelParams ModelParams::adler2007() {
  const double r_C = 1e-7;
  const double gamma = 1e-9 * std::pow(4.0 * pi * r_C * r_C, 1.5);
  return make(gamma, r_C, PhysicalConstants::nucleon_mass, PhysicalConstants::nucleon_mass, 1e5);
}

ModelParams ModelParams::preset(const std::string& name) {
  if (name == "ghirardi1990") return ghirardi1990();
  if (name == "adler2007") return adler2007();
  throw std::invalid_argument("unknown parameter preset '" + name + "'");
}

ModelParams ModelParams::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("parameter config must be a JSON object");
  static const char* const known[] = {"preset", "gamma_cm3_per_s", "r_C_m", "v_eta_m_per_s",
                                      "mass_amu", "derived"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : known) ok = ok || item.key() == key;
    if (!ok) throw std::invalid_argument("unknown parameter key '" + item.key() + "'");
  }

  ModelParams base = preset(j.value("preset", std::string("ghirardi1990")));
  double gamma = base.gamma();
  double r_C = base.r_C();
  double mass = base.mass();
  double v_eta = base.v_eta();
  try {
    if (j.contains("gamma_cm3_per_s")) gamma = j.at("gamma_cm3_per_s").get<double>() * 1e-6;
    if (j.contains("r_C_m")) r_C = j.at("r_C_m").get<double>();
    if (j.contains("mass_amu")) mass = j.at("mass_amu").get<double>() * PhysicalConstants::amu;
    if (j.contains("v_eta_m_per_s")) {
      const auto& v = j.at("v_eta_m_per_s");
      v_eta = v.is_string() && v.get<std::string>() == "inf"
                  ? std::numeric_limits<double>::infinity()
                  : v.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed parameter value: ") + e.what());
  }
  return make(gamma, r_C, mass, base.m0(), v_eta);
}

nlohmann::json ModelParams::to_json() const {
  // Input keys first, so that from_json(to_json()) rebuilds the same model.
  nlohmann::json j;
  j["gamma_cm3_per_s"] = gamma_ * 1e6;
  j["r_C_m"] = r_C_;
  j["mass_amu"] = mass_ / PhysicalConstants::amu;
  nlohmann::json d;
  d["gamma_m3_per_s"] = gamma_;
  d["lambda_per_s"] = lambda_;
  d["mass_kg"] = mass_;
  d["m0_kg"] = m0_;
  if (std::isinf(v_eta_)) {
    j["v_eta_m_per_s"] = "inf";
    d["temperature_K"] = "inf";
  } else {
    j["v_eta_m_per_s"] = v_eta_;
    d["temperature_K"] = temperature_;
  }
  d["k"] = k_;
  j["derived"] = d;
  return j;
}

SimUnits SimUnits::from(const ModelParams& params, double lambda_sim) {
  require_positive(lambda_sim, "lambda_sim");
  const double hbar = PhysicalConstants::hbar;
  SimUnits u;
  u.length = params.r_C();
  u.time = 1.0 / lambda_sim;
  u.momentum = hbar / params.r_C();
  u.energy = hbar * hbar / (params.mass() * params.r_C() * params.r_C());
  return u;
}

SimParams SimParams::dimensionless(double k) {
  SimParams p;
  p.k = k;
  p.validate();
  return p;
}

SimParams SimParams::from_model(const ModelParams& params) {
  SimParams p;
  p.hbar = 1.0;
  p.r_C = 1.0;
  p.lambda = 1.0;
  p.mass = params.mass() * params.r_C() * params.r_C() * params.lambda() / PhysicalConstants::hbar;
  p.m0 = p.mass * params.m0() / params.mass();
  p.k = params.k();
  p.validate();
  return p;
}

double SimParams::thermal_energy() const {
  if (k == 0.0) return std::numeric_limits<double>::infinity();
  return hbar * hbar / (8.0 * mass * k * r_C * r_C);
}

double SimParams::thermal_momentum() const { return std::sqrt(mass * thermal_energy()); }

void SimParams::validate() const {
  require_positive(hbar, "hbar");
  require_positive(mass, "mass");
  require_positive(m0, "m0");
  require_positive(r_C, "r_C");
  require_nonnegative(lambda, "lambda");  // zero switches the collapse off
  require_nonnegative(k, "k");
}

nlohmann::json SimParams::to_json() const {
  return {{"hbar", hbar}, {"mass", mass}, {"m0", m0}, {"r_C", r_C}, {"lambda", lambda}, {"k", k}};
}

}  // namespace dcsl
