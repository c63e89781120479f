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

#include "dcsl/macro_rates.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dcsl {
namespace {

double sphere_volume(double R) { return 4.0 * std::numbers::pi * R * R * R / 3.0; }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(name) + " must be positive and finite");
}

MacroBody base(double R, const ModelParams& params) {
  require_positive(R, "radius");
  MacroBody b;
  b.R = R;
  b.r_C = params.r_C();
  b.lambda = params.lambda();
  b.gamma = params.gamma();
  b.k = params.k();
  return b;
}

}  // namespace

MacroBody MacroBody::from_density(double R, double D, const ModelParams& params) {
  require_positive(D, "density");
  auto b = base(R, params);
  b.D = D;
  b.N = D * sphere_volume(R);
  return b;
}

MacroBody MacroBody::from_count(double R, double N, const ModelParams& params) {
  require_positive(N, "particle count");
  auto b = base(R, params);
  b.N = N;
  b.D = N / sphere_volume(R);
  return b;
}

MacroBody MacroBody::reference(double R, const ModelParams& params) {
  const double r_cm = R * 100.0;
  return from_count(R, 1e25 * r_cm * r_cm * r_cm, params);
}

double MacroBody::volume() const { return sphere_volume(R); }

nlohmann::json MacroBody::to_json() const {
  return {{"N", N}, {"R_m", R}, {"D_per_m3", D}, {"r_C_m", r_C},
          {"lambda_per_s", lambda}, {"gamma_m3_per_s", gamma}, {"k", k}};
}

double amplification_rate(double lambda, double n, double n_tilde) {
  if (lambda < 0.0 || n < 0.0 || n_tilde < 0.0) throw std::domain_error("amplification inputs must be non-negative");
  return lambda * n * n * n_tilde;
}

double amplification_rate(const MacroBody& body) {
  const double cell = body.r_C * body.r_C * body.r_C;
  const double v = body.volume();
  return amplification_rate(body.lambda, body.N * cell / v, v / cell);
}

double sphere_dissipation_rate(double k, double lambda, double r_C, double R) {
  require_positive(R, "radius");
  require_positive(r_C, "r_C");
  if (k < 0.0) throw std::domain_error("k must be non-negative");
  if (lambda < 0.0) throw std::domain_error("lambda must be non-negative");
  const double r5 = std::pow(r_C, 5);
  return 16.0 * std::numbers::sqrt2 * k * r5 * lambda / std::pow(2.0 * r_C * r_C + R * R, 2.5);
}

double sphere_dissipation_rate(const MacroBody& body) {
  return sphere_dissipation_rate(body.k, body.lambda, body.r_C, body.R);
}

nlohmann::json RateReport::to_json() const {
  return {{"body", body.to_json()},
          {"Gamma_per_s", Gamma},
          {"chi_per_s", chi},
          {"ratio", std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json("inf")},
          {"ratio_asymptotic", ratio_asymptotic},
          {"asymptotic_regime", asymptotic_regime}};
}

RateReport rate_ratio(const MacroBody& body) {
  RateReport r;
  r.body = body;
  r.Gamma = amplification_rate(body);
  r.chi = sphere_dissipation_rate(body);
  r.ratio = r.chi > 0.0 ? r.Gamma / r.chi : std::numeric_limits<double>::infinity();
  const double s = body.R / body.r_C;
  r.ratio_asymptotic = 1e4 * body.N * body.N * s * s;
  r.asymptotic_regime = s >= 1e3;
  return r;
}

double sphere_overlap_volume(double R, double d) {
  require_positive(R, "radius");
  if (d < 0.0) throw std::domain_error("displacement must be non-negative");
  if (d >= 2.0 * R) return 0.0;
  const double gap = 2.0 * R - d;
  return std::numbers::pi * (4.0 * R + d) * gap * gap / 12.0;
}

double sharp_scanning_Lambda(double d, const MacroBody& body) {
  const double n_out = body.D * (body.volume() - sphere_overlap_volume(body.R, d));
  return body.gamma * body.D * n_out;
}

}  // namespace dcsl
