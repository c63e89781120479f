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

#include <json.hpp>

#include "dcsl/params.hpp"

namespace dcsl {

/// Homogeneous rigid sphere of N nucleons, SI units. D is a number density.
struct MacroBody {
  double N = 0.0;
  double R = 0.0;
  double D = 0.0;
  double r_C = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;  // m^3 / s
  double k = 0.0;

  static MacroBody from_density(double R, double D, const ModelParams& params);
  static MacroBody from_count(double R, double N, const ModelParams& params);
  /// N = 1e25 (R[cm])^3, the rounded nucleon count of a 5 g/cm^3 solid.
  static MacroBody reference(double R, const ModelParams& params);

  double volume() const;
  nlohmann::json to_json() const;
};

/// lambda n^2 N_tilde.
double amplification_rate(double lambda, double n, double n_tilde);
/// Sphere form with n = N r_C^3 / V and N_tilde = V / r_C^3.
double amplification_rate(const MacroBody& body);

/// 16 sqrt(2) k r_C^5 lambda / (2 r_C^2 + R^2)^{5/2}, first order in k.
double sphere_dissipation_rate(double k, double lambda, double r_C, double R);
double sphere_dissipation_rate(const MacroBody& body);

struct RateReport {
  MacroBody body;
  double Gamma = 0.0;
  double chi = 0.0;
  /// Gamma / chi; infinite when chi = 0.
  double ratio = 0.0;
  /// 1e4 N^2 (R / r_C)^2.
  double ratio_asymptotic = 0.0;
  /// R / r_C >= 1e3, where the asymptotic estimate is meant to apply.
  bool asymptotic_regime = false;
  nlohmann::json to_json() const;
};

RateReport rate_ratio(const MacroBody& body);

/// Intersection volume of two radius-R spheres whose centres are d apart.
double sphere_overlap_volume(double R, double d);
/// gamma D n_out(d), n_out = D (V - overlap). Saturates at gamma D N for d >= 2R.
double sharp_scanning_Lambda(double d, const MacroBody& body);

}  // namespace dcsl
