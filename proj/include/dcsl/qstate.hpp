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

#include <array>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "dcsl/grid.hpp"

namespace dcsl {

/// One-particle wavefunction sampled on a periodic grid (position representation).
class WaveState {
 public:
  WaveState(Grid grid, std::vector<cplx> psi);
  static WaveState from_momentum(Grid grid, std::span<const cplx> psi_tilde);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> psi() const { return psi_; }
  std::span<cplx> psi() { return psi_; }
  std::vector<cplx> momentum() const { return grid_.to_momentum(psi_); }

  double norm_squared() const;
  void normalize();
  /// Multiplies by exp(i p0 x / hbar).
  void boost(double p0);

 private:
  Grid grid_;
  std::vector<cplx> psi_;
};

struct ObservableSet {
  double norm = 0.0;
  double mean_x = 0.0;
  double var_x = 0.0;
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  double kinetic_energy = 0.0;
  /// Probability within 3 dx of the box edge exceeds 1e-8.
  bool wraparound = false;
};

/// Normalised w1 g(x - alpha) + w2 g(x + alpha) with g(x) = exp(-x^2 / (4 sigma^2)).
WaveState gaussian_superposition(const Grid& grid, double alpha, double sigma,
                                 std::array<cplx, 2> weights);

/// Expectation values in the normalised state; momentum moments are taken in
/// the momentum representation. Throws std::domain_error for a zero state.
ObservableSet observables(const WaveState& state, double mass);

/// Same, for a state stored in the momentum representation.
ObservableSet observables_from_momentum(const Grid& grid, std::span<const cplx> psi_tilde,
                                        double mass);

/// Rows "x,re,im,abs2".
void write_csv(std::ostream& os, const WaveState& state, bool header = true);
nlohmann::json to_json(const WaveState& state, const nlohmann::json& metadata);

}  // namespace dcsl
