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

#include <Eigen/Dense>

#include "dcsl/grid.hpp"
#include "dcsl/qstate.hpp"

namespace dcsl {

/// One-particle density matrix rho(P_i, P_j) on the momentum grid, normalised
/// so that the plain matrix trace is one.
class DensityMatrix {
 public:
  explicit DensityMatrix(Grid grid);
  DensityMatrix(Grid grid, Eigen::MatrixXcd rho);

  static DensityMatrix from_pure(const WaveState& state);
  static DensityMatrix from_momentum_amplitudes(const Grid& grid, std::span<const cplx> psi_tilde);
  /// Diagonal state with the given (unnormalised, non-negative) momentum weights.
  static DensityMatrix diagonal(const Grid& grid, std::span<const double> weights);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::MatrixXcd& matrix() { return rho_; }
  std::size_t size() const { return grid_.size(); }

  cplx trace() const { return rho_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double mean_p2() const;
  double kinetic_energy(double mass) const { return mean_p2() / (2.0 * mass); }
  /// rho(x_i, x_j) dx, same trace convention.
  Eigen::MatrixXcd position_matrix() const;

  /// rho(P', P'') -> exp(-i (P' - P'') a / hbar) rho: the state translated by a.
  DensityMatrix translated(double a) const;
  /// Cyclic momentum shift by `steps` grid points: rho(P', P'') -> rho(P' - s dQ, P'' - s dQ).
  DensityMatrix boosted(std::ptrdiff_t steps) const;

 private:
  Grid grid_;
  Eigen::MatrixXcd rho_;
};

/// (1/2) || a - b ||_1 via the eigenvalues of the Hermitian part of the difference.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace dcsl
