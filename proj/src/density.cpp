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

#include "dcsl/density.hpp"

#include <cmath>
#include <stdexcept>

namespace dcsl {

DensityMatrix::DensityMatrix(Grid grid)
    : grid_(std::move(grid)), rho_(Eigen::MatrixXcd::Zero(grid_.size(), grid_.size())) {}

DensityMatrix::DensityMatrix(Grid grid, Eigen::MatrixXcd rho) : grid_(std::move(grid)), rho_(std::move(rho)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (rho_.rows() != n || rho_.cols() != n) throw std::domain_error("density matrix does not match grid");
}

DensityMatrix DensityMatrix::from_momentum_amplitudes(const Grid& grid, std::span<const cplx> psi_tilde) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::Map<const Eigen::VectorXcd> v(psi_tilde.data(), n);
  Eigen::MatrixXcd rho = v * v.adjoint() * grid.dq();
  return DensityMatrix(grid, std::move(rho));
}

DensityMatrix DensityMatrix::from_pure(const WaveState& state) {
  auto tilde = state.momentum();
  return from_momentum_amplitudes(state.grid(), tilde);
}

DensityMatrix DensityMatrix::diagonal(const Grid& grid, std::span<const double> weights) {
  if (weights.size() != grid.size()) throw std::domain_error("weights do not match grid");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::domain_error("diagonal weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::domain_error("diagonal weights sum to zero");
  DensityMatrix d(grid);
  for (std::size_t i = 0; i < weights.size(); ++i) d.rho_(i, i) = weights[i] / total;
  return d;
}

double DensityMatrix::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::mean_p2() const {
  double s = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const double p = grid_.p(j);
    s += p * p * rho_(j, j).real();
  }
  return s / rho_.trace().real();
}

Eigen::MatrixXcd DensityMatrix::position_matrix() const {
  // Column-wise transform of rho, then of its adjoint: U rho U^dagger.
  const std::size_t n = grid_.size();
  Eigen::MatrixXcd tmp(n, n), out(n, n);
  std::vector<cplx> col(n), res(n);
  const double to_unitary = std::sqrt(grid_.dx() / grid_.dq());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rho_(i, j);
    grid_.to_position(col, res);
    for (std::size_t i = 0; i < n; ++i) tmp(i, j) = res[i] * to_unitary;
  }
  Eigen::MatrixXcd tmp_adj = tmp.adjoint();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = tmp_adj(i, j);
    grid_.to_position(col, res);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = res[i] * to_unitary;
  }
  return out.adjoint();
}

DensityMatrix DensityMatrix::translated(double a) const {
  const std::size_t n = grid_.size();
  DensityMatrix out(grid_);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx right = std::polar(1.0, grid_.p(j) * a / grid_.hbar());
    for (std::size_t i = 0; i < n; ++i) {
      out.rho_(i, j) = std::polar(1.0, -grid_.p(i) * a / grid_.hbar()) * rho_(i, j) * right;
    }
  }
  return out;
}

DensityMatrix DensityMatrix::boosted(std::ptrdiff_t steps) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.size());
  DensityMatrix out(grid_);
  auto wrap = [n](std::ptrdiff_t i) { return ((i % n) + n) % n; };
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out.rho_(wrap(i + steps), wrap(j + steps)) = rho_(i, j);
  }
  return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd d = a - b;
  Eigen::MatrixXcd h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!a.grid().same_as(b.grid())) throw std::domain_error("trace distance between different grids");
  return trace_distance(a.matrix(), b.matrix());
}

}  // namespace dcsl
