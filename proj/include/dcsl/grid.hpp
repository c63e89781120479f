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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dcsl {

using cplx = std::complex<double>;

/// Uniform periodic 1D grid with its dual momentum grid.
///
/// Positions are x_i = (i - n/2) dx and momenta P_j = (j - n/2) dQ with
/// dQ = 2 pi hbar / L. The same index set labels momentum transfers Q, so
/// P_j + Q_q lands on index shifted(j, q) modulo n.
///
/// Transforms use the continuum normalisation
///   psi~(P_j) = dx / sqrt(2 pi hbar) * sum_i psi(x_i) exp(-i P_j x_i / hbar)
/// which is unitary between sum |psi|^2 dx and sum |psi~|^2 dQ.
class Grid {
 public:
  Grid(std::size_t n, double box_length, double hbar = 1.0);

  std::size_t size() const { return n_; }
  double box_length() const { return box_; }
  double hbar() const { return hbar_; }
  double dx() const { return box_ / static_cast<double>(n_); }
  double dq() const;

  double x(std::size_t i) const { return (static_cast<double>(i) - half()) * dx(); }
  double p(std::size_t j) const { return (static_cast<double>(j) - half()) * dq(); }
  std::vector<double> positions() const;
  std::vector<double> momenta() const;

  /// Index of P_p + Q_q, wrapped onto the grid.
  std::size_t shifted(std::size_t p, std::size_t q) const { return (p + q + n_ / 2) % n_; }
  /// Index of -Q_q (the Nyquist index maps onto itself).
  std::size_t negated(std::size_t q) const { return (n_ - q) % n_; }

  void to_momentum(std::span<const cplx> psi, std::span<cplx> out) const;
  void to_position(std::span<const cplx> psi_tilde, std::span<cplx> out) const;
  std::vector<cplx> to_momentum(std::span<const cplx> psi) const;
  std::vector<cplx> to_position(std::span<const cplx> psi_tilde) const;

  /// f^(Q_q) = dx * sum_i f(x_i) exp(-i Q_q x_i / hbar) for real samples f.
  void fourier(std::span<const double> f, std::span<cplx> out) const;

  bool same_as(const Grid& other) const;

 private:
  struct Plans;

  double half() const { return static_cast<double>(n_ / 2); }
  void centered_dft(std::span<const cplx> in, std::span<cplx> out, bool forward) const;

  std::size_t n_;
  double box_;
  double hbar_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace dcsl
