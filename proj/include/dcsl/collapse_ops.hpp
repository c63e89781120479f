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

#include <ostream>
#include <span>
#include <vector>

#include "dcsl/grid.hpp"
#include "dcsl/noise.hpp"
#include "dcsl/params.hpp"

namespace dcsl {

/// Which momentum kernel defines the collapse operators.
enum class KernelVariant {
  main,        // exp(-(r_C^2 / 2 hbar^2) ((1+k) Q + 2 k P)^2)
  appendix_a,  // exp(-(r_C^2 / 2 hbar^2) ((1+k) |Q| + 2 k P sgn Q)^2), continuous at Q = 0
};

const char* to_string(KernelVariant v);
KernelVariant kernel_variant_from_string(const std::string& s);

/// Scalar kernel evaluations.
double kernel_value(double Q, double P, double k, double r_C, double hbar);
double kernel_value_appendix_a(double Q, double P, double k, double r_C, double hbar);
/// Kernel of the adjoint operator, exp(-(r_C^2 / 2 hbar^2) ((1-k) Q - 2 k P)^2).
double adjoint_kernel_value(double Q, double P, double k, double r_C, double hbar);

/// Pointwise hermitian / anti-hermitian decomposition of the kernel:
///   a = G cosh(s),  b = -G sinh(s),
///   G = exp(-(r_C^2 / 2 hbar^2)(Q^2 + k^2 (Q + 2P)^2)),  s = (k r_C^2 / hbar^2) Q (Q + 2P).
/// With this sign convention L = a + b and L^dagger = a - b pointwise; the
/// self-adjoint operator L^(b) of L = L^(a) + i L^(b) has kernel -i b.
struct HermitianSplit {
  double a = 0.0;
  double b = 0.0;
};
HermitianSplit hermitian_split(double Q, double P, double k, double r_C, double hbar);

/// Momentum-space collapse kernel L(Q_q, P_p) tabulated on a grid, stored
/// row-major by transfer index q. Immutable; share freely across workers.
class KernelL {
 public:
  KernelL(const Grid& grid, const SimParams& params, KernelVariant variant = KernelVariant::main);

  const Grid& grid() const { return grid_; }
  const SimParams& params() const { return params_; }
  KernelVariant variant() const { return variant_; }
  double k() const { return params_.k; }
  std::size_t size() const { return grid_.size(); }

  double value(std::size_t q, std::size_t p) const { return values_[q * grid_.size() + p]; }
  double square(std::size_t q, std::size_t p) const { return squares_[q * grid_.size() + p]; }
  std::span<const double> row(std::size_t q) const;
  std::span<const double> square_row(std::size_t q) const;
  /// Row q is below kNegligible outside [band_begin(q), band_end(q)); the kernel
  /// is unimodal in P, so the band is contiguous (and possibly empty).
  std::size_t band_begin(std::size_t q) const { return band_[2 * q]; }
  std::size_t band_end(std::size_t q) const { return band_[2 * q + 1]; }
  static constexpr double kNegligible = 1e-20;

  /// gamma m^2 / (2 pi hbar m0^2), the master-equation prefactor.
  double prefactor() const;
  /// sum_Q (dQ / 2 pi hbar) L^2(Q, P_p): the P-diagonal of (1/m^2) int dy L^dagger(y) L(y).
  std::span<const double> loss_sum() const { return loss_; }

  /// out(P') += scale * (dQ / 2 pi hbar) sum_Q field(Q) L(Q, P'-Q) psi~(P'-Q),
  /// i.e. the action of int dy f(y) L(y) / m for f with transform `field`.
  void apply(std::span<const cplx> field, std::span<const cplx> psi_tilde, std::span<cplx> out,
             double scale) const;

  /// C(Q) = dQ sum_P conj(psi~(P+Q)) L(Q, P) psi~(P); then
  /// <L(y)> = (m / box) sum_Q C(Q) exp(-i Q y / hbar).
  std::vector<cplx> correlation(std::span<const cplx> psi_tilde) const;

  /// Rows "Q,P,L,L2,a,b".
  void write_csv(std::ostream& os) const;

 private:
  Grid grid_;
  SimParams params_;
  KernelVariant variant_;
  std::vector<double> values_;
  std::vector<double> squares_;
  std::vector<double> loss_;
  std::vector<std::size_t> band_;
};

/// M(y_i, x_j) = m (2 pi r_C^2)^{-1/2} exp(-(y - x)^2 / (2 r_C^2)), summed over
/// periodic images of the box.
class SmearedMassDensity {
 public:
  SmearedMassDensity(const Grid& grid, const SimParams& params);

  double operator()(std::size_t y, std::size_t x) const { return values_[y * n_ + x]; }
  /// (M * f)(x_i) = sum_y M(y, x_i) f(y) dy.
  std::vector<double> smear(std::span<const double> f) const;

 private:
  std::size_t n_;
  double dx_;
  std::vector<double> values_;
};

/// Spectral noise term of the SDE: (sqrt(gamma)/m0) int dy L(y) dW(y) psi, in
/// the momentum representation.
std::vector<cplx> apply_noise_operator(std::span<const cplx> psi_tilde, const NoiseField& noise,
                                       const KernelL& kernel);

/// Reference route for k = 0: (sqrt(gamma)/m0) (M * dW)(x) psi(x) in position space.
std::vector<cplx> apply_noise_position_space(std::span<const cplx> psi, const NoiseField& noise,
                                             const SmearedMassDensity& density,
                                             const SimParams& params);

}  // namespace dcsl
