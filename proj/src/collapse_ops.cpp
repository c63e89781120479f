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

#include "dcsl/collapse_ops.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace dcsl {

const char* to_string(KernelVariant v) {
  return v == KernelVariant::main ? "main" : "appendixA";
}

KernelVariant kernel_variant_from_string(const std::string& s) {
  if (s == "main") return KernelVariant::main;
  if (s == "appendixA" || s == "appendix_a") return KernelVariant::appendix_a;
  throw std::invalid_argument("unknown kernel variant '" + s + "'");
}

double kernel_value(double Q, double P, double k, double r_C, double hbar) {
  const double u = (1.0 + k) * Q + 2.0 * k * P;
  return std::exp(-r_C * r_C / (2.0 * hbar * hbar) * u * u);
}

double kernel_value_appendix_a(double Q, double P, double k, double r_C, double hbar) {
  // Q = 0 is the continuous limit, where the sign factor squares to one.
  const double sgn = Q < 0.0 ? -1.0 : 1.0;
  const double u = (1.0 + k) * std::abs(Q) + 2.0 * k * P * sgn;
  return std::exp(-r_C * r_C / (2.0 * hbar * hbar) * u * u);
}

double adjoint_kernel_value(double Q, double P, double k, double r_C, double hbar) {
  const double u = (1.0 - k) * Q - 2.0 * k * P;
  return std::exp(-r_C * r_C / (2.0 * hbar * hbar) * u * u);
}

HermitianSplit hermitian_split(double Q, double P, double k, double r_C, double hbar) {
  const double c = r_C * r_C / (hbar * hbar);
  const double w = Q + 2.0 * P;
  const double g = std::exp(-0.5 * c * (Q * Q + k * k * w * w));
  const double s = k * c * Q * w;
  return {g * std::cosh(s), -g * std::sinh(s)};
}

KernelL::KernelL(const Grid& grid, const SimParams& params, KernelVariant variant)
    : grid_(grid), params_(params), variant_(variant) {
  params_.validate();
  if (params_.hbar != grid.hbar()) throw std::domain_error("grid and parameters disagree on hbar");
  const std::size_t n = grid.size();
  values_.resize(n * n);
  squares_.resize(n * n);
  loss_.assign(n, 0.0);
  const auto eval = variant == KernelVariant::main ? kernel_value : kernel_value_appendix_a;
  for (std::size_t q = 0; q < n; ++q) {
    const double Q = grid.p(q);
    for (std::size_t p = 0; p < n; ++p) {
      const double v = eval(Q, grid.p(p), params_.k, params_.r_C, params_.hbar);
      values_[q * n + p] = v;
      squares_[q * n + p] = v * v;
    }
  }
  band_.assign(2 * n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t lo = n, hi = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (values_[q * n + p] >= kNegligible) {
        lo = std::min(lo, p);
        hi = p + 1;
      }
    }
    band_[2 * q] = lo < hi ? lo : 0;
    band_[2 * q + 1] = lo < hi ? hi : 0;
  }
  const double inv_box = 1.0 / grid.box_length();
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) loss_[p] += squares_[q * n + p];
  }
  for (auto& v : loss_) v *= inv_box;
}

std::span<const double> KernelL::row(std::size_t q) const {
  return {values_.data() + q * grid_.size(), grid_.size()};
}

std::span<const double> KernelL::square_row(std::size_t q) const {
  return {squares_.data() + q * grid_.size(), grid_.size()};
}

double KernelL::prefactor() const {
  const auto& p = params_;
  return p.gamma() * p.mass * p.mass / (2.0 * std::numbers::pi * p.hbar * p.m0 * p.m0);
}

void KernelL::apply(std::span<const cplx> field, std::span<const cplx> psi_tilde,
                    std::span<cplx> out, double scale) const {
  const std::size_t n = grid_.size();
  if (field.size() != n || psi_tilde.size() != n || out.size() != n) {
    throw std::domain_error("kernel application: array does not match grid");
  }
  const double s = scale / grid_.box_length();
  for (std::size_t q = 0; q < n; ++q) {
    const cplx g = s * field[q];
    if (g == cplx{}) continue;
    const double* kq = values_.data() + q * n;
    const std::size_t shift = (q + n / 2) % n;
    // out[p + shift (mod n)] += g K[q][p] psi[p], split at the wrap point.
    const std::size_t lo = band_begin(q), hi = band_end(q);
    const std::size_t first = std::clamp(n - shift, lo, hi);
    for (std::size_t p = lo; p < first; ++p) out[p + shift] += g * (kq[p] * psi_tilde[p]);
    for (std::size_t p = first; p < hi; ++p) out[p + shift - n] += g * (kq[p] * psi_tilde[p]);
  }
}

std::vector<cplx> KernelL::correlation(std::span<const cplx> psi_tilde) const {
  const std::size_t n = grid_.size();
  if (psi_tilde.size() != n) throw std::domain_error("correlation: array does not match grid");
  std::vector<cplx> c(n);
  const double dq = grid_.dq();
  for (std::size_t q = 0; q < n; ++q) {
    const double* kq = values_.data() + q * n;
    const std::size_t shift = (q + n / 2) % n;
    const std::size_t lo = band_begin(q), hi = band_end(q);
    const std::size_t first = std::clamp(n - shift, lo, hi);
    cplx acc{};
    for (std::size_t p = lo; p < first; ++p) acc += std::conj(psi_tilde[p + shift]) * (kq[p] * psi_tilde[p]);
    for (std::size_t p = first; p < hi; ++p) acc += std::conj(psi_tilde[p + shift - n]) * (kq[p] * psi_tilde[p]);
    c[q] = acc * dq;
  }
  return c;
}

void KernelL::write_csv(std::ostream& os) const {
  os << "Q,P,L,L2,a,b\n" << std::setprecision(17);
  const std::size_t n = grid_.size();
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto split = hermitian_split(grid_.p(q), grid_.p(p), params_.k, params_.r_C, params_.hbar);
      os << grid_.p(q) << ',' << grid_.p(p) << ',' << value(q, p) << ',' << square(q, p) << ','
         << split.a << ',' << split.b << '\n';
    }
  }
}

SmearedMassDensity::SmearedMassDensity(const Grid& grid, const SimParams& params)
    : n_(grid.size()), dx_(grid.dx()), values_(grid.size() * grid.size()) {
  const double norm = params.mass / (std::sqrt(2.0 * std::numbers::pi) * params.r_C);
  const double L = grid.box_length();
  const double r2 = params.r_C * params.r_C;
  const int images = static_cast<int>(std::ceil(12.0 * params.r_C / L)) + 1;
  for (std::size_t y = 0; y < n_; ++y) {
    for (std::size_t x = 0; x < n_; ++x) {
      const double d = grid.x(y) - grid.x(x);
      double acc = 0.0;
      for (int m = -images; m <= images; ++m) {
        const double u = d + m * L;
        acc += std::exp(-u * u / (2.0 * r2));
      }
      values_[y * n_ + x] = norm * acc;
    }
  }
}

std::vector<double> SmearedMassDensity::smear(std::span<const double> f) const {
  if (f.size() != n_) throw std::domain_error("smear: array does not match grid");
  std::vector<double> out(n_, 0.0);
  for (std::size_t y = 0; y < n_; ++y) {
    const double fy = f[y] * dx_;
    if (fy == 0.0) continue;
    for (std::size_t x = 0; x < n_; ++x) out[x] += values_[y * n_ + x] * fy;
  }
  return out;
}

std::vector<cplx> apply_noise_operator(std::span<const cplx> psi_tilde, const NoiseField& noise,
                                       const KernelL& kernel) {
  const auto& p = kernel.params();
  if (noise.transform.size() != kernel.size()) {
    throw std::domain_error("noise field does not match kernel grid");
  }
  std::vector<cplx> out(kernel.size());
  kernel.apply(noise.transform, psi_tilde, out, std::sqrt(p.gamma()) * p.mass / p.m0);
  return out;
}

std::vector<cplx> apply_noise_position_space(std::span<const cplx> psi, const NoiseField& noise,
                                             const SmearedMassDensity& density,
                                             const SimParams& params) {
  if (psi.size() != noise.increments.size()) {
    throw std::domain_error("noise field does not match state grid");
  }
  const auto smeared = density.smear(noise.increments);
  const double scale = std::sqrt(params.gamma()) / params.m0;
  std::vector<cplx> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = scale * smeared[i] * psi[i];
  return out;
}

}  // namespace dcsl
