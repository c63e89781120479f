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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dcsl/collapse_ops.hpp"
#include "dcsl/qstate.hpp"

using namespace dcsl;

namespace {

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("hermitian split reconstructs the kernel and its adjoint") {
  for (double k : {0.0, 3e-6, 0.25, 1.5}) {
    for (double Q = -4.0; Q <= 4.0; Q += 0.37) {
      for (double P = -6.0; P <= 6.0; P += 0.53) {
        const auto s = hermitian_split(Q, P, k, 1.0, 1.0);
        const double l = kernel_value(Q, P, k, 1.0, 1.0);
        const double la = adjoint_kernel_value(Q, P, k, 1.0, 1.0);
        CHECK(std::abs(s.a + s.b - l) <= 1e-12);
        CHECK(std::abs(s.a - s.b - la) <= 1e-12);
      }
    }
  }
}

TEST_CASE("adjoint kernel is the kernel read backwards") {
  // <P|L^dagger|P+Q> = <P+Q|L|P>: the adjoint transfers -Q from P+Q.
  for (double k : {0.0, 0.1, 0.25}) {
    for (double Q = -3.0; Q <= 3.0; Q += 0.41) {
      for (double P = -3.0; P <= 3.0; P += 0.29) {
        CHECK(adjoint_kernel_value(Q, P, k, 0.8, 1.3) ==
              doctest::Approx(kernel_value(-Q, P + Q, k, 0.8, 1.3)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("appendix-A kernel equals the main kernel in one dimension") {
  for (double k : {0.0, 0.25, 0.9}) {
    for (double Q = -3.0; Q <= 3.0; Q += 0.25) {
      for (double P = -5.0; P <= 5.0; P += 0.5) {
        CHECK(kernel_value_appendix_a(Q, P, k, 1.0, 1.0) == kernel_value(Q, P, k, 1.0, 1.0));
      }
    }
    // Q = 0 by continuity: exp(-2 k^2 r_C^2 P^2 / hbar^2).
    for (double P : {-2.0, 0.0, 1.5}) {
      CHECK(kernel_value_appendix_a(0.0, P, k, 1.0, 1.0) ==
            doctest::Approx(std::exp(-2.0 * k * k * P * P)).epsilon(1e-15));
    }
  }
  CHECK(kernel_variant_from_string("appendixA") == KernelVariant::appendix_a);
  CHECK(std::string(to_string(KernelVariant::main)) == "main");
  CHECK_THROWS_AS(kernel_variant_from_string("other"), std::invalid_argument);
}

TEST_CASE("k = 0 spectral noise application equals position-space multiplication") {
  const Grid grid(256, 24.0);
  const auto p = SimParams::dimensionless(0.0);
  const KernelL kernel(grid, p);
  const SmearedMassDensity density(grid, p);
  const auto state = gaussian_superposition(grid, 2.5, 0.55, {cplx(0.8), cplx(0.0, 0.6)});
  NoiseStream stream(5, 0);
  const auto noise = draw_noise(stream, grid, 0.01);
  const auto spectral = grid.to_position(apply_noise_operator(state.momentum(), noise, kernel));
  const auto direct = apply_noise_position_space(state.psi(), noise, density, p);
  CHECK(max_abs_diff(spectral, direct) <= 1e-10);
}

TEST_CASE("smeared mass density integrates to the mass") {
  const Grid grid(128, 20.0);
  SimParams p = SimParams::dimensionless(0.0);
  p.mass = 2.5;
  const SmearedMassDensity density(grid, p);
  for (std::size_t y : {std::size_t{0}, std::size_t{40}, std::size_t{127}}) {
    double s = 0.0;
    for (std::size_t x = 0; x < grid.size(); ++x) s += density(y, x) * grid.dx();
    CHECK(s == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("loss sum at k = 0 equals the Gaussian integral") {
  // (1/2 pi hbar) int dQ exp(-r^2 Q^2 / hbar^2) = 1 / (2 sqrt(pi) r).
  const Grid grid(256, 40.0);
  const auto p = SimParams::dimensionless(0.0);
  const KernelL kernel(grid, p);
  const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                          [](double q) { return std::exp(-q * q); }, -30.0, 30.0) /
                      (2.0 * std::numbers::pi);
  CHECK(quad == doctest::Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).epsilon(1e-12));
  for (double v : kernel.loss_sum()) CHECK(v == doctest::Approx(quad).epsilon(1e-12));
  // gamma times the loss is the saturated decoherence rate lambda.
  CHECK(p.gamma() * kernel.loss_sum()[0] == doctest::Approx(p.lambda).epsilon(1e-12));
}

TEST_CASE("loss sum for k > 0 is (1+k)^-1 of the k = 0 value") {
  const Grid grid(128, 2.0 * std::numbers::pi / 0.1);
  const auto p = SimParams::dimensionless(0.25);
  const KernelL kernel(grid, p);
  const double expected = 1.0 / (2.0 * std::sqrt(std::numbers::pi) * 1.25);
  // Away from the edges the Q-sum covers the whole Gaussian.
  for (std::size_t j = 48; j < 80; ++j) CHECK(kernel.loss_sum()[j] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("kernel apply matches the defining double sum") {
  const Grid grid(32, 8.0);
  const auto p = SimParams::dimensionless(0.3);
  const KernelL kernel(grid, p);
  std::vector<cplx> field(grid.size()), psi(grid.size()), out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    field[i] = cplx(std::sin(0.3 * i), std::cos(0.7 * i));
    psi[i] = cplx(std::exp(-0.1 * std::pow(double(i) - 16.0, 2)), 0.1 * i);
  }
  kernel.apply(field, psi, out, 1.7);
  std::vector<cplx> ref(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = kernel_value(grid.p(q), grid.p(j), 0.3, 1.0, 1.0);
      if (v < KernelL::kNegligible) continue;
      ref[grid.shifted(j, q)] += 1.7 / grid.box_length() * field[q] * v * psi[j];
    }
  }
  CHECK(max_abs_diff(out, ref) < 1e-13);

  const auto c = kernel.correlation(psi);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    cplx acc{};
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = kernel_value(grid.p(q), grid.p(j), 0.3, 1.0, 1.0);
      if (v < KernelL::kNegligible) continue;
      acc += std::conj(psi[grid.shifted(j, q)]) * v * psi[j] * grid.dq();
    }
    CHECK(std::abs(acc - c[q]) < 1e-13);
  }
}

TEST_CASE("master prefactor") {
  const Grid grid(16, 4.0);
  SimParams p = SimParams::dimensionless(0.0);
  p.mass = 2.0;
  const KernelL kernel(grid, p);
  CHECK(kernel.prefactor() == doctest::Approx(p.gamma() * 4.0 / (2.0 * std::numbers::pi)).epsilon(1e-15));
  SimParams bad = p;
  bad.hbar = 2.0;
  CHECK_THROWS_AS(KernelL(grid, bad), std::domain_error);
}

TEST_CASE("kernel csv") {
  const Grid grid(4, 2.0);
  const KernelL kernel(grid, SimParams::dimensionless(0.25));
  std::ostringstream os;
  kernel.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "Q,P,L,L2,a,b");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 16);
}
