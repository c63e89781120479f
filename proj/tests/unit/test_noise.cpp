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
#include <numeric>
#include <vector>

#include "dcsl/noise.hpp"

using namespace dcsl;

TEST_CASE("substreams are reproducible and distinct") {
  const Grid grid(64, 10.0);
  NoiseStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const auto xa = a.sample_increments(0.01, grid);
  CHECK(xa == b.sample_increments(0.01, grid));
  CHECK(xa != c.sample_increments(0.01, grid));
  CHECK(xa != d.sample_increments(0.01, grid));
  CHECK(a.master_seed() == 7);
  CHECK(a.trajectory_id() == 3);
}

TEST_CASE("increments have variance dt / dx") {
  const Grid grid(128, 16.0);
  const double dt = 0.02;
  NoiseStream s(11, 0);
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    for (double w : s.sample_increments(dt, grid)) {
      sum += w;
      sum2 += w * w;
      ++count;
    }
  }
  const double var_expected = dt / grid.dx();
  const double mean = sum / static_cast<double>(count);
  const double var = sum2 / static_cast<double>(count) - mean * mean;
  // Five standard errors of the sample mean and of the sample variance.
  CHECK(std::abs(mean) < 5.0 * std::sqrt(var_expected / static_cast<double>(count)));
  CHECK(std::abs(var - var_expected) < 5.0 * var_expected * std::sqrt(2.0 / static_cast<double>(count)));
}

TEST_CASE("momentum transform is the grid Fourier transform") {
  const Grid grid(32, 6.0);
  NoiseStream s(1, 2);
  const auto f = draw_noise(s, grid, 0.01);
  CHECK(f.dt == 0.01);
  REQUIRE(f.increments.size() == grid.size());
  std::vector<cplx> direct(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      direct[q] += grid.dx() * f.increments[i] * std::polar(1.0, -grid.p(q) * grid.x(i) / grid.hbar());
    }
  }
  for (std::size_t q = 0; q < grid.size(); ++q) CHECK(std::abs(direct[q] - f.transform[q]) < 1e-12);
  // Real input: the transform at -Q is the conjugate of the transform at Q.
  for (std::size_t q = 1; q < grid.size(); ++q) {
    CHECK(std::abs(f.transform[grid.negated(q)] - std::conj(f.transform[q])) < 1e-12);
  }
  // Parseval: (1/L) sum |W^(Q)|^2 = dx sum W^2.
  double lhs = 0.0, rhs = 0.0;
  for (const auto& v : f.transform) lhs += std::norm(v);
  for (double w : f.increments) rhs += w * w;
  CHECK(lhs / grid.box_length() == doctest::Approx(rhs * grid.dx()).epsilon(1e-12));
}

TEST_CASE("transform power is L dt per mode") {
  const Grid grid(64, 8.0);
  const double dt = 0.01;
  NoiseStream s(3, 0);
  std::vector<double> power(grid.size(), 0.0);
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    const auto f = draw_noise(s, grid, dt);
    for (std::size_t q = 0; q < grid.size(); ++q) power[q] += std::norm(f.transform[q]);
  }
  const double mean = std::accumulate(power.begin(), power.end(), 0.0) / (reps * grid.size());
  CHECK(mean == doctest::Approx(grid.box_length() * dt).epsilon(0.02));
}

TEST_CASE("zero noise field") {
  const Grid grid(16, 4.0);
  const auto z = NoiseField::zero(grid, 0.05);
  CHECK(z.dt == 0.05);
  for (double w : z.increments) CHECK(w == 0.0);
  for (const auto& v : z.transform) CHECK(v == cplx{});
}
