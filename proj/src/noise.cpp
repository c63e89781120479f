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

#include "dcsl/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace dcsl {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_id)
    : master_seed_(master_seed),
      trajectory_id_(trajectory_id),
      engine_(make_engine(master_seed, trajectory_id)) {}

void NoiseStream::sample_increments(double dt, double dx, std::span<double> out) {
  if (!(dt > 0.0)) throw std::domain_error("noise time step must be positive");
  if (!(dx > 0.0)) throw std::domain_error("grid spacing must be positive");
  const double sd = std::sqrt(dt / dx);
  for (auto& v : out) v = sd * normal_(engine_);
}

std::vector<double> NoiseStream::sample_increments(double dt, const Grid& grid) {
  std::vector<double> out(grid.size());
  sample_increments(dt, grid.dx(), out);
  return out;
}

NoiseField NoiseField::zero(const Grid& grid, double dt) {
  return {dt, std::vector<double>(grid.size(), 0.0), std::vector<cplx>(grid.size())};
}

std::vector<cplx> momentum_transform(std::span<const double> increments, const Grid& grid) {
  std::vector<cplx> out(grid.size());
  grid.fourier(increments, out);
  return out;
}

NoiseField draw_noise(NoiseStream& stream, const Grid& grid, double dt) {
  NoiseField field;
  field.dt = dt;
  field.increments = stream.sample_increments(dt, grid);
  field.transform = momentum_transform(field.increments, grid);
  return field;
}

}  // namespace dcsl
