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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dcsl/grid.hpp"

namespace dcsl {

/// Reproducible stream of space-time white-noise increments for one trajectory.
///
/// Each trajectory draws from its own engine seeded by (master_seed,
/// trajectory_id), so ensembles are deterministic regardless of how
/// trajectories are scheduled. The stream never depends on the state it drives.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_id);

  /// Fills `out` with independent N(0, dt/dx) samples, one per grid point.
  void sample_increments(double dt, double dx, std::span<double> out);
  std::vector<double> sample_increments(double dt, const Grid& grid);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trajectory_id() const { return trajectory_id_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t trajectory_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One step's worth of noise: real increments dW(y_i) and their transform.
struct NoiseField {
  double dt = 0.0;
  std::vector<double> increments;
  std::vector<cplx> transform;

  static NoiseField zero(const Grid& grid, double dt);
};

/// W^(Q_j) = sum_i dW_i exp(-i Q_j y_i / hbar) dx.
std::vector<cplx> momentum_transform(std::span<const double> increments, const Grid& grid);

/// Draws the next step's noise from `stream` and transforms it.
NoiseField draw_noise(NoiseStream& stream, const Grid& grid, double dt);

}  // namespace dcsl
