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

#include "dcsl/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dcsl {

namespace {
// The FFTW planner is not re-entrant; execution with the new-array interface is.
std::mutex planner_mutex;
}  // namespace

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n) {
    // In-place plans: centered_dft executes them on a single scratch buffer.
    std::vector<cplx> a(n);
    auto* io = reinterpret_cast<fftw_complex*>(a.data());
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex);
    forward = fftw_plan_dft_1d(len, io, io, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward = fftw_plan_dft_1d(len, io, io, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Grid::Grid(std::size_t n, double box_length, double hbar) : n_(n), box_(box_length), hbar_(hbar) {
  if (n < 4 || n % 2 != 0) throw std::domain_error("grid size must be even and at least 4");
  if (!(box_length > 0.0)) throw std::domain_error("box length must be positive");
  if (!(hbar > 0.0)) throw std::domain_error("hbar must be positive");
  plans_ = std::make_shared<const Plans>(n);
}

double Grid::dq() const { return 2.0 * std::numbers::pi * hbar_ / box_; }

std::vector<double> Grid::positions() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

std::vector<double> Grid::momenta() const {
  std::vector<double> ps(n_);
  for (std::size_t j = 0; j < n_; ++j) ps[j] = p(j);
  return ps;
}

// With centred indices (j - n/2)(i - n/2) the DFT kernel factorises into
// (-1)^{n/2} (-1)^j (-1)^i exp(-2 pi i j i / n).
void Grid::centered_dft(std::span<const cplx> in, std::span<cplx> out, bool forward) const {
  if (in.size() != n_ || out.size() != n_) throw std::domain_error("array does not match grid");
  std::vector<cplx> buf(n_);
  for (std::size_t i = 0; i < n_; ++i) buf[i] = (i % 2 == 0) ? in[i] : -in[i];
  auto* io = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(forward ? plans_->forward : plans_->backward, io, io);
  const double global = ((n_ / 2) % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n_; ++j) out[j] = ((j % 2 == 0) ? global : -global) * buf[j];
}

void Grid::to_momentum(std::span<const cplx> psi, std::span<cplx> out) const {
  centered_dft(psi, out, true);
  const double scale = dx() / std::sqrt(2.0 * std::numbers::pi * hbar_);
  for (auto& v : out) v *= scale;
}

void Grid::to_position(std::span<const cplx> psi_tilde, std::span<cplx> out) const {
  centered_dft(psi_tilde, out, false);
  const double scale = dq() / std::sqrt(2.0 * std::numbers::pi * hbar_);
  for (auto& v : out) v *= scale;
}

std::vector<cplx> Grid::to_momentum(std::span<const cplx> psi) const {
  std::vector<cplx> out(n_);
  to_momentum(psi, out);
  return out;
}

std::vector<cplx> Grid::to_position(std::span<const cplx> psi_tilde) const {
  std::vector<cplx> out(n_);
  to_position(psi_tilde, out);
  return out;
}

void Grid::fourier(std::span<const double> f, std::span<cplx> out) const {
  if (f.size() != n_) throw std::domain_error("array does not match grid");
  std::vector<cplx> in(f.begin(), f.end());
  centered_dft(in, out, true);
  const double scale = dx();
  for (auto& v : out) v *= scale;
}

bool Grid::same_as(const Grid& other) const {
  return n_ == other.n_ && box_ == other.box_ && hbar_ == other.hbar_;
}

}  // namespace dcsl
