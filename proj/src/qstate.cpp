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

#include "dcsl/qstate.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace dcsl {

WaveState::WaveState(Grid grid, std::vector<cplx> psi) : grid_(std::move(grid)), psi_(std::move(psi)) {
  if (psi_.size() != grid_.size()) throw std::domain_error("wavefunction does not match grid");
}

WaveState WaveState::from_momentum(Grid grid, std::span<const cplx> psi_tilde) {
  auto psi = grid.to_position(psi_tilde);
  return WaveState(std::move(grid), std::move(psi));
}

double WaveState::norm_squared() const {
  double s = 0.0;
  for (const auto& v : psi_) s += std::norm(v);
  return s * grid_.dx();
}

void WaveState::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::domain_error("cannot normalise a zero state");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& v : psi_) v *= s;
}

void WaveState::boost(double p0) {
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    psi_[i] *= std::polar(1.0, p0 * grid_.x(i) / grid_.hbar());
  }
}

WaveState gaussian_superposition(const Grid& grid, double alpha, double sigma,
                                 std::array<cplx, 2> weights) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
  if (!(2.0 * std::abs(alpha) + 6.0 * sigma < grid.box_length())) {
    throw std::domain_error("gaussian peaks do not fit in the box");
  }
  if (weights[0] == cplx{} && weights[1] == cplx{}) {
    throw std::domain_error("superposition weights are both zero");
  }
  std::vector<cplx> psi(grid.size());
  const double inv = 1.0 / (4.0 * sigma * sigma);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    psi[i] = weights[0] * std::exp(-(x - alpha) * (x - alpha) * inv) +
             weights[1] * std::exp(-(x + alpha) * (x + alpha) * inv);
  }
  WaveState state(grid, std::move(psi));
  state.normalize();
  return state;
}

namespace {

ObservableSet observables_impl(const Grid& grid, std::span<const cplx> psi,
                               std::span<const cplx> psi_tilde, double mass) {
  const std::size_t n = grid.size();
  double norm = 0.0, sx = 0.0, sx2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::norm(psi[i]);
    const double x = grid.x(i);
    norm += w;
    sx += w * x;
    sx2 += w * x * x;
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::domain_error("observables of a zero or non-finite state");
  }
  double edge = 0.0;
  for (std::size_t i = 0; i < 3 && i < n; ++i) edge += std::norm(psi[i]) + std::norm(psi[n - 1 - i]);

  double pn = 0.0, sp = 0.0, sp2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(psi_tilde[j]);
    const double p = grid.p(j);
    pn += w;
    sp += w * p;
    sp2 += w * p * p;
  }

  ObservableSet o;
  o.norm = norm * grid.dx();
  o.mean_x = sx / norm;
  o.var_x = std::max(0.0, sx2 / norm - o.mean_x * o.mean_x);
  o.mean_p = sp / pn;
  o.mean_p2 = std::max(sp2 / pn, o.mean_p * o.mean_p);
  o.kinetic_energy = o.mean_p2 / (2.0 * mass);
  o.wraparound = edge / norm > 1e-8;
  return o;
}

}  // namespace

ObservableSet observables(const WaveState& state, double mass) {
  const auto tilde = state.momentum();
  return observables_impl(state.grid(), state.psi(), tilde, mass);
}

ObservableSet observables_from_momentum(const Grid& grid, std::span<const cplx> psi_tilde,
                                        double mass) {
  const auto psi = grid.to_position(psi_tilde);
  return observables_impl(grid, psi, psi_tilde, mass);
}

void write_csv(std::ostream& os, const WaveState& state, bool header) {
  if (header) os << "x,re,im,abs2\n";
  os << std::setprecision(17);
  const auto& g = state.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = state.psi()[i];
    os << g.x(i) << ',' << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
  }
}

nlohmann::json to_json(const WaveState& state, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["n"] = state.grid().size();
  j["box_length"] = state.grid().box_length();
  j["hbar"] = state.grid().hbar();
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (const auto& v : state.psi()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["x"] = state.grid().positions();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

}  // namespace dcsl
