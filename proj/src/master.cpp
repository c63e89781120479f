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

#include "dcsl/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace dcsl {

nlohmann::json GeneratorSpec::to_json() const {
  return {{"params", params.to_json()},
          {"variant", to_string(variant)},
          {"hamiltonian", to_string(hamiltonian)}};
}

LindbladGenerator::LindbladGenerator(const Grid& grid, const GeneratorSpec& spec)
    : spec_(spec), kernel_(grid, spec.params, spec.variant) {
  const auto& p = spec_.params;
  const std::size_t n = grid.size();
  gain_scale_ = p.gamma() * p.mass * p.mass / (p.m0 * p.m0 * grid.box_length());
  energy_.resize(n);
  loss_.resize(n);
  const auto loss_sum = kernel_.loss_sum();
  for (std::size_t j = 0; j < n; ++j) {
    const double P = grid.p(j);
    energy_[j] = spec_.hamiltonian == Hamiltonian::free ? P * P / (2.0 * p.mass) : 0.0;
    loss_[j] = 0.5 * gain_scale_ * grid.box_length() * loss_sum[j];
  }
}

Eigen::MatrixXcd LindbladGenerator::rhs(const Eigen::MatrixXcd& rho) const {
  const std::size_t n = grid().size();
  const auto ni = static_cast<Eigen::Index>(n);
  if (rho.rows() != ni || rho.cols() != ni) throw std::domain_error("density matrix does not match generator grid");
  const double inv_hbar = 1.0 / spec_.params.hbar;
  Eigen::MatrixXcd out(ni, ni);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx rate(-(loss_[i] + loss_[j]), -(energy_[i] - energy_[j]) * inv_hbar);
      out(i, j) = rate * rho(i, j);
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    const double* kq = kernel_.row(q).data();
    const std::size_t shift = (q + n / 2) % n;
    const std::size_t lo = kernel_.band_begin(q), hi = kernel_.band_end(q);
    const std::size_t first = std::clamp(n - shift, lo, hi);
    for (std::size_t p2 = lo; p2 < hi; ++p2) {
      const double f = gain_scale_ * kq[p2];
      const cplx* src = rho.col(p2).data();
      cplx* dst = out.col((p2 + shift) % n).data();
      for (std::size_t p1 = lo; p1 < first; ++p1) dst[p1 + shift] += (f * kq[p1]) * src[p1];
      for (std::size_t p1 = first; p1 < hi; ++p1) dst[p1 + shift - n] += (f * kq[p1]) * src[p1];
    }
  }
  return out;
}

DensityMatrix LindbladGenerator::rhs(const DensityMatrix& rho) const {
  if (!rho.grid().same_as(grid())) throw std::domain_error("density matrix does not match generator grid");
  return DensityMatrix(grid(), rhs(rho.matrix()));
}

Timeline propagate(const DensityMatrix& rho0, const LindbladGenerator& gen, const PropagationOptions& opts) {
  if (!(opts.dt > 0.0)) throw std::domain_error("dt must be positive");
  if (!(opts.t_end >= 0.0)) throw std::domain_error("t_end must be non-negative");
  if (opts.record_every == 0) throw std::domain_error("record_every must be at least 1");
  if (!rho0.grid().same_as(gen.grid())) throw std::domain_error("initial state does not match generator grid");
  if (rho0.hermiticity_error() > 1e-10) throw std::domain_error("initial density matrix is not Hermitian");

  const Grid& grid = gen.grid();
  const auto steps = static_cast<std::size_t>(std::ceil(opts.t_end / opts.dt - 1e-9));
  Eigen::MatrixXcd rho = rho0.matrix();
  Timeline tl;
  double t = 0.0;

  auto record = [&]() {
    DensityMatrix d(grid, rho);
    tl.times.push_back(t);
    tl.energies.push_back(d.kinetic_energy(gen.spec().params.mass));
    tl.traces.push_back(d.trace().real());
    if (opts.check_positivity) {
      const double ev = d.min_eigenvalue();
      tl.min_eigenvalues.push_back(ev);
      if (ev < -1e-6) {
        throw PositivityError("density matrix lost positivity at t = " + std::to_string(t) +
                                  " (min eigenvalue " + std::to_string(ev) + ")",
                              t, ev);
      }
    }
    if (opts.keep_states) tl.states.push_back(std::move(d));
  };

  record();
  for (std::size_t s = 1; s <= steps; ++s) {
    const double h = std::min(opts.dt, opts.t_end - t);
    const Eigen::MatrixXcd k1 = gen.rhs(rho);
    const Eigen::MatrixXcd k2 = gen.rhs((rho + 0.5 * h * k1).eval());
    const Eigen::MatrixXcd k3 = gen.rhs((rho + 0.5 * h * k2).eval());
    const Eigen::MatrixXcd k4 = gen.rhs((rho + h * k3).eval());
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = s == steps ? opts.t_end : t + h;
    if (!rho.allFinite()) throw std::runtime_error("non-finite density matrix at t = " + std::to_string(t));
    if (s % opts.record_every == 0 || s == steps) record();
  }
  tl.final_state = DensityMatrix(grid, std::move(rho));
  return tl;
}

double mean_p2_rate(const LindbladGenerator& gen, const DensityMatrix& rho) {
  const auto d = gen.rhs(rho.matrix());
  const Grid& grid = gen.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) s += grid.p(j) * grid.p(j) * d(j, j).real();
  return s / rho.trace().real();
}

double mean_p2_rate_law(const SimParams& p, double mean_p2) {
  const double pref = p.lambda * p.mass * p.mass / (p.m0 * p.m0 * std::pow(1.0 + p.k, 3));
  return pref * (p.hbar * p.hbar / (2.0 * p.r_C * p.r_C) - 4.0 * p.k * mean_p2);
}

double energy_law(const SimParams& p, double h0, double t) {
  if (p.k == 0.0) return h0 + p.heating_rate() * t;
  const double h_as = p.asymptotic_energy();
  return std::exp(-p.chi() * t) * (h0 - h_as) + h_as;
}

double coherence_decay_rate(const SimParams& p, double d) {
  const double ratio = p.mass / p.m0;
  return p.lambda * ratio * ratio * -std::expm1(-d * d / (4.0 * p.r_C * p.r_C));
}

nlohmann::json EnergyFit::to_json() const {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return "inf";
  };
  return {{"chi", chi},
          {"H_as", num(h_as)},
          {"H0", h0},
          {"slope", slope},
          {"rms_residual", rms_residual},
          {"chi_analytic", chi_analytic},
          {"H_as_analytic", num(h_as_analytic)},
          {"slope_analytic", slope_analytic}};
}

EnergyFit relax_energy(const std::vector<double>& times, const std::vector<double>& energies,
                       const SimParams& params, double tolerance) {
  const std::size_t n = times.size();
  if (n < 3 || energies.size() != n) throw std::domain_error("energy fit needs at least three matched samples");
  const double t0 = times.front();
  const double span = times.back() - t0;
  if (!(span > 0.0)) throw std::domain_error("energy fit needs a positive time span");

  EnergyFit fit;
  fit.chi_analytic = params.chi();
  fit.h_as_analytic = params.asymptotic_energy();
  fit.slope_analytic = params.heating_rate();
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double range = *hi - *lo;

  // Linear least squares for H = a f(t) + b.
  auto linear = [&](auto basis, double& a, double& b) {
    double sf = 0, sff = 0, sh = 0, sfh = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = basis(times[i] - t0);
      sf += f;
      sff += f * f;
      sh += energies[i];
      sfh += f * energies[i];
    }
    const double det = static_cast<double>(n) * sff - sf * sf;
    a = (static_cast<double>(n) * sfh - sf * sh) / det;
    b = (sh - a * sf) / static_cast<double>(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = energies[i] - (a * basis(times[i] - t0) + b);
      ssr += r * r;
    }
    return ssr;
  };

  double ssr = 0.0;
  if (params.k == 0.0) {
    double a = 0.0, b = 0.0;
    ssr = linear([](double t) { return t; }, a, b);
    fit.slope = a;
    fit.h0 = b;
    fit.chi = 0.0;
    fit.h_as = std::numeric_limits<double>::infinity();
  } else {
    if (span * fit.chi_analytic < 3.0) throw std::domain_error("energy timeline shorter than 3 / chi");
    auto objective = [&](double log_chi) {
      const double chi = std::exp(log_chi);
      double a = 0.0, b = 0.0;
      return linear([chi](double t) { return std::exp(-chi * t); }, a, b);
    };
    const auto best = boost::math::tools::brent_find_minima(objective, std::log(0.01 / span),
                                                            std::log(100.0 / span), 52);
    fit.chi = std::exp(best.first);
    double a = 0.0, b = 0.0;
    ssr = linear([chi = fit.chi](double t) { return std::exp(-chi * t); }, a, b);
    fit.h_as = b;
    fit.h0 = a + b;
  }
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(n));
  if (range > 0.0 && fit.rms_residual > tolerance * range) {
    throw FitQualityError("energy fit rms residual " + std::to_string(fit.rms_residual) +
                          " exceeds tolerance on range " + std::to_string(range));
  }
  return fit;
}

DensityMatrix gibbs_state(const Grid& grid, const SimParams& params, double temperature_scale) {
  if (!(params.k > 0.0)) throw std::domain_error("the Gibbs state needs k > 0");
  if (!(temperature_scale > 0.0)) throw std::domain_error("temperature scale must be positive");
  const double var = params.mass * params.thermal_energy() * temperature_scale;
  const double p_max = 0.5 * static_cast<double>(grid.size()) * grid.dq();
  if (p_max < 3.0 * std::sqrt(var)) {
    throw std::domain_error("momentum grid covers fewer than 6 thermal widths");
  }
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) w[j] = std::exp(-grid.p(j) * grid.p(j) / (2.0 * var));
  return DensityMatrix::diagonal(grid, w);
}

double gibbs_residual(const LindbladGenerator& gen, double temperature_scale) {
  const auto rho = gibbs_state(gen.grid(), gen.spec().params, temperature_scale);
  const auto d = gen.rhs(rho.matrix());
  return d.norm() / (rho.matrix().norm() * gen.rate());
}

double appendix_a_kernel_difference(const Grid& grid, const SimParams& params) {
  double worst = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const double Q = grid.p(q), P = grid.p(p);
      const double a = kernel_value_appendix_a(Q, P, params.k, params.r_C, params.hbar);
      const double m = kernel_value(Q, P, params.k, params.r_C, params.hbar);
      worst = std::max(worst, std::abs(a - m));
    }
  }
  return worst;
}

}  // namespace dcsl
