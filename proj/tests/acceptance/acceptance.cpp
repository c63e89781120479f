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


// Acceptance harness. `acceptance N` checks criterion N and prints detail
// lines followed by one "PASS criterion N" or "FAIL criterion N" line; with no
// argument every criterion runs. Exit status is nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dcsl/macro_rates.hpp"
#include "dcsl/master.hpp"
#include "dcsl/sde.hpp"

using namespace dcsl;

namespace {

// Collects sub-checks of one criterion; the criterion passes only if all do.
class Report {
 public:
  void check(bool ok, const char* fmt, auto... args) {
    std::printf("  [%s] ", ok ? "ok" : "FAILED");
    print(fmt, args...);
    all_ok_ = all_ok_ && ok;
  }
  void note(const char* fmt, auto... args) {
    std::printf("  ");
    print(fmt, args...);
  }
  bool ok() const { return all_ok_; }

 private:
  static void print(const char* fmt, auto... args) {
    if constexpr (sizeof...(args) == 0) std::fputs(fmt, stdout);
    else std::printf(fmt, args...);
    std::fputc('\n', stdout);
  }
  bool all_ok_ = true;
};

bool within_factor(double value, double target, double factor) {
  return value > 0.0 && value <= target * factor && value >= target / factor;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

Grid momentum_grid(std::size_t n, double dq) { return Grid(n, 2.0 * std::numbers::pi / dq); }

// Parameter identities.
void criterion_1(Report& r) {
  const double cm3 = 1e-6;
  const double lambda = lambda_from_gamma(1e-30 * cm3, 1e-7);
  r.check(rel_err(lambda, 2.2e-17) <= 0.05, "lambda = %.4e s^-1 (target 2.2e-17, 5%%)", lambda);
  const double k = k_from_v_eta(PhysicalConstants::nucleon_mass, 1e5, 1e-7);
  r.check(rel_err(k, 3e-6) <= 0.10, "k = %.4e (target 3e-6, 10%%)", k);
  const double t = temperature_from_v_eta(1e5, 1e-7);
  r.check(rel_err(t, 1.0) <= 0.10, "T = hbar v_eta / (4 k_B r_C) = %.4f K (target 1 K, 10%%)", t);
}

WaveState fig1_state(const Grid& grid, std::array<cplx, 2> w = {cplx(1.0), cplx(1.0)}) {
  return gaussian_superposition(grid, 2.5, 0.55, w);
}

// Fig. 1 protocol: 500 nonlinear trajectories of the symmetric superposition.
void criterion_2(Report& r) {
  const Grid grid(512, 40.0);
  const KernelL kernel(grid, SimParams::dimensionless(0.0));
  SdeConfig c;
  c.dt = 0.01;
  c.t_end = 1.0;
  c.record_every = 10;
  c.hamiltonian = Hamiltonian::none;
  c.resolve_variance = 0.55 * 0.55;
  c.seed = 1;
  const auto ens = run_ensemble(c, fig1_state(grid), kernel, 500, 0);

  const double resolved = ens.resolved_fraction_by(1.0);
  r.check(resolved >= 0.9, "resolved by lambda t = 1: %.3f (target >= 0.90)", resolved);

  const double n_res = static_cast<double>(ens.left + ens.right);
  if (n_res > 0) {
    const double f = ens.left / n_res;
    const double sigma = std::sqrt(0.25 / n_res);
    r.check(std::abs(f - 0.5) <= 3.0 * sigma, "left fraction among %d resolved: %.3f (0.5 +- %.3f)",
            static_cast<int>(n_res), f, 3.0 * sigma);
  } else {
    r.check(false, "no trajectory resolved, frequencies undefined");
  }

  bool decreasing = true;
  for (std::size_t i = 0; i < ens.times.size(); ++i) {
    r.note("t = %.1f  median var_x = %.4f", ens.times[i], ens.median_var_x[i]);
    if (i > 0 && ens.times[i - 1] >= 0.2 - 1e-9 && !(ens.median_var_x[i] < ens.median_var_x[i - 1])) {
      decreasing = false;
    }
  }
  r.check(decreasing, "median var_x strictly decreasing after lambda t = 0.2");
}

// Ensemble density matrix of the nonlinear scheme against the master equation.
void criterion_3(Report& r) {
  const Grid grid(128, 20.0);
  for (double k : {0.0, 0.25}) {
    GeneratorSpec spec;
    spec.params = SimParams::dimensionless(k);
    spec.hamiltonian = Hamiltonian::free;
    const LindbladGenerator gen(grid, spec);
    const auto init = fig1_state(grid);

    SdeConfig c;
    c.dt = 0.01;
    c.t_end = 0.5;
    c.record_every = 50;
    c.hamiltonian = Hamiltonian::free;
    c.seed = 3;
    c.density_times = {0.5};
    const auto ens = run_ensemble(c, init, gen.kernel(), 500, 0);

    const auto tl = propagate(DensityMatrix::from_pure(init), gen, {.t_end = 0.5, .dt = 0.002});
    const double d = trace_distance(ens.densities[0], *tl.final_state);
    r.check(d <= 0.05, "k = %.2f: trace distance at lambda t = 0.5: %.4f (target <= 0.05)", k, d);
  }
}

// Energy relaxation from the master equation at k = 0.25.
void criterion_4(Report& r) {
  const Grid grid = momentum_grid(128, 0.1);
  GeneratorSpec spec;
  spec.params = SimParams::dimensionless(0.25);
  const LindbladGenerator gen(grid, spec);
  const auto& p = spec.params;

  // Derivation oracle: d<P^2>/dt = A - B <P^2> read off the generator for two
  // states gives chi = B and H_as = A / (2 m B) with no closed form involved.
  const auto cold = DensityMatrix::from_pure(gaussian_superposition(grid, 0.0, 2.0, {cplx(1.0), cplx(0.0)}));
  const auto warm = DensityMatrix::from_pure(gaussian_superposition(grid, 0.0, 0.6, {cplx(1.0), cplx(0.0)}));
  const double r1 = mean_p2_rate(gen, cold), r2 = mean_p2_rate(gen, warm);
  const double B = (r1 - r2) / (warm.mean_p2() - cold.mean_p2());
  const double A = r1 + B * cold.mean_p2();
  const double chi_oracle = B, h_oracle = A / (2.0 * p.mass * B);
  r.check(rel_err(chi_oracle, p.chi()) < 1e-8, "oracle chi_1D = %.10f vs closed form %.10f", chi_oracle, p.chi());
  r.check(rel_err(h_oracle, p.asymptotic_energy()) < 1e-8, "oracle H_as = %.10f vs closed form %.10f", h_oracle,
          p.asymptotic_energy());

  const auto init = DensityMatrix::from_pure(gaussian_superposition(grid, 0.0, 2.5, {cplx(1.0), cplx(0.0)}));
  const auto tl = propagate(init, gen, {.t_end = 10.0, .dt = 0.01, .record_every = 10});
  const auto fit = relax_energy(tl.times, tl.energies, p);
  r.check(rel_err(fit.chi, p.chi()) <= 0.01, "fitted chi = %.8f, chi_1D = %.8f", fit.chi, p.chi());
  r.check(rel_err(fit.h_as, p.asymptotic_energy()) <= 0.01, "fitted H_as = %.8f, hbar^2/(16 k m r_C^2) = %.8f",
          fit.h_as, p.asymptotic_energy());

  double worst = 0.0;
  const auto mp = ModelParams::ghirardi1990();
  for (double k : {1e-6, 0.01, 0.25, 1.0, 3.0}) {
    const double lhs = relaxation_rate_3d(k, mp.lambda(), mp.mass(), mp.m0()) *
                       asymptotic_energy_3d(k, mp.mass(), mp.r_C()) * std::pow(1.0 + k, 5);
    worst = std::max(worst, rel_err(lhs, heating_rate_3d(mp.lambda(), mp.mass(), mp.r_C(), mp.m0())));
  }
  r.check(worst <= 1e-12, "3D identity chi H_as (1+k)^5 = xi: max relative error %.2e", worst);
}

// Gibbs state of the dissipative generator.
void criterion_5(Report& r) {
  GeneratorSpec spec;
  spec.params = SimParams::dimensionless(0.25);
  double prev = 0.0;
  for (std::size_t n : {48, 96, 192}) {
    const LindbladGenerator gen(momentum_grid(n, 0.1), spec);
    const double res = gibbs_residual(gen);
    if (n == 96) r.check(res <= 1e-6, "N = 96: residual %.3e (target <= 1e-6)", res);
    else r.note("N = %zu: residual %.3e", n, res);
    if (n > 48) r.check(prev / res >= 10.0, "refinement %zu -> %zu: residual drops %.2ex", n / 2, n, prev / res);
    prev = res;
  }

  const Grid grid = momentum_grid(128, 0.1);
  const LindbladGenerator gen(grid, spec);
  const auto gibbs = gibbs_state(grid, spec.params);
  const double t_end = 10.0 / spec.params.chi();
  for (double width : {0.2, 1.2}) {
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::exp(-0.5 * std::pow(grid.p(j) / width, 2));
    const auto tl = propagate(DensityMatrix::diagonal(grid, w), gen, {.t_end = t_end, .dt = 0.02, .record_every = 100000});
    const double d = trace_distance(*tl.final_state, gibbs);
    r.check(d <= 1e-3, "initial momentum width %.1f: trace distance to rho_beta at t = 10/chi: %.2e", width, d);
  }
}

// Translation covariance and broken boost invariance.
void criterion_6(Report& r) {
  const Grid grid(128, 20.0);
  const auto rho = DensityMatrix::from_pure(fig1_state(grid, {cplx(0.8), cplx(0.0, 0.6)}));
  for (double k : {0.0, 0.25}) {
    GeneratorSpec spec;
    spec.params = SimParams::dimensionless(k);
    const LindbladGenerator gen(grid, spec);
    const double a = 7.0 * grid.dx();
    const auto lhs = gen.rhs(rho.translated(a).matrix());
    const auto rhs = DensityMatrix(grid, gen.rhs(rho.matrix())).translated(a).matrix();
    const double t_defect = (lhs - rhs).cwiseAbs().maxCoeff();
    r.check(t_defect <= 1e-10, "k = %.2f: translation commutator %.2e (target <= 1e-10)", k, t_defect);

    // Boost by a momentum-grid shift; the free Hamiltonian is excluded because
    // it is not Galilean invariant on its own.
    spec.hamiltonian = Hamiltonian::none;
    const LindbladGenerator dis(grid, spec);
    const auto bl = dis.rhs(rho.boosted(5).matrix());
    const auto br = DensityMatrix(grid, dis.rhs(rho.matrix())).boosted(5).matrix();
    const double b_defect = (bl - br).cwiseAbs().maxCoeff();
    if (k == 0.0) r.check(b_defect <= 1e-10, "k = 0: boost commutator %.2e (target <= 1e-10)", b_defect);
    else r.check(b_defect >= 1e-3, "k = 0.25: boost commutator %.2e (target >= 1e-3)", b_defect);
  }
}

// Worked macroscopic numbers.
void criterion_7(Report& r) {
  const double r_C = 1e-7;
  struct Case {
    double lambda, R, gamma_quoted, chi_quoted;
  };
  const Case cases[] = {{2.2e-17, 1e-3, 1e14, 1e-41},
                        {2.2e-17, r_C, 1e2, 1e-22},
                        {1e-9, 1e-3, 1e22, 1e-33},
                        {1e-9, r_C, 1e10, 1e-14}};
  for (const auto& c : cases) {
    const double gamma = c.lambda * std::pow(4.0 * std::numbers::pi * r_C * r_C, 1.5);
    const auto model = ModelParams::make(gamma, r_C, PhysicalConstants::nucleon_mass,
                                         PhysicalConstants::nucleon_mass, 1e5);
    const auto rep = rate_ratio(MacroBody::reference(c.R, model));
    r.check(within_factor(rep.Gamma, c.gamma_quoted, 3.0), "lambda = %.1e, R = %.0e m, N = %.2e: Gamma = %.3e (quoted %.0e)",
            c.lambda, c.R, rep.body.N, rep.Gamma, c.gamma_quoted);
    r.check(within_factor(rep.chi, c.chi_quoted, 3.0), "lambda = %.1e, R = %.0e m: chi = %.3e (quoted %.0e)", c.lambda,
            c.R, rep.chi, c.chi_quoted);
  }
  const auto grw = ModelParams::ghirardi1990();
  for (const auto& [R, quoted] : {std::pair{1e-3, 1e22}, std::pair{1e-7, 1e10}}) {
    const auto body = MacroBody::reference(R, grw);
    r.check(rel_err(body.N, quoted) <= 0.01, "N = 1e25 (R[cm])^3 at R = %.0e m: %.4e (quoted %.0e)", R, body.N, quoted);
    const auto again = MacroBody::from_density(R, body.D, grw);
    r.check(rel_err(again.N, body.N) <= 0.01, "density round trip at R = %.0e m: N = %.4e", R, again.N);
  }
}

// Kernel correctness.
void criterion_8(Report& r) {
  const Grid grid(256, 24.0);
  const auto p = SimParams::dimensionless(0.0);
  const KernelL kernel(grid, p);
  const SmearedMassDensity density(grid, p);
  const auto state = fig1_state(grid, {cplx(0.8), cplx(0.0, 0.6)});
  NoiseStream stream(8, 0);
  const auto noise = draw_noise(stream, grid, 0.01);
  const auto spectral = grid.to_position(apply_noise_operator(state.momentum(), noise, kernel));
  const auto direct = apply_noise_position_space(state.psi(), noise, density, p);
  double diff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) diff = std::max(diff, std::abs(spectral[i] - direct[i]));
  r.check(diff <= 1e-10, "k = 0 spectral vs position-space noise operator: %.2e (target <= 1e-10)", diff);

  double split = 0.0;
  for (double k : {0.0, 3e-6, 0.25, 1.0}) {
    for (double Q = -5.0; Q <= 5.0; Q += 0.1) {
      for (double P = -8.0; P <= 8.0; P += 0.1) {
        const auto s = hermitian_split(Q, P, k, 1.0, 1.0);
        split = std::max(split, std::abs(s.a + s.b - kernel_value(Q, P, k, 1.0, 1.0)));
        split = std::max(split, std::abs(s.a - s.b - adjoint_kernel_value(Q, P, k, 1.0, 1.0)));
      }
    }
  }
  r.check(split <= 1e-12, "hermitian split reconstruction: %.2e (target <= 1e-12)", split);

  double appendix = 0.0;
  for (double k : {0.0, 0.25, 1.0}) {
    appendix = std::max(appendix, appendix_a_kernel_difference(momentum_grid(96, 0.1), SimParams::dimensionless(k)));
  }
  r.check(appendix == 0.0, "appendix-A kernel difference: %.2e (target exactly 0)", appendix);
}

// Girsanov-weighted linear scheme against the nonlinear scheme.
void criterion_9(Report& r) {
  const Grid grid(128, 20.0);
  const KernelL kernel(grid, SimParams::dimensionless(0.25));
  const auto init = fig1_state(grid, {cplx(std::sqrt(0.8)), cplx(std::sqrt(0.2))});
  SdeConfig c;
  c.dt = 0.01;
  c.t_end = 1.0;
  c.record_every = 50;
  c.hamiltonian = Hamiltonian::free;
  c.seed = 17;
  const auto nonlinear = run_ensemble(c, init, kernel, 200, 0);
  c.scheme = Scheme::linear;
  c.seed = 18;
  const auto linear = run_ensemble(c, init, kernel, 200, 0);
  for (std::size_t i = 1; i < nonlinear.times.size(); ++i) {
    auto compare = [&](const char* name, const MomentStats& a, const MomentStats& b) {
      const double se = std::hypot(a.standard_error, b.standard_error);
      r.check(std::abs(a.mean - b.mean) <= 3.0 * se, "t = %.1f %s: nonlinear %.4f, weighted linear %.4f, |z| = %.2f",
              nonlinear.times[i], name, a.mean, b.mean, std::abs(a.mean - b.mean) / se);
    };
    compare("mean_x", nonlinear.mean_x[i], linear.mean_x[i]);
    compare("var_x", nonlinear.var_x[i], linear.var_x[i]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Report&)>> criteria = {criterion_1, criterion_2, criterion_3,
                                                              criterion_4, criterion_5, criterion_6,
                                                              criterion_7, criterion_8, criterion_9};
  std::vector<int> which;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      const int n = std::atoi(argv[i]);
      if (n < 1 || n > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
        return 2;
      }
      which.push_back(n);
    }
  } else {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) which.push_back(n);
  }

  bool all = true;
  for (int n : which) {
    std::printf("criterion %d\n", n);
    Report report;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[n - 1](report);
    } catch (const std::exception& e) {
      report.check(false, "exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.note("runtime %.1f s", secs);
    std::printf("%s criterion %d\n", report.ok() ? "PASS" : "FAIL", n);
    std::fflush(stdout);
    all = all && report.ok();
  }
  return all ? 0 : 1;
}
