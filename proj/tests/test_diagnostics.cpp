#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfsi/diagnostics.hpp"
#include "pfsi/rng.hpp"

using namespace pfsi;

namespace {

struct Fixture {
  DiscreteOperators ops;
  DivFreeSpace space;
  StokesBasis stokes;
  PlateBasis plate;
  LiftingOperator lift;
  ModalCouplings coup;

  Fixture(int nx = 10, int nz = 10, int m = 4, int n = 3)
      : ops(assemble_operators(build_grid(nx, nz))),
        space(build_divfree_space(ops)),
        stokes(solve_stokes_eigen(ops, space, m)),
        plate(solve_plate_eigen(ops, n)),
        lift(build_lifting(ops, space)),
        coup(assemble_couplings(stokes, plate, lift, ops)) {}

  ProcessRun run(const CoefficientProfile& coeffs = {},
                 const ForcingProfile& forcing = {},
                 const NonlinearForce& nl = {},
                 IntegratorOptions opts = {}) const {
    return make_process_run(ops, plate, coup, lift, coeffs, forcing, nl, opts);
  }

  GalerkinState state(double t) const {
    GalerkinState s;
    s.t = t;
    s.alpha = Vec::Zero(coup.m);
    s.beta = Vec::Zero(coup.n);
    s.gamma = Vec::Zero(coup.n);
    return s;
  }

  GalerkinState random_state(double t, uint64_t seed) const {
    Rng rng(seed);
    GalerkinState s = state(t);
    for (int i = 0; i < coup.m; ++i) s.alpha(i) = rng.normal();
    for (int j = 0; j < coup.n; ++j) s.beta(j) = 0.3 * rng.normal();
    for (int j = 0; j < coup.n; ++j) s.gamma(j) = rng.normal();
    return s;
  }
};

} // namespace

TEST_CASE("ht_norm: zero state, spectral value on a pure plate mode") {
  Fixture f;
  auto run = f.run();
  CHECK(ht_norm(run, f.state(0.0)) == 0.0);

  GalerkinState s = f.state(0.0);
  s.beta(1) = 1.0;
  CHECK(ht_norm(run, s) ==
        doctest::Approx(std::sqrt(f.coup.kappa(1))).epsilon(1e-13));
}

TEST_CASE("ht_norm equals sqrt(2 E) on every state") {
  Fixture f;
  CoefficientProfile coeffs;
  coeffs.family = CoefficientProfile::Family::LogisticDecay;
  coeffs.mu0 = 0.8;
  coeffs.rho0 = 1.7;
  auto run = f.run(coeffs);
  for (uint64_t seed : {1u, 2u, 3u}) {
    const GalerkinState s = f.random_state(0.4, seed);
    const double n = ht_norm(run, s);
    const double e = energy(run, s).E;
    CHECK(n == doctest::Approx(std::sqrt(2.0 * e)).epsilon(1e-12));
  }
}

TEST_CASE("paper-literal phase norm weighs displacement instead of bending") {
  Fixture f;
  IntegratorOptions opts;
  opts.paper_literal_ht_norm = true;
  CoefficientProfile coeffs;
  coeffs.rho0 = 2.0;
  auto run = f.run(coeffs, {}, {}, opts);
  GalerkinState s = f.state(0.0);
  s.beta(0) = 1.0;
  s.gamma(1) = 1.0;
  // mu |v|^2 + rho |u|^2 + |u_t|^2 with v = Phi gamma
  const double v2 = f.coup.velocity_sq(s.alpha, s.gamma);
  CHECK(ht_norm(run, s) ==
        doctest::Approx(std::sqrt(1.0 * v2 + 2.0 + 1.0)).epsilon(1e-12));
}

TEST_CASE("energy: zero state, linear case, Berger potential oracle") {
  Fixture f;
  auto run = f.run();
  CHECK(energy(run, f.state(0.0)).E == 0.0);
  CHECK(energy(run, f.state(0.0)).scriptE == 0.0);

  const GalerkinState s = f.random_state(0.0, 9);
  CHECK(energy(run, s).E == energy(run, s).scriptE); // F = 0

  NonlinearForce nl;
  nl.family = NonlinearForce::Family::Berger;
  nl.gamma_b = 1.25;
  nl.q_b = 0.5;
  auto run2 = f.run({}, {}, nl);
  GalerkinState sb = f.state(0.0);
  const double a = 0.9;
  sb.beta(0) = a;
  const auto pair = energy(run2, sb);
  const Vec u = a * f.plate.Gmat.col(0);
  const double q = u.dot(f.ops.Mb.cwiseProduct(f.ops.B2 * u));
  CHECK(pair.scriptE - pair.E ==
        doctest::Approx(0.25 * 1.25 * q * q - 0.5 * 0.5 * q).epsilon(1e-12));
}

TEST_CASE("free decay: energy is non-increasing at every recorded step") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 2e-3;
  auto run = f.run({}, {}, {}, opts);
  GalerkinState init = f.state(0.0);
  init.beta(0) = 1.0;
  init.alpha(0) = 0.5;
  const Trajectory traj = evolve(run, init, 2.0);
  const EnergyReport rep = energy_report(run, traj);
  for (Index r = 1; r < traj.records(); ++r) {
    CHECK(rep.E(r) <= rep.E(r - 1) + 1e-11 * rep.E(0));
    CHECK(rep.dissipation(r) >= 0.0);
  }
}

TEST_CASE("energy balance: zero trajectory and the audit tolerance") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 1e-3;
  CoefficientProfile coeffs;
  coeffs.rho0 = 500.0; // slow structural frequency; see the audit configuration
  auto run = f.run(coeffs, {}, {}, opts);

  const Trajectory zero = evolve(run, f.state(0.0), 0.05);
  CHECK(energy_balance_residual(run, zero) == 0.0);

  GalerkinState init = f.state(0.0);
  init.beta(0) = 1.0;
  init.alpha(0) = 0.05;
  const Trajectory traj = evolve(run, init, 1.0); // 1000 steps
  const EnergyReport rep = energy_report(run, traj);
  CHECK(std::abs(rep.residual) <= 1e-6 * rep.initial_scriptE);

  // halving dt contracts the residual by at least 3.5
  ProcessRun half = run;
  half.opts.dt = 5e-4;
  const double r2 = energy_balance_residual(half, evolve(half, init, 1.0));
  CHECK(std::abs(rep.residual) / std::abs(r2) >= 3.5);
}

TEST_CASE("logistic corrections enter the balance with the dissipative sign") {
  Fixture f;
  CoefficientProfile coeffs;
  coeffs.family = CoefficientProfile::Family::LogisticDecay;
  coeffs.kappa_c = 0.3;
  IntegratorOptions opts;
  opts.dt = 2e-3;
  auto run = f.run(coeffs, {}, {}, opts);
  GalerkinState init = f.state(0.0);
  init.beta(0) = 0.5;
  init.gamma(0) = 1.0;
  const Trajectory traj = evolve(run, init, 1.0);
  const EnergyReport rep = energy_report(run, traj);
  for (Index r = 0; r < traj.records(); ++r) {
    CHECK(rep.mu_correction(r) <= 0.0);
    CHECK(rep.rho_correction(r) <= 0.0);
  }
  // identity still audits at second order
  ProcessRun half = run;
  half.opts.dt = 1e-3;
  const double r1 = std::abs(rep.residual);
  const double r2 =
      std::abs(energy_balance_residual(half, evolve(half, init, 1.0)));
  CHECK(r1 / r2 >= 3.5);
}

TEST_CASE("lyapunov: delta = 0 collapses to the full energy") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 2e-3;
  auto run = f.run({}, {}, {}, opts);
  GalerkinState init = f.state(0.0);
  init.beta(0) = 1.0;
  const Trajectory traj = evolve(run, init, 0.5);
  const LyapunovReport rep = lyapunov(run, traj, 0.0);
  const EnergyReport erep = energy_report(run, traj);
  CHECK((rep.L - erep.scriptE).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lyapunov: free decay gives a positive fitted rate and monotone L") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 2e-3;
  auto run = f.run({}, {}, {}, opts);
  GalerkinState init = f.state(0.0);
  init.beta(0) = 1.0;
  init.gamma(1) = 0.5;
  init.alpha(0) = 1.0;
  const Trajectory traj = evolve(run, init, 3.0);

  const LyapunovReport rep = lyapunov(run, traj, 0.01);
  CHECK(rep.delta_admissible);
  CHECK(rep.sandwich_ok);
  CHECK(rep.omega_hat > 0.0);

  // non-increasing after the transient
  const Index begin = std::max<Index>(rep.fit_begin, traj.records() / 20);
  for (Index r = begin + 1; r < traj.records(); ++r) {
    CHECK(rep.L(r) <= rep.L(r - 1) + 1e-9 * std::abs(rep.L(0)));
  }
}

TEST_CASE("lyapunov: the delta sweep flags the first inadmissible value") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 2e-3;
  NonlinearForce nl;
  nl.family = NonlinearForce::Family::Berger;
  nl.gamma_b = 1.0;
  nl.q_b = 0.3;
  auto run = f.run({}, {}, nl, opts);
  GalerkinState init = f.state(0.0);
  init.beta(0) = 1.0;
  const Trajectory traj = evolve(run, init, 0.5);

  bool seen_inadmissible = false;
  double prev_c2 = 1e300;
  for (double delta : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const LyapunovReport rep = lyapunov(run, traj, delta);
    CHECK(rep.c2 < prev_c2);
    prev_c2 = rep.c2;
    if (!rep.delta_admissible) seen_inadmissible = true;
    if (rep.delta_admissible) CHECK(rep.sandwich_ok);
  }
  CHECK(seen_inadmissible); // large delta must violate the sandwich premise
}

TEST_CASE("difference audit: identical runs give zero on both sides") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 5e-3;
  auto run = f.run({}, {}, {}, opts);
  GalerkinState init = f.state(-6.0);
  init.beta(0) = 1.0;
  const Trajectory traj = evolve(run, init, 0.0);
  const DifferenceReport rep = difference_audit(run, traj, traj, 0.0, 5.0);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs_max_sq == 0.0);
  CHECK(rep.C_fit == 0.0);
}

TEST_CASE("difference audit: nearby data, finite C, shrinking additive eps") {
  Fixture f;
  IntegratorOptions opts;
  opts.dt = 5e-3;
  NonlinearForce nl;
  nl.family = NonlinearForce::Family::Berger;
  nl.gamma_b = 0.5;
  nl.q_b = 0.0;
  auto run = f.run({}, {}, nl, opts);

  // pairs restarted at t - T0 with data of a common size; eps_fit uses the
  // shared C measured at the largest window
  const double t_final = 0.0;
  const std::vector<double> windows = {2.0, 4.0, 8.0};
  std::vector<std::vector<DifferenceReport>> reports(windows.size());
  Rng rng(4);
  for (size_t w = 0; w < windows.size(); ++w) {
    for (int pair = 0; pair < 4; ++pair) {
      GalerkinState a = f.state(t_final - windows[w]);
      for (int j = 0; j < f.coup.n; ++j) a.beta(j) = rng.normal();
      for (int j = 0; j < f.coup.n; ++j) a.gamma(j) = 0.5 * rng.normal();
      for (int i = 0; i < f.coup.m; ++i) a.alpha(i) = 0.5 * rng.normal();
      GalerkinState b = a;
      b.beta(0) += 0.05;
      b.gamma(1) -= 0.05;
      const Trajectory ta = evolve(run, a, t_final);
      const Trajectory tb = evolve(run, b, t_final);
      reports[w].push_back(difference_audit(run, ta, tb, 0.0, windows[w]));
    }
  }

  double C_ref = 0.0;
  for (const auto& rep : reports.back()) {
    CHECK(std::isfinite(rep.C_fit));
    C_ref = std::max(C_ref, rep.C_fit);
  }
  double prev_eps = 1e300;
  for (size_t w = 0; w < windows.size(); ++w) {
    double eps = 0.0;
    for (const auto& rep : reports[w]) {
      eps = std::max(eps, std::max(0.0, rep.lhs - C_ref * rep.rhs_max_sq));
    }
    CHECK(eps <= prev_eps + 1e-12);
    prev_eps = eps;
  }

  // window coverage is validated
  const Trajectory short_run = evolve(run, f.state(-1.0), 0.0);
  CHECK_THROWS_AS(difference_audit(run, short_run, short_run, 0.0, 5.0),
                  std::invalid_argument);
}
