#include "pfsi/physics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pfsi/rng.hpp"

namespace pfsi {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(x)); }

} // namespace

double CoefficientProfile::mu(double t) const {
  switch (family) {
    case Family::Constant:
      return mu0;
    case Family::LogisticDecay:
      return mu0 * logistic(kappa_c * (t - t_center));
  }
  return mu0;
}

double CoefficientProfile::mu_prime(double t) const {
  switch (family) {
    case Family::Constant:
      return 0.0;
    case Family::LogisticDecay: {
      const double s = logistic(kappa_c * (t - t_center));
      return -mu0 * kappa_c * s * (1.0 - s);
    }
  }
  return 0.0;
}

double CoefficientProfile::rho(double t) const {
  switch (family) {
    case Family::Constant:
      return rho0;
    case Family::LogisticDecay:
      return rho0 * logistic(kappa_c * (t - t_center));
  }
  return rho0;
}

double CoefficientProfile::rho_prime(double t) const {
  switch (family) {
    case Family::Constant:
      return 0.0;
    case Family::LogisticDecay: {
      const double s = logistic(kappa_c * (t - t_center));
      return -rho0 * kappa_c * s * (1.0 - s);
    }
  }
  return 0.0;
}

double CoefficientProfile::bound_L() const {
  switch (family) {
    case Family::Constant:
      return mu0 + rho0;
    case Family::LogisticDecay:
      // |mu'| peaks at mu0 kc / 4 at the centre
      return mu0 + rho0 + 0.25 * kappa_c * (mu0 + rho0);
  }
  return mu0 + rho0;
}

Coefficients eval_coefficients(const CoefficientProfile& profile, double t) {
  return {profile.mu(t), profile.mu_prime(t), profile.rho(t),
          profile.rho_prime(t)};
}

double ForcingProfile::f_time(double t) const {
  switch (family) {
    case Family::Zero:
      return 0.0;
    case Family::Periodic:
      return amp_f * std::sin(2.0 * M_PI * t / period + phase);
    case Family::ConstantInTime:
      return amp_f;
    case Family::ExpDecay:
      return amp_f * std::exp(-kappa_f * t);
  }
  return 0.0;
}

double ForcingProfile::g_time(double t) const {
  switch (family) {
    case Family::Zero:
      return 0.0;
    case Family::Periodic:
      return amp_g * std::sin(2.0 * M_PI * t / period + phase);
    case Family::ConstantInTime:
      return amp_g;
    case Family::ExpDecay:
      return amp_g * std::exp(-kappa_f * t);
  }
  return 0.0;
}

Vec ForcingProfile::f_shape(const DiscreteOperators& ops) const {
  const CavityGrid& g = ops.grid;
  Vec shape = Vec::Zero(g.n_velocity());
  if (family == Family::Zero) return shape;
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i <= g.nx; ++i) shape(g.vx_id(i, k)) = 1.0;
  return shape;
}

Vec ForcingProfile::g_shape(const DiscreteOperators& ops) const {
  const CavityGrid& g = ops.grid;
  Vec shape = Vec::Zero(g.n_beam());
  if (family == Family::Zero) return shape;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.beam_x(i);
    shape(i) = x * (1.0 - x) - 1.0 / 6.0;
  }
  return shape;
}

double ForcingProfile::declared_C_fg(const DiscreteOperators& ops) const {
  if (C_fg > 0.0) return C_fg;
  if (family == Family::Zero) return 0.0;
  const double fs = f_shape(ops).dot(ops.Mv.cwiseProduct(f_shape(ops)));
  const double gs = g_shape(ops).dot(ops.Mb.cwiseProduct(g_shape(ops)));
  const double h_max = amp_f * amp_f * fs + amp_g * amp_g * gs;
  const double window = 50.0 / sigma0;
  // exp-decay is a deliberate counterexample; a finite declaration makes the
  // violation visible instead of hiding it behind infinity
  return 1.05 * h_max * window;
}

double NonlinearForce::declared_nu() const {
  switch (family) {
    case Family::Zero:
    case Family::Cubic:
      return 0.5;
    case Family::Berger:
      return 0.75;
  }
  return 0.5;
}

double NonlinearForce::declared_C() const {
  switch (family) {
    case Family::Zero:
    case Family::Cubic:
      return 0.0;
    case Family::Berger:
      return gamma_b > 0.0 ? (q_b * q_b) / (4.0 * gamma_b) + 1e-12 : 0.0;
  }
  return 0.0;
}

double NonlinearForce::declared_a1() const { return 1.0; }

double NonlinearForce::declared_a2() const {
  switch (family) {
    case Family::Zero:
    case Family::Cubic:
      return 0.0;
    case Family::Berger:
      return gamma_b > 0.0 ? (q_b * q_b) / (12.0 * gamma_b) + 1e-12 : 0.0;
  }
  return 0.0;
}

NonlinearEval eval_nonlinearity(const NonlinearForce& nl,
                                const DiscreteOperators& ops, const Vec& u) {
  NonlinearEval out;
  switch (nl.family) {
    case NonlinearForce::Family::Zero:
      out.F = Vec::Zero(u.size());
      out.Pi = 0.0;
      break;
    case NonlinearForce::Family::Cubic: {
      out.F = nl.c * u.array().cube().matrix();
      out.Pi = 0.25 * nl.c * u.array().pow(4).matrix().dot(ops.Mb);
      break;
    }
    case NonlinearForce::Family::Berger: {
      const Vec b2u = ops.B2 * u;
      const double q = u.dot(ops.Mb.cwiseProduct(b2u)); // |u_x|^2
      out.F = (nl.gamma_b * q - nl.q_b) * b2u;
      out.Pi = 0.25 * nl.gamma_b * q * q - 0.5 * nl.q_b * q;
      break;
    }
  }
  return out;
}

namespace {

Vec sample_plate_field(const PlateBasis& plate, double R, Rng& rng) {
  Vec beta(plate.count());
  for (int j = 0; j < plate.count(); ++j) beta(j) = rng.normal();
  const double energy = fractional_norm(plate, beta, 2.0);
  if (energy > 0.0) beta *= rng.uniform(0.1, 1.0) * R / energy;
  return plate.Gmat * beta;
}

} // namespace

ValidationReport validate_assumptions(const CoefficientProfile& profile,
                                      const ForcingProfile& forcing,
                                      const NonlinearForce& nl,
                                      const DiscreteOperators& ops,
                                      const PlateBasis& plate,
                                      const SampleSpec& spec) {
  ValidationReport report;
  Rng rng(spec.seed);

  // ---- (A1)-(A4) on the sampled time grid --------------------------------
  {
    bool a1 = true, a2 = true;
    double sup = 0.0;
    double worst_a1 = 1e300;
    std::string wit1, wit2;
    for (int k = 0; k < spec.t_count; ++k) {
      const double t =
          spec.t_from + (spec.t_to - spec.t_from) * k / (spec.t_count - 1.0);
      const Coefficients c = eval_coefficients(profile, t);
      if (c.mu <= 0.0 || c.rho <= 0.0) {
        a1 = false;
        if (wit1.empty()) wit1 = "t = " + std::to_string(t);
      }
      worst_a1 = std::min(worst_a1, std::min(c.mu, c.rho));
      if (c.mu_prime > 1e-14 || c.rho_prime > 1e-14) {
        a2 = false;
        if (wit2.empty()) wit2 = "t = " + std::to_string(t);
      }
      sup = std::max(sup, std::abs(c.mu) + std::abs(c.mu_prime) +
                              std::abs(c.rho) + std::abs(c.rho_prime));
    }
    report.checks.push_back({"A1", a1, worst_a1, wit1});
    report.checks.push_back({"A2", a2, 0.0, wit2});
    const double L = profile.bound_L();
    report.checks.push_back(
        {"A3", sup <= L * (1.0 + 1e-12), sup, "declared L = " + std::to_string(L)});
    const double t_far =
        profile.family == CoefficientProfile::Family::LogisticDecay
            ? profile.t_center + 50.0 / profile.kappa_c
            : spec.t_to;
    const double tail = profile.mu(t_far) + profile.rho(t_far);
    const bool a4 = tail <= 1e-8 * (profile.mu0 + profile.rho0);
    report.checks.push_back(
        {"A4", a4, tail, "sampled at t = " + std::to_string(t_far)});
  }

  // ---- (F1) local Lipschitz ratio (discrete L2 target norm) ---------------
  {
    double worst = 0.0;
    for (int s = 0; s < spec.u_samples; ++s) {
      const Vec u1 = sample_plate_field(plate, spec.R, rng);
      const Vec u2 = sample_plate_field(plate, spec.R, rng);
      const Vec f1 = eval_nonlinearity(nl, ops, u1).F;
      const Vec f2 = eval_nonlinearity(nl, ops, u2).F;
      const Vec db = project_plate(plate, ops, u1 - u2);
      const double den = fractional_norm(plate, db, 2.0 - spec.eps_frac);
      if (den < 1e-14) continue;
      worst = std::max(worst, ops.beam_norm(f1 - f2) / den);
    }
    report.checks.push_back(
        {"F1", std::isfinite(worst), worst, "measured C_R, sampler bound"});
  }

  // ---- (F2) gradient consistency of the potential -------------------------
  {
    double worst = 0.0;
    bool pass = true;
    std::string wit;
    for (int s = 0; s < 32; ++s) {
      const Vec u = sample_plate_field(plate, spec.R, rng);
      const Vec h = sample_plate_field(plate, spec.R, rng);
      const double eps = 1e-5;
      const double dplus = eval_nonlinearity(nl, ops, u + eps * h).Pi;
      const double dminus = eval_nonlinearity(nl, ops, u - eps * h).Pi;
      const double fd = (dplus - dminus) / (2.0 * eps);
      const double exact = eval_nonlinearity(nl, ops, u).F.dot(ops.Mb.cwiseProduct(h));
      const double scale = std::max({1.0, std::abs(fd), std::abs(exact)});
      const double rel = std::abs(fd - exact) / scale;
      worst = std::max(worst, rel);
      if (rel > 1e-5) {
        pass = false;
        if (wit.empty()) wit = "sample " + std::to_string(s);
      }
    }
    report.checks.push_back({"F2", pass, worst, wit});
  }

  // ---- (F3), (F4) lower bounds on random samples --------------------------
  {
    const double nu = nl.declared_nu();
    const double C = nl.declared_C();
    const double a1 = nl.declared_a1();
    const double a2 = nl.declared_a2();
    bool f3 = true, f4 = true;
    double worst3 = 1e300, worst4 = 1e300;
    std::string wit3, wit4;
    for (int s = 0; s < spec.u_samples; ++s) {
      const Vec u = sample_plate_field(plate, spec.R, rng);
      const Vec beta = project_plate(plate, ops, u);
      const double bend = std::pow(fractional_norm(plate, beta, 2.0), 2);
      const NonlinearEval ev = eval_nonlinearity(nl, ops, u);
      const double lhs3 = (1.0 - nu) * bend + ev.Pi + C;
      worst3 = std::min(worst3, lhs3);
      if (lhs3 < -1e-10) {
        f3 = false;
        if (wit3.empty()) wit3 = "sample " + std::to_string(s);
      }
      const double fu = ev.F.dot(ops.Mb.cwiseProduct(u));
      const double lhs4 = fu - (a1 * ev.Pi - a2 - (1.0 - nu) * bend);
      worst4 = std::min(worst4, lhs4);
      if (lhs4 < -1e-10) {
        f4 = false;
        if (wit4.empty()) wit4 = "sample " + std::to_string(s);
      }
    }
    report.checks.push_back({"F3", f3, worst3, wit3});
    report.checks.push_back({"F4", f4, worst4, wit4});
  }

  // ---- (G2) truncated-window quadrature ------------------------------------
  {
    const double C_fg = forcing.declared_C_fg(ops);
    const double window = 50.0 / forcing.sigma0;
    const Vec fs = forcing.f_shape(ops);
    const Vec gs = forcing.g_shape(ops);
    const double fs2 = fs.dot(ops.Mv.cwiseProduct(fs));
    const double gs2 = gs.dot(ops.Mb.cwiseProduct(gs));
    const int quad_pts = 2000;
    bool pass = true;
    double worst = 0.0;
    std::string wit;
    for (int k = 0; k < 9; ++k) {
      const double t =
          spec.t_from + (spec.t_to - spec.t_from) * k / 8.0;
      for (double sigma : {0.0, 0.5 * forcing.sigma0, forcing.sigma0}) {
        double acc = 0.0;
        const double ds = window / quad_pts;
        for (int q = 0; q <= quad_pts; ++q) {
          const double s = t - window + q * ds;
          const double ft = forcing.f_time(s);
          const double gt = forcing.g_time(s);
          const double h = ft * ft * fs2 + gt * gt * gs2;
          const double w = (q == 0 || q == quad_pts) ? 0.5 : 1.0;
          acc += w * ds * std::exp(-sigma * (t - s)) * h;
        }
        worst = std::max(worst, acc);
        if (acc > C_fg * (1.0 + 1e-9) + 1e-300) {
          pass = false;
          if (wit.empty()) {
            std::ostringstream w;
            w << "t = " << t << ", sigma = " << sigma;
            wit = w.str();
          }
        }
      }
    }
    if (forcing.family == ForcingProfile::Family::Zero) pass = true;
    report.checks.push_back({"G2", pass, worst, wit});
  }

  return report;
}

} // namespace pfsi
