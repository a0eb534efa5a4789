#include "pfsi/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace pfsi {

namespace {

double ht_norm_sq(const ProcessRun& run, const Vec& alpha, const Vec& beta,
                  const Vec& gamma, double t) {
  const ModalCouplings& coup = *run.coup;
  const Coefficients c = eval_coefficients(run.coeffs, t);
  const double v2 = coup.velocity_sq(alpha, gamma);
  if (run.opts.paper_literal_ht_norm) {
    return c.mu * v2 + c.rho * beta.squaredNorm() + gamma.squaredNorm();
  }
  return c.mu * v2 + beta.dot(coup.kappa.cwiseProduct(beta)) +
         c.rho * gamma.squaredNorm();
}

} // namespace

double ht_norm(const ProcessRun& run, const GalerkinState& state) {
  return std::sqrt(ht_norm_sq(run, state.alpha, state.beta, state.gamma, state.t));
}

double ht_norm_diff(const ProcessRun& run, const GalerkinState& a,
                    const GalerkinState& b, double t) {
  return std::sqrt(ht_norm_sq(run, a.alpha - b.alpha, a.beta - b.beta,
                              a.gamma - b.gamma, t));
}

EnergyPair energy(const ProcessRun& run, const GalerkinState& state) {
  const ModalCouplings& coup = *run.coup;
  const Coefficients c = eval_coefficients(run.coeffs, state.t);
  EnergyPair out;
  out.E = 0.5 * (c.mu * coup.velocity_sq(state.alpha, state.gamma) +
                 c.rho * state.gamma.squaredNorm() +
                 state.beta.dot(coup.kappa.cwiseProduct(state.beta)));
  const Vec u = coup.reconstruct_beam(state.beta);
  out.scriptE = out.E + eval_nonlinearity(run.nl, *run.ops, u).Pi;
  return out;
}

double dissipation(const ProcessRun& run, const GalerkinState& state) {
  return run.coup->dissipation(state.alpha, state.gamma);
}

double lyapunov_value(const ProcessRun& run, const GalerkinState& state,
                      double delta) {
  const ModalCouplings& coup = *run.coup;
  const Coefficients c = eval_coefficients(run.coeffs, state.t);
  const double v_nu =
      state.alpha.dot(coup.C * state.beta) + state.gamma.dot(coup.G * state.beta);
  const double ut_u = state.gamma.dot(state.beta);
  return energy(run, state).scriptE + delta * (c.mu * v_nu + c.rho * ut_u);
}

EnergyReport energy_report(const ProcessRun& run, const Trajectory& traj) {
  const Index nrec = traj.records();
  if (nrec < 1) throw std::invalid_argument("energy_report: empty trajectory");

  EnergyReport rep;
  rep.E = Vec(nrec);
  rep.scriptE = Vec(nrec);
  rep.dissipation = Vec(nrec);
  rep.mu_correction = Vec(nrec);
  rep.rho_correction = Vec(nrec);
  rep.f_work = Vec(nrec);
  rep.g_work = Vec(nrec);

  for (Index r = 0; r < nrec; ++r) {
    const GalerkinState s = traj.state_at(r);
    const Coefficients c = eval_coefficients(run.coeffs, s.t);
    const EnergyPair e = energy(run, s);
    rep.E(r) = e.E;
    rep.scriptE(r) = e.scriptE;
    rep.dissipation(r) = dissipation(run, s);
    rep.mu_correction(r) = c.mu_prime * run.coup->velocity_sq(s.alpha, s.gamma);
    rep.rho_correction(r) = c.rho_prime * s.gamma.squaredNorm();
    const double ft = run.forcing.f_time(s.t);
    const double gt = run.forcing.g_time(s.t);
    rep.f_work(r) =
        ft * (run.fe_shape.dot(s.alpha) + run.ff_shape.dot(s.gamma));
    rep.g_work(r) = gt * run.fg_shape.dot(s.gamma);
  }
  rep.initial_scriptE = rep.scriptE(0);

  if (nrec >= 2) {
    auto trapezoid = [&traj](const Vec& f) {
      double acc = 0.0;
      for (Index r = 1; r < f.size(); ++r) {
        acc += 0.5 * (traj.times[size_t(r)] - traj.times[size_t(r - 1)]) *
               (f(r) + f(r - 1));
      }
      return acc;
    };
    rep.residual = rep.scriptE(nrec - 1) - rep.scriptE(0) +
                   trapezoid(rep.dissipation) -
                   0.5 * trapezoid(rep.mu_correction) -
                   0.5 * trapezoid(rep.rho_correction) - trapezoid(rep.f_work) -
                   trapezoid(rep.g_work);
  }
  return rep;
}

double energy_balance_residual(const ProcessRun& run, const Trajectory& traj) {
  if (traj.records() < 3) {
    throw std::invalid_argument("energy_balance_residual: need >= 3 records");
  }
  return energy_report(run, traj).residual;
}

LyapunovReport lyapunov(const ProcessRun& run, const Trajectory& traj,
                        double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("lyapunov: delta must be >= 0");
  const Index nrec = traj.records();
  const EnergyReport erep = energy_report(run, traj);

  LyapunovReport rep;
  rep.delta = delta;
  rep.L = Vec(nrec);
  for (Index r = 0; r < nrec; ++r) {
    rep.L(r) = lyapunov_value(run, traj.state_at(r), delta);
  }

  // Sandwich constants.  Every shipped potential is bounded below by a
  // constant (cubic and zero are nonnegative, Berger by -Q^2/(4 Gamma)), and
  // the cross terms obey |mu (v, Nu) + rho (u_t, u)| <= m_hat E with
  // m_hat from the measured lifting norm |Nu|_Mv <= sqrt(lmax(G)) |u|_Mb
  // and |u| <= |Du| / sqrt(kappa1).
  const double floor_C = run.nl.declared_C();
  Eigen::SelfAdjointEigenSolver<Mat> eg(run.coup->G, Eigen::EigenvaluesOnly);
  const double c_N = std::sqrt(std::max(0.0, eg.eigenvalues().maxCoeff()));
  const double t0 = traj.times.front();
  const Coefficients c0 = eval_coefficients(run.coeffs, t0);
  const double kappa1 = run.coup->kappa(0);
  const double m_hat =
      (c_N * std::sqrt(c0.mu) + std::sqrt(c0.rho)) / std::sqrt(kappa1);

  rep.c1 = floor_C;
  rep.c2 = 1.0 - delta * m_hat;
  rep.c3 = 1.0 + delta * m_hat;
  rep.c4 = delta * m_hat * floor_C;
  rep.delta_admissible = rep.c2 > 0.0;

  rep.sandwich_ok = true;
  rep.first_violation = -1;
  for (Index r = 0; r < nrec; ++r) {
    const double scale = 1.0 + std::abs(rep.L(r));
    const bool lower = -rep.c1 + rep.c2 * erep.E(r) <= rep.L(r) + 1e-9 * scale;
    const bool upper = rep.L(r) <= rep.c3 * erep.scriptE(r) + rep.c4 + 1e-9 * scale;
    if (!(lower && upper)) {
      rep.sandwich_ok = false;
      rep.first_violation = r;
      break;
    }
  }

  // Fitting window: from the first record where forcing power drops below 1%
  // of dissipation.
  Index begin = 0;
  for (Index r = 0; r < nrec; ++r) {
    const double work = std::abs(erep.f_work(r)) + std::abs(erep.g_work(r));
    if (work <= 0.01 * std::max(erep.dissipation(r), 1e-300)) {
      begin = r;
      break;
    }
    begin = r;
  }
  rep.fit_begin = begin;

  // Least squares of log(L + c1) against t over the window.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Index cnt = 0;
  for (Index r = begin; r < nrec; ++r) {
    const double val = rep.L(r) + rep.c1;
    if (val <= 1e-300) continue;
    const double x = traj.times[size_t(r)];
    const double y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2 && sxx * cnt - sx * sx > 0.0) {
    rep.omega_hat = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }

  // Samplewise check of dL/dt + omega L <= C (|f|^2 + |g|^2).
  const Vec fs = run.forcing.f_shape(*run.ops);
  const Vec gs = run.forcing.g_shape(*run.ops);
  const double fs2 = fs.dot(run.ops->Mv.cwiseProduct(fs));
  const double gs2 = gs.dot(run.ops->Mb.cwiseProduct(gs));
  rep.decay_ok = true;
  rep.decay_C = 0.0;
  const double l_scale = rep.L.cwiseAbs().maxCoeff() + 1e-300;
  for (Index r = 1; r + 1 < nrec; ++r) {
    const double dtw = traj.times[size_t(r + 1)] - traj.times[size_t(r - 1)];
    const double dLdt = (rep.L(r + 1) - rep.L(r - 1)) / dtw;
    const double num = dLdt + rep.omega_hat * rep.L(r);
    const double ft = run.forcing.f_time(traj.times[size_t(r)]);
    const double gt = run.forcing.g_time(traj.times[size_t(r)]);
    const double den = ft * ft * fs2 + gt * gt * gs2;
    if (den > 1e-14) {
      rep.decay_C = std::max(rep.decay_C, std::max(0.0, num) / den);
    } else if (num > 1e-7 * l_scale) {
      rep.decay_ok = false;
    }
  }
  return rep;
}

DifferenceReport difference_audit(const ProcessRun& run, const Trajectory& a,
                                  const Trajectory& b, double eps_input,
                                  double T0, double eps_frac) {
  if (a.records() < 2 || b.records() < 2) {
    throw std::invalid_argument("difference_audit: empty trajectory");
  }
  if (a.records() != b.records() ||
      std::abs(a.times.back() - b.times.back()) > 1e-12 ||
      std::abs(a.times.front() - b.times.front()) > 1e-12) {
    throw std::invalid_argument("difference_audit: trajectories not aligned");
  }
  const double t_final = a.times.back();
  if (t_final - T0 < a.times.front() - 1e-12) {
    throw std::invalid_argument("difference_audit: window not covered by runs");
  }

  DifferenceReport rep;
  rep.T0 = T0;
  rep.eps_frac = eps_frac;
  rep.eps_input = eps_input;
  rep.lhs = ht_norm_diff(run, a.state_at(a.records() - 1),
                         b.state_at(b.records() - 1), t_final);

  rep.rhs_max_sq = 0.0;
  for (Index r = 0; r < a.records(); ++r) {
    if (a.times[size_t(r)] < t_final - T0 - 1e-12) continue;
    const Vec dbeta = (a.state_at(r).beta - b.state_at(r).beta).eval();
    const double fn = fractional_norm(*run.plate, dbeta, 2.0 - eps_frac);
    rep.rhs_max_sq = std::max(rep.rhs_max_sq, fn * fn);
  }

  const double slack = rep.lhs - eps_input;
  rep.C_fit = (slack <= 0.0) ? 0.0 : slack / std::max(rep.rhs_max_sq, 1e-300);
  return rep;
}

} // namespace pfsi
