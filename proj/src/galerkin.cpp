#include "pfsi/galerkin.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pfsi {

ModalCouplings assemble_couplings(const StokesBasis& stokes,
                                  const PlateBasis& plate,
                                  const LiftingOperator& lift,
                                  const DiscreteOperators& ops) {
  const Index nv = ops.grid.n_velocity();
  if (stokes.E.rows() != nv || lift.Nmat.rows() != nv ||
      plate.Gmat.rows() != ops.grid.n_beam()) {
    throw std::invalid_argument("assemble_couplings: bases built on a different grid");
  }

  ModalCouplings coup;
  coup.m = stokes.count();
  coup.n = plate.count();
  coup.E = stokes.E;
  coup.Gmat = plate.Gmat;
  coup.Phi = lift.Nmat * plate.Gmat;
  coup.lambda = stokes.lambdas;
  coup.kappa = plate.kappas;

  const auto mv = ops.Mv.asDiagonal();
  coup.C = coup.E.transpose() * (mv * coup.Phi);
  coup.G = coup.Phi.transpose() * (mv * coup.Phi);
  coup.G = 0.5 * (coup.G + coup.G.transpose()).eval();

  const SpMat S(-ops.Lv);
  coup.Sef = coup.E.transpose() * (S * coup.Phi);
  coup.Sff = coup.Phi.transpose() * (S * coup.Phi);
  coup.Sff = 0.5 * (coup.Sff + coup.Sff.transpose()).eval();

  coup.B2m = coup.Gmat.transpose() * ops.Mb.asDiagonal() * (ops.B2 * coup.Gmat);
  coup.B2m = 0.5 * (coup.B2m + coup.B2m.transpose()).eval();
  return coup;
}

Mat mass_matrix(const ModalCouplings& coup, double mu, double rho) {
  if (!(mu > 0.0) || !(rho > 0.0)) {
    throw std::invalid_argument("mass_matrix: mu and rho must be positive");
  }
  const int m = coup.m, n = coup.n;
  Mat M(m + n, m + n);
  M.topLeftCorner(m, m) = mu * Mat::Identity(m, m);
  M.topRightCorner(m, n) = mu * coup.C;
  M.bottomLeftCorner(n, m) = mu * coup.C.transpose();
  M.bottomRightCorner(n, n) = mu * coup.G + rho * Mat::Identity(n, n);

  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(M, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "mass_matrix: not positive definite, smallest eigenvalue "
        << eig.eigenvalues()(0);
    throw std::runtime_error(msg.str());
  }
  return M;
}

ProcessRun make_process_run(const DiscreteOperators& ops,
                            const PlateBasis& plate, const ModalCouplings& coup,
                            const LiftingOperator& lift,
                            const CoefficientProfile& coeffs,
                            const ForcingProfile& forcing,
                            const NonlinearForce& nl,
                            const IntegratorOptions& opts) {
  ProcessRun run;
  run.ops = &ops;
  run.plate = &plate;
  run.coup = &coup;
  run.lift = &lift;
  run.coeffs = coeffs;
  run.forcing = forcing;
  run.nl = nl;
  run.opts = opts;

  const Vec fs = forcing.f_shape(ops);
  const Vec gs = forcing.g_shape(ops);
  run.fe_shape = coup.E.transpose() * ops.Mv.cwiseProduct(fs);
  run.ff_shape = coup.Phi.transpose() * ops.Mv.cwiseProduct(fs);
  run.fg_shape = coup.Gmat.transpose() * ops.Mb.cwiseProduct(gs);

  if (opts.paper_literal_damping) {
    // literal index reading of the plate damping sum: (grad e_j, grad phi_k)
    // for j up to min(m, n), zero beyond
    run.damping = Mat::Zero(coup.n, coup.n);
    const int jmax = std::min(coup.m, coup.n);
    run.damping.topRows(jmax) = coup.Sef.topLeftCorner(jmax, coup.n);
  } else {
    run.damping = coup.Sff;
  }
  return run;
}

Vec modal_nonlinear_force(const ProcessRun& run, const Vec& beta) {
  const ModalCouplings& coup = *run.coup;
  switch (run.nl.family) {
    case NonlinearForce::Family::Zero:
      return Vec::Zero(coup.n);
    case NonlinearForce::Family::Cubic: {
      const Vec u = coup.Gmat * beta;
      const Vec F = run.nl.c * u.array().cube().matrix();
      return coup.Gmat.transpose() * run.ops->Mb.cwiseProduct(F);
    }
    case NonlinearForce::Family::Berger: {
      const Vec b2b = coup.B2m * beta;
      const double q = beta.dot(b2b);
      return (run.nl.gamma_b * q - run.nl.q_b) * b2b;
    }
  }
  return Vec::Zero(coup.n);
}

namespace {

Mat modal_nonlinear_jacobian(const ProcessRun& run, const Vec& beta) {
  const ModalCouplings& coup = *run.coup;
  switch (run.nl.family) {
    case NonlinearForce::Family::Zero:
      return Mat::Zero(coup.n, coup.n);
    case NonlinearForce::Family::Cubic: {
      const Vec u = coup.Gmat * beta;
      const Vec w = 3.0 * run.nl.c * run.ops->Mb.cwiseProduct(u.array().square().matrix());
      return coup.Gmat.transpose() * w.asDiagonal() * coup.Gmat;
    }
    case NonlinearForce::Family::Berger: {
      const Vec b2b = coup.B2m * beta;
      const double q = beta.dot(b2b);
      return 2.0 * run.nl.gamma_b * b2b * b2b.transpose() +
             (run.nl.gamma_b * q - run.nl.q_b) * coup.B2m;
    }
  }
  return Mat::Zero(coup.n, coup.n);
}

// y = [alpha; beta; gamma]
Vec vector_field(const ProcessRun& run, double t, const Vec& y) {
  const int m = run.m(), n = run.n();
  GalerkinState s;
  s.t = t;
  s.alpha = y.head(m);
  s.beta = y.segment(m, n);
  s.gamma = y.tail(n);

  const Coefficients c = eval_coefficients(run.coeffs, t);
  const Mat M = mass_matrix(*run.coup, c.mu, c.rho);
  const Vec b = rhs(run, t, s);
  const Vec accel = M.llt().solve(b);

  Vec dy(run.dim());
  dy.head(m) = accel.head(m);
  dy.segment(m, n) = s.gamma;
  dy.tail(n) = accel.tail(n);
  return dy;
}

// d(vector_field)/dy at (t, y), used by the Newton fallback.
Mat field_jacobian(const ProcessRun& run, double t, const Vec& y) {
  const int m = run.m(), n = run.n();
  const ModalCouplings& coup = *run.coup;
  const Coefficients c = eval_coefficients(run.coeffs, t);
  const Mat M = mass_matrix(coup, c.mu, c.rho);

  Mat B = Mat::Zero(m + n, m + 2 * n);
  B.topLeftCorner(m, m) = -Mat(coup.lambda.asDiagonal());
  B.block(0, m + n, m, n) = -coup.Sef;
  B.block(m, 0, n, m) = -coup.Sef.transpose();
  B.block(m, m, n, n) =
      -Mat(coup.kappa.asDiagonal()) - modal_nonlinear_jacobian(run, y.segment(m, n));
  B.block(m, m + n, n, n) = -run.damping.transpose();

  const Mat X = M.llt().solve(B);
  Mat A = Mat::Zero(run.dim(), run.dim());
  A.topRows(m) = X.topRows(m);
  A.block(m, m + n, n, n) = Mat::Identity(n, n);
  A.bottomRows(n) = X.bottomRows(n);
  return A;
}

GalerkinState step_with_dt(const ProcessRun& run, const GalerkinState& state,
                           double dt, int depth, StepStats* stats) {
  const int m = run.m(), n = run.n();
  Vec y(run.dim());
  y.head(m) = state.alpha;
  y.segment(m, n) = state.beta;
  y.tail(n) = state.gamma;

  const double t_mid = state.t + 0.5 * dt;
  const double scale = 1.0 + y.norm();

  // fixed-point sweep
  Vec z = y;
  bool converged = false;
  for (int it = 0; it < run.opts.fp_max_iters; ++it) {
    const Vec z_new = y + dt * vector_field(run, t_mid, 0.5 * (y + z));
    const double delta = (z_new - z).norm();
    z = z_new;
    if (stats) ++stats->fp_iters;
    if (!z.allFinite() || delta > 1e3 * scale) break;
    if (delta <= run.opts.fp_tol * scale) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    z = y;
    for (int it = 0; it < run.opts.newton_max_iters; ++it) {
      const Vec y_mid = 0.5 * (y + z);
      const Vec R = z - y - dt * vector_field(run, t_mid, y_mid);
      const Mat J = Mat::Identity(run.dim(), run.dim()) -
                    0.5 * dt * field_jacobian(run, t_mid, y_mid);
      const Vec delta = J.partialPivLu().solve(-R);
      z += delta;
      if (stats) ++stats->newton_iters;
      if (!z.allFinite()) break;
      if (delta.norm() <= run.opts.fp_tol * scale) {
        converged = true;
        break;
      }
    }
  }

  if (!converged) {
    if (depth >= run.opts.max_dt_halvings) {
      std::ostringstream msg;
      msg << "step: midpoint iteration failed at t = " << state.t
          << " after " << depth << " bisections (dt = " << dt << ")";
      throw std::runtime_error(msg.str());
    }
    if (stats) ++stats->halvings;
    GalerkinState half = step_with_dt(run, state, 0.5 * dt, depth + 1, stats);
    return step_with_dt(run, half, 0.5 * dt, depth + 1, stats);
  }

  GalerkinState out;
  out.t = state.t + dt;
  out.alpha = z.head(m);
  out.beta = z.segment(m, n);
  out.gamma = z.tail(n);
  return out;
}

} // namespace

Vec rhs(const ProcessRun& run, double t, const GalerkinState& state) {
  const ModalCouplings& coup = *run.coup;
  const int m = coup.m, n = coup.n;
  Vec b(m + n);
  b.head(m) = -coup.lambda.cwiseProduct(state.alpha) - coup.Sef * state.gamma +
              run.forcing.f_time(t) * run.fe_shape;
  b.tail(n) = -coup.Sef.transpose() * state.alpha -
              run.damping.transpose() * state.gamma -
              coup.kappa.cwiseProduct(state.beta) -
              modal_nonlinear_force(run, state.beta) +
              run.forcing.f_time(t) * run.ff_shape +
              run.forcing.g_time(t) * run.fg_shape;
  return b;
}

GalerkinState step(const ProcessRun& run, const GalerkinState& state,
                   StepStats* stats) {
  if (!(run.opts.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  return step_with_dt(run, state, run.opts.dt, 0, stats);
}

GalerkinState Trajectory::state_at(Index r) const {
  GalerkinState s;
  s.t = times.at(size_t(r));
  s.alpha = states.row(r).head(m).transpose();
  s.beta = states.row(r).segment(m, n).transpose();
  s.gamma = states.row(r).tail(n).transpose();
  return s;
}

Trajectory evolve(const ProcessRun& run, const GalerkinState& init,
                  double t_end) {
  if (t_end < init.t) throw std::invalid_argument("evolve: t_end before start");
  const double dt = run.opts.dt;
  const long n_steps = std::lround(std::ceil((t_end - init.t) / dt - 1e-12));
  const int every = std::max(1, run.opts.record_every);

  Trajectory traj;
  traj.m = run.m();
  traj.n = run.n();
  const long n_records = n_steps / every + ((n_steps % every) ? 2 : 1);
  traj.states = Mat(n_records, run.dim());
  traj.times.reserve(size_t(n_records));

  auto record = [&traj, &run](const GalerkinState& s) {
    const Index r = Index(traj.times.size());
    traj.times.push_back(s.t);
    traj.states.row(r).head(run.m()) = s.alpha.transpose();
    traj.states.row(r).segment(run.m(), run.n()) = s.beta.transpose();
    traj.states.row(r).tail(run.n()) = s.gamma.transpose();
  };

  GalerkinState s = init;
  record(s);
  for (long k = 1; k <= n_steps; ++k) {
    const double target = (k == n_steps) ? t_end : init.t + double(k) * dt;
    const double step_dt = target - s.t;
    if (step_dt <= 0.0) break;
    s = step_with_dt(run, s, step_dt, 0, nullptr);
    s.t = target; // pin against accumulation drift
    if (k % every == 0 || k == n_steps) record(s);
  }
  traj.states.conservativeResize(Index(traj.times.size()), Eigen::NoChange);
  return traj;
}

GalerkinState project_initial(const ProcessRun& run, const Vec& v,
                              const Vec& u0, const Vec& u1, double tau) {
  const DiscreteOperators& ops = *run.ops;
  const ModalCouplings& coup = *run.coup;
  const double scale0 = 1.0 + u0.cwiseAbs().maxCoeff();
  const double scale1 = 1.0 + u1.cwiseAbs().maxCoeff();
  if (std::abs(ops.beam_mean(u0)) > 1e-9 * scale0 ||
      std::abs(ops.beam_mean(u1)) > 1e-9 * scale1) {
    throw std::invalid_argument("project_initial: plate data must be zero-mean");
  }

  GalerkinState s;
  s.t = tau;
  s.beta = coup.Gmat.transpose() * ops.Mb.cwiseProduct(u0);
  s.gamma = coup.Gmat.transpose() * ops.Mb.cwiseProduct(u1);
  // v_{n,m}(tau) = Pi_m (v - N u1) + N P_n u1; the second summand is carried
  // by the gamma coordinates of the ansatz, the first by alpha
  const Vec v_corr = v - run.lift->Nmat * u1;
  s.alpha = coup.E.transpose() * ops.Mv.cwiseProduct(v_corr);
  return s;
}

Trajectory evolve_fields(const ProcessRun& run, const Vec& v, const Vec& u0,
                         const Vec& u1, double tau, double t_end) {
  return evolve(run, project_initial(run, v, u0, u1, tau), t_end);
}

} // namespace pfsi
