#pragma once

#include <vector>

#include "pfsi/grid.hpp"
#include "pfsi/physics.hpp"
#include "pfsi/plate.hpp"
#include "pfsi/stokes.hpp"
#include "pfsi/types.hpp"

namespace pfsi {

/// Inner products between the Stokes modes e_i and the lifted plate modes
/// phi_j = N g_j that define the coupled modal system.
struct ModalCouplings {
  int m = 0; ///< Stokes mode count
  int n = 0; ///< plate mode count

  Mat C;      ///< m x n, C(k,j) = (phi_j, e_k)_Mv
  Mat G;      ///< n x n, G(j,k) = (phi_j, phi_k)_Mv
  Mat Sef;    ///< m x n, Sef(i,k) = (grad e_i, grad phi_k)
  Mat Sff;    ///< n x n, Sff(j,k) = (grad phi_j, grad phi_k)
  Vec lambda; ///< Stokes eigenvalues
  Vec kappa;  ///< plate eigenvalues
  Mat B2m;    ///< n x n, (g_j, B2 g_k)_Mb, Berger terms in modal coordinates

  Mat E;    ///< Stokes mode columns (n_velocity x m)
  Mat Phi;  ///< lifted plate mode columns (n_velocity x n)
  Mat Gmat; ///< plate mode columns (n_beam x n)

  Vec reconstruct_velocity(const Vec& alpha, const Vec& gamma) const {
    return E * alpha + Phi * gamma;
  }
  Vec reconstruct_beam(const Vec& beta) const { return Gmat * beta; }

  /// |v|_Mv^2 of the reconstructed velocity, in modal coordinates.
  double velocity_sq(const Vec& alpha, const Vec& gamma) const {
    return alpha.squaredNorm() + 2.0 * alpha.dot(C * gamma) +
           gamma.dot(G * gamma);
  }

  /// Viscous dissipation |grad v|^2 in modal coordinates.
  double dissipation(const Vec& alpha, const Vec& gamma) const {
    return alpha.dot(lambda.cwiseProduct(alpha)) +
           2.0 * alpha.dot(Sef * gamma) + gamma.dot(Sff * gamma);
  }
};

ModalCouplings assemble_couplings(const StokesBasis& stokes,
                                  const PlateBasis& plate,
                                  const LiftingOperator& lift,
                                  const DiscreteOperators& ops);

/// M(t) = [[mu I, mu C], [mu C^T, mu G + rho I]] acting on (alpha', gamma').
/// Throws if the matrix fails to be positive definite (basis defect),
/// reporting the smallest eigenvalue.
Mat mass_matrix(const ModalCouplings& coup, double mu, double rho);

struct GalerkinState {
  double t = 0.0;
  Vec alpha; ///< fluid modal coordinates
  Vec beta;  ///< plate displacement coordinates
  Vec gamma; ///< plate velocity coordinates, gamma = beta'
};

struct IntegratorOptions {
  double dt = 1e-3;
  double fp_tol = 1e-11;
  int fp_max_iters = 50;
  int newton_max_iters = 25;
  int max_dt_halvings = 10;
  bool paper_literal_damping = false;
  bool paper_literal_ht_norm = false;
  int record_every = 1;
  double lyapunov_delta = 0.05;
};

/// Everything a trajectory integration needs: immutable operator/basis
/// references plus run parameters.  Safe to share across threads.
struct ProcessRun {
  const DiscreteOperators* ops = nullptr;
  const PlateBasis* plate = nullptr;
  const ModalCouplings* coup = nullptr;
  const LiftingOperator* lift = nullptr;
  CoefficientProfile coeffs;
  ForcingProfile forcing;
  NonlinearForce nl;
  IntegratorOptions opts;

  Vec fe_shape;  ///< (f_shape, e_k)_Mv
  Vec ff_shape;  ///< (f_shape, phi_k)_Mv
  Vec fg_shape;  ///< (g_shape, g_k)_Mb
  Mat damping;   ///< matrix on gamma in the plate rows (Sff, or paper-literal)

  int m() const { return coup->m; }
  int n() const { return coup->n; }
  int dim() const { return coup->m + 2 * coup->n; }
};

ProcessRun make_process_run(const DiscreteOperators& ops,
                            const PlateBasis& plate, const ModalCouplings& coup,
                            const LiftingOperator& lift,
                            const CoefficientProfile& coeffs,
                            const ForcingProfile& forcing,
                            const NonlinearForce& nl,
                            const IntegratorOptions& opts);

/// Modal projection (F(u_n), g_k)_Mb of the nonlinear force.
Vec modal_nonlinear_force(const ProcessRun& run, const Vec& beta);

/// Full right-hand side of M(t) (alpha', gamma')^T = rhs: forcing minus
/// stiffness, damping and nonlinear terms.
Vec rhs(const ProcessRun& run, double t, const GalerkinState& state);

struct StepStats {
  int fp_iters = 0;
  int newton_iters = 0;
  int halvings = 0;
};

/// One implicit-midpoint step of length opts.dt.  The midpoint system is
/// solved by fixed-point iteration with a Newton fallback; on persistent
/// failure the step is bisected up to max_dt_halvings times.
GalerkinState step(const ProcessRun& run, const GalerkinState& state,
                   StepStats* stats = nullptr);

struct Trajectory {
  int m = 0, n = 0;
  std::vector<double> times;
  Mat states; ///< row r = [alpha; beta; gamma] at times[r]

  Index records() const { return Index(times.size()); }
  GalerkinState state_at(Index r) const;
};

/// Integrate the process from the given state to t_end, recording every
/// record_every-th step (first and last always included).
Trajectory evolve(const ProcessRun& run, const GalerkinState& init,
                  double t_end);

/// Modal projection of discrete initial fields: the fluid part receives the
/// lifting correction before projection onto the Stokes modes.
GalerkinState project_initial(const ProcessRun& run, const Vec& v,
                              const Vec& u0, const Vec& u1, double tau);

Trajectory evolve_fields(const ProcessRun& run, const Vec& v, const Vec& u0,
                         const Vec& u1, double tau, double t_end);

} // namespace pfsi
