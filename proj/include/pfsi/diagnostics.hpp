#pragma once

#include "pfsi/galerkin.hpp"
#include "pfsi/types.hpp"

namespace pfsi {

/// Phase-space norm |W|_{H_t}^2 = mu(t)|v|^2 + |Du|^2 + rho(t)|u_t|^2
/// (energy-consistent reading; the paper_literal_ht_norm flag switches to the
/// literal display mu|v|^2 + rho|u|^2 + |u_t|^2).
double ht_norm(const ProcessRun& run, const GalerkinState& state);

/// Same norm evaluated on the coordinate difference of two states at time t.
double ht_norm_diff(const ProcessRun& run, const GalerkinState& a,
                    const GalerkinState& b, double t);

struct EnergyPair {
  double E = 0.0;       ///< quadratic energy
  double scriptE = 0.0; ///< E plus the plate potential
};

EnergyPair energy(const ProcessRun& run, const GalerkinState& state);

double dissipation(const ProcessRun& run, const GalerkinState& state);

/// L = scriptE + delta (mu (v, Nu) + rho (u_t, u)) in modal coordinates.
double lyapunov_value(const ProcessRun& run, const GalerkinState& state,
                      double delta);

struct EnergyReport {
  Vec E, scriptE;     ///< per record
  Vec dissipation;    ///< |grad v|^2 per record
  Vec mu_correction;  ///< mu'(t) |v|^2 per record
  Vec rho_correction; ///< rho'(t) |u_t|^2 per record
  Vec f_work, g_work; ///< forcing power per record
  double residual = 0.0;
  double initial_scriptE = 0.0;
};

/// Trapezoid audit of the energy identity over the recorded series.
EnergyReport energy_report(const ProcessRun& run, const Trajectory& traj);

double energy_balance_residual(const ProcessRun& run, const Trajectory& traj);

struct LyapunovReport {
  double delta = 0.0;
  Vec L;
  double omega_hat = 0.0; ///< fitted decay rate
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  bool delta_admissible = false; ///< c2 > 0 for this delta
  bool sandwich_ok = false;      ///< samplewise -c1 + c2 E <= L <= c3 scriptE + c4
  Index first_violation = -1;
  double decay_C = 0.0; ///< smallest C with dL/dt + omega L <= C (|f|^2 + |g|^2)
  bool decay_ok = false;
  Index fit_begin = 0; ///< first record of the fitting window
};

LyapunovReport lyapunov(const ProcessRun& run, const Trajectory& traj,
                        double delta);

struct DifferenceReport {
  double T0 = 0.0;
  double eps_frac = 0.0;    ///< fractional-norm order is 2 - eps_frac
  double lhs = 0.0;         ///< |W1(t) - W2(t)|_{H_t} at the final time
  double rhs_max_sq = 0.0;  ///< max over the window of |u1 - u2|_{2-eps}^2
  double eps_input = 0.0;
  double C_fit = 0.0;       ///< smallest C with lhs <= eps_input + C rhs
};

/// Audit of the compensated-compactness difference estimate on a pair of
/// trajectories sharing bases, profiles and final time.
DifferenceReport difference_audit(const ProcessRun& run, const Trajectory& a,
                                  const Trajectory& b, double eps_input,
                                  double T0, double eps_frac = 0.25);

} // namespace pfsi
