#pragma once

#include <cstdint>
#include <vector>

#include "pfsi/diagnostics.hpp"
#include "pfsi/galerkin.hpp"

namespace pfsi {

/// A sampled ball in the time-dependent phase space at origin time tau.
struct Ensemble {
  double tau = 0.0;
  double R = 0.0;
  std::vector<GalerkinState> members;
};

/// Members are drawn by normalizing Gaussian modal coordinates in the exact
/// H_tau norm and scaling by radii uniform in [0, R]; bitwise deterministic
/// for a fixed seed.
Ensemble sample_ball(const ProcessRun& run, double tau, double R, int count,
                     uint64_t seed);

/// sup_{x in A} inf_{y in B} |x - y|_{H_t}; the exact double loop.
double hausdorff_semidistance(const ProcessRun& run,
                              const std::vector<GalerkinState>& A,
                              const std::vector<GalerkinState>& B, double t);

/// Evolve every member to t_end; trajectories are independent and fan out
/// over a worker pool.  Optionally collects per-member norm series at the
/// recorded steps.
std::vector<GalerkinState> evolve_ensemble(const ProcessRun& run,
                                           const Ensemble& ens, double t_end,
                                           int workers,
                                           std::vector<Vec>* norm_series = nullptr,
                                           std::vector<double>* times = nullptr);

struct AbsorbReport {
  std::vector<double> R_values;
  std::vector<double> theta_hat;  ///< measured entering times, NaN if censored
  std::vector<double> Q_hat;      ///< per-R fitted amplitudes
  std::vector<double> omega_R;    ///< per-R fitted rates
  std::vector<double> K_R;        ///< per-R fitted asymptotes
  double omega_hat = 0.0;         ///< fitted decay rate (aggregated)
  double K_hat = 0.0;             ///< fitted asymptote (aggregated)
  double dominating_factor = 1.0; ///< scale making the envelope dominate all members
  bool censored = false;          ///< some radius never settled within the horizon
  double margin = 0.25;
};

/// Dissipative-estimate audit: evolve a ball per radius, fit the norm
/// envelope against Q exp(-omega s) + K, measure entering times.
AbsorbReport estimate_absorbing(const ProcessRun& run,
                                const std::vector<double>& R_grid, double tau,
                                double t, int count, uint64_t seed,
                                int workers);

struct OmegaLimitResult {
  std::vector<GalerkinState> representatives; ///< cluster centres at time t
  bool recurred = false; ///< clusters matched across the two earliest origins
  int cluster_count = 0;
};

/// Pullback omega-limit sample: evolve balls from each origin to t, cluster
/// the finals, keep clusters recurring across the two earliest origins.
OmegaLimitResult omega_limit_sample(const ProcessRun& run, double t,
                                    const std::vector<double>& taus, double R,
                                    int count, double cluster_tol,
                                    uint64_t seed, int workers);

struct SemidistanceSeries {
  double t = 0.0;
  std::vector<double> taus;  ///< strictly decreasing origins
  std::vector<double> delta; ///< semidistance to the reference set
  double log_slope = 0.0;    ///< least-squares slope of log delta vs (t - tau)
};

SemidistanceSeries attraction_curve(const ProcessRun& run,
                                    const std::vector<GalerkinState>& K_t,
                                    double t, const std::vector<double>& taus,
                                    double R, int count, uint64_t seed,
                                    int workers);

/// Greedy ball-covering counts in the H_t norm, one per radius; the finite
/// surrogate for the noncompactness measure.  Deterministic in member order.
std::vector<int> covering_surrogate(const ProcessRun& run,
                                    const std::vector<GalerkinState>& set,
                                    const std::vector<double>& radii, double t);

} // namespace pfsi
