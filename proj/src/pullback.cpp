#include "pfsi/pullback.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pfsi/rng.hpp"

namespace pfsi {

Ensemble sample_ball(const ProcessRun& run, double tau, double R, int count,
                     uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_ball: count must be >= 1");
  const int m = run.m(), n = run.n();

  Ensemble ens;
  ens.tau = tau;
  ens.R = R;
  ens.members.reserve(size_t(count));

  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    GalerkinState s;
    s.t = tau;
    s.alpha = Vec(m);
    s.beta = Vec(n);
    s.gamma = Vec(n);
    for (int i = 0; i < m; ++i) s.alpha(i) = rng.normal();
    for (int j = 0; j < n; ++j) s.beta(j) = rng.normal();
    for (int j = 0; j < n; ++j) s.gamma(j) = rng.normal();
    const double radius = R * rng.uniform();
    const double norm = ht_norm(run, s);
    const double scale = (norm > 0.0 && R > 0.0) ? radius / norm : 0.0;
    s.alpha *= scale;
    s.beta *= scale;
    s.gamma *= scale;
    ens.members.push_back(std::move(s));
  }
  return ens;
}

double hausdorff_semidistance(const ProcessRun& run,
                              const std::vector<GalerkinState>& A,
                              const std::vector<GalerkinState>& B, double t) {
  if (A.empty() || B.empty()) {
    throw std::invalid_argument("hausdorff_semidistance: empty set");
  }
  double sup = 0.0;
  for (const auto& x : A) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& y : B) {
      inf = std::min(inf, ht_norm_diff(run, x, y, t));
    }
    sup = std::max(sup, inf);
  }
  return sup;
}

std::vector<GalerkinState> evolve_ensemble(const ProcessRun& run,
                                           const Ensemble& ens, double t_end,
                                           int workers,
                                           std::vector<Vec>* norm_series,
                                           std::vector<double>* times) {
  const int count = int(ens.members.size());
  std::vector<GalerkinState> finals;
  finals.resize(size_t(count));
  if (norm_series) norm_series->assign(size_t(count), Vec());

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= count) return;
      try {
        Trajectory traj = evolve(run, ens.members[size_t(k)], t_end);
        finals[size_t(k)] = traj.state_at(traj.records() - 1);
        if (norm_series) {
          Vec norms(traj.records());
          for (Index r = 0; r < traj.records(); ++r) {
            norms(r) = ht_norm(run, traj.state_at(r));
          }
          (*norm_series)[size_t(k)] = std::move(norms);
          if (times && k == 0) *times = traj.times;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(size_t(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return finals;
}

namespace {

struct EnvelopeFit {
  double Q = 0.0, omega = 0.0, K = 0.0;
};

// Two-stage fit of Q exp(-omega s) + K to the norm envelope: the asymptote
// is measured as the tail maximum (last tenth of the horizon), then the
// transient excess is fitted on the log scale.
EnvelopeFit fit_envelope(const std::vector<double>& s, const std::vector<double>& y) {
  EnvelopeFit fit;
  const size_t n = s.size();
  if (n < 2) return fit;

  const size_t tail_begin = n - std::max<size_t>(1, n / 10);
  for (size_t i = tail_begin; i < n; ++i) fit.K = std::max(fit.K, y[i]);

  const double y0 = y[0];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t cnt = 0;
  for (size_t i = 0; i < tail_begin; ++i) {
    const double excess = y[i] - fit.K;
    if (excess <= std::max(1e-13 * y0, 1e-300)) continue;
    const double xs = s[i] - s[0];
    const double ys = std::log(excess);
    sx += xs;
    sy += ys;
    sxx += xs * xs;
    sxy += xs * ys;
    ++cnt;
  }
  if (cnt >= 2 && double(cnt) * sxx - sx * sx > 0.0) {
    fit.omega = -(double(cnt) * sxy - sx * sy) / (double(cnt) * sxx - sx * sx);
    fit.Q = std::exp((sy + fit.omega * sx) / double(cnt));
  }
  if (fit.omega < 0.0) fit.omega = 0.0;
  return fit;
}

} // namespace

AbsorbReport estimate_absorbing(const ProcessRun& run,
                                const std::vector<double>& R_grid, double tau,
                                double t, int count, uint64_t seed,
                                int workers) {
  AbsorbReport rep;
  rep.R_values = R_grid;

  std::vector<double> omegas;
  std::vector<double> all_K;
  double dominate = 1.0;

  // detection floor for a vanishing asymptote, uniform across the R grid
  double floor = 1e-6;
  for (double R : R_grid) floor = std::max(floor, 1e-6 * R);

  for (size_t ri = 0; ri < R_grid.size(); ++ri) {
    const Ensemble ens =
        sample_ball(run, tau, R_grid[ri], count, seed + 1000 * ri);
    std::vector<Vec> norms;
    std::vector<double> times;
    evolve_ensemble(run, ens, t, workers, &norms, &times);

    // envelope over members at each recorded time
    std::vector<double> s(times.size()), env(times.size(), 0.0);
    for (size_t r = 0; r < times.size(); ++r) {
      s[r] = times[r] - tau;
      for (const auto& nv : norms) env[r] = std::max(env[r], nv(Index(r)));
    }

    const EnvelopeFit fit = fit_envelope(s, env);
    rep.Q_hat.push_back(fit.Q);
    rep.omega_R.push_back(fit.omega);
    rep.K_R.push_back(fit.K);
    omegas.push_back(fit.omega);
    all_K.push_back(fit.K);

    // entering time: first elapsed time after which the whole ball stays
    // below the fitted asymptote (with margin); the floor keeps the level
    // meaningful in free decay where K vanishes
    const double level = std::max(fit.K, floor) * (1.0 + rep.margin);
    double theta = std::numeric_limits<double>::quiet_NaN();
    for (size_t r = 0; r < env.size(); ++r) {
      bool stays = true;
      for (size_t q = r; q < env.size(); ++q) {
        if (env[q] > level) {
          stays = false;
          break;
        }
      }
      if (stays) {
        theta = s[r];
        break;
      }
    }
    // the stay-below claim needs support: the entering time must fall within
    // the first three quarters of the horizon, else the radius is censored
    if (std::isnan(theta) || theta > 0.75 * s.back()) rep.censored = true;
    rep.theta_hat.push_back(theta);

    for (size_t r = 0; r < env.size(); ++r) {
      const double model = fit.Q * std::exp(-fit.omega * s[r]) + fit.K;
      if (env[r] > 0.0 && model > 0.0) {
        dominate = std::max(dominate, env[r] / model);
      }
    }
  }

  if (!omegas.empty()) {
    std::vector<double> sorted = omegas;
    std::sort(sorted.begin(), sorted.end());
    rep.omega_hat = sorted[sorted.size() / 2];
    rep.K_hat = *std::max_element(all_K.begin(), all_K.end());
  }
  rep.dominating_factor = dominate;
  return rep;
}

OmegaLimitResult omega_limit_sample(const ProcessRun& run, double t,
                                    const std::vector<double>& taus, double R,
                                    int count, double cluster_tol,
                                    uint64_t seed, int workers) {
  if (taus.size() < 3) {
    throw std::invalid_argument("omega_limit_sample: need at least 3 origins");
  }
  for (size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) {
      throw std::invalid_argument("omega_limit_sample: origins must decrease");
    }
  }

  // finals per origin, earliest (most negative) first
  std::vector<std::vector<GalerkinState>> finals(taus.size());
  for (size_t k = 0; k < taus.size(); ++k) {
    const Ensemble ens = sample_ball(run, taus[k], R, count, seed + 17 * k);
    finals[k] = evolve_ensemble(run, ens, t, workers);
  }

  // greedy clustering of the union from the two earliest origins
  const size_t e0 = taus.size() - 1, e1 = taus.size() - 2;
  struct Tagged {
    const GalerkinState* s;
    size_t origin;
  };
  std::vector<Tagged> pool;
  for (const auto& s : finals[e0]) pool.push_back({&s, e0});
  for (const auto& s : finals[e1]) pool.push_back({&s, e1});

  struct Cluster {
    GalerkinState centre;
    bool hit0 = false, hit1 = false;
  };
  std::vector<Cluster> clusters;
  for (const auto& tg : pool) {
    bool placed = false;
    for (auto& cl : clusters) {
      if (ht_norm_diff(run, *tg.s, cl.centre, t) <= cluster_tol) {
        (tg.origin == e0 ? cl.hit0 : cl.hit1) = true;
        placed = true;
        break;
      }
    }
    if (!placed) {
      Cluster cl;
      cl.centre = *tg.s;
      (tg.origin == e0 ? cl.hit0 : cl.hit1) = true;
      clusters.push_back(std::move(cl));
    }
  }

  OmegaLimitResult out;
  for (const auto& cl : clusters) {
    if (cl.hit0 && cl.hit1) out.representatives.push_back(cl.centre);
  }
  out.recurred = !out.representatives.empty();
  if (!out.recurred) {
    for (const auto& cl : clusters) {
      if (cl.hit0) out.representatives.push_back(cl.centre);
    }
  }
  out.cluster_count = int(clusters.size());
  return out;
}

SemidistanceSeries attraction_curve(const ProcessRun& run,
                                    const std::vector<GalerkinState>& K_t,
                                    double t, const std::vector<double>& taus,
                                    double R, int count, uint64_t seed,
                                    int workers) {
  if (K_t.empty()) throw std::invalid_argument("attraction_curve: empty K_t");
  for (size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) {
      throw std::invalid_argument("attraction_curve: origins must strictly decrease");
    }
  }

  SemidistanceSeries series;
  series.t = t;
  series.taus = taus;
  for (size_t k = 0; k < taus.size(); ++k) {
    const Ensemble ens = sample_ball(run, taus[k], R, count, seed + 17 * k);
    const auto finals = evolve_ensemble(run, ens, t, workers);
    series.delta.push_back(hausdorff_semidistance(run, finals, K_t, t));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t k = 0; k < taus.size(); ++k) {
    if (series.delta[k] <= 0.0) continue;
    const double x = t - taus[k];
    const double y = std::log(series.delta[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2 && cnt * sxx - sx * sx > 0.0) {
    series.log_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return series;
}

std::vector<int> covering_surrogate(const ProcessRun& run,
                                    const std::vector<GalerkinState>& set,
                                    const std::vector<double>& radii,
                                    double t) {
  if (set.empty()) throw std::invalid_argument("covering_surrogate: empty set");
  std::vector<int> counts;
  counts.reserve(radii.size());
  for (const double radius : radii) {
    std::vector<bool> covered(set.size(), false);
    int balls = 0;
    for (size_t i = 0; i < set.size(); ++i) {
      if (covered[i]) continue;
      ++balls;
      for (size_t j = i; j < set.size(); ++j) {
        if (!covered[j] &&
            ht_norm_diff(run, set[i], set[j], t) <= radius) {
          covered[j] = true;
        }
      }
    }
    counts.push_back(balls);
  }
  return counts;
}

} // namespace pfsi
