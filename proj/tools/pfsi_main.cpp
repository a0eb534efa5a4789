#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "pfsi/cache.hpp"
#include "pfsi/config.hpp"
#include "pfsi/diagnostics.hpp"
#include "pfsi/galerkin.hpp"
#include "pfsi/pullback.hpp"

namespace fs = std::filesystem;
using namespace pfsi;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCensored = 3;

struct Session {
  RunConfig cfg;
  CacheContent cache;
  fs::path out;
  uint64_t checksum = 0;
  std::chrono::steady_clock::time_point started;

  int workers() const {
    if (cfg.workers > 0) return cfg.workers;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Build the operator/basis cache or verify an existing one; the error paths
/// name the differing field.
Session open_session(const std::string& config_path, const std::string& out_override,
                     int workers_override, bool has_seed, uint64_t seed_override) {
  Session s;
  s.started = std::chrono::steady_clock::now();
  s.cfg = load_config_file(config_path);
  if (!out_override.empty()) s.cfg.out_dir = out_override;
  if (workers_override > 0) s.cfg.workers = workers_override;
  if (has_seed) s.cfg.seed = seed_override;
  s.out = fs::path(s.cfg.out_dir);
  fs::create_directories(s.out);

  const fs::path cache_path = s.out / "basis.bin";
  if (fs::exists(cache_path)) {
    s.cache = read_cache(cache_path.string(), s.cfg.nx, s.cfg.nz, s.cfg.m, s.cfg.n);
    s.checksum = s.cache.checksum;
    std::cerr << "pfsi: cache hit (" << cache_path.string() << ")\n";
  } else {
    auto ops = assemble_operators(build_grid(s.cfg.nx, s.cfg.nz));
    auto space = build_divfree_space(ops);
    auto stokes = solve_stokes_eigen(ops, space, s.cfg.m);
    auto plate = solve_plate_eigen(ops, s.cfg.n);
    auto lift = build_lifting(ops, space);
    write_cache(cache_path.string(), ops, stokes, plate, lift);
    s.cache = read_cache(cache_path.string(), s.cfg.nx, s.cfg.nz, s.cfg.m, s.cfg.n);
    s.checksum = s.cache.checksum;
    std::cerr << "pfsi: cache built (" << cache_path.string() << ")\n";
  }
  return s;
}

ProcessRun make_run(const Session& s, const ModalCouplings& coup) {
  return make_process_run(s.cache.ops, s.cache.plate, coup, s.cache.lift,
                          s.cfg.coeffs, s.cfg.forcing, s.cfg.nl,
                          s.cfg.integrator);
}

void write_manifest(const Session& s) {
  Json m;
  m["artifact"] = "pfsi";
  m["version"] = kArtifactVersion;
  m["basis_checksum"] = s.checksum;
  m["config"] = config_to_json(s.cfg);
  write_text(s.out / "manifest.json", dump_json(m));
}

void write_metadata(const Session& s, const Json& extra) {
  Json m;
  m["config"] = config_to_json(s.cfg);
  m["basis"] = {{"m", s.cfg.m}, {"n", s.cfg.n},
                {"velocity_dofs", s.cache.ops.grid.n_velocity()},
                {"beam_dofs", s.cache.ops.grid.n_beam()}};
  m["tolerances"] = {{"dt", s.cfg.integrator.dt},
                     {"fp_tol", s.cfg.integrator.fp_tol},
                     {"newton_max_iters", s.cfg.integrator.newton_max_iters}};
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - s.started)
                           .count();
  m["wall_time_seconds"] = elapsed;
  write_text(s.out / "metadata.json", dump_json(m));
}

void write_trajectory_csv(const fs::path& path, const ProcessRun& run,
                          const Trajectory& traj) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t";
  for (int i = 1; i <= traj.m; ++i) out << ",alpha_" << i;
  for (int j = 1; j <= traj.n; ++j) out << ",beta_" << j;
  for (int j = 1; j <= traj.n; ++j) out << ",gamma_" << j;
  out << ",E,scriptE,L,dissipation\n";
  for (Index r = 0; r < traj.records(); ++r) {
    const GalerkinState st = traj.state_at(r);
    out << format_double(st.t);
    for (int i = 0; i < traj.m; ++i) out << "," << format_double(st.alpha(i));
    for (int j = 0; j < traj.n; ++j) out << "," << format_double(st.beta(j));
    for (int j = 0; j < traj.n; ++j) out << "," << format_double(st.gamma(j));
    const EnergyPair e = energy(run, st);
    out << "," << format_double(e.E) << "," << format_double(e.scriptE) << ","
        << format_double(lyapunov_value(run, st, run.opts.lyapunov_delta))
        << "," << format_double(dissipation(run, st)) << "\n";
  }
}

GalerkinState initial_state(const Session& s, const ProcessRun& run,
                            const ModalCouplings& coup, double tau) {
  const InitialConfig& ic = s.cfg.experiment.initial;
  GalerkinState st;
  st.t = tau;
  st.alpha = Vec::Zero(coup.m);
  st.beta = Vec::Zero(coup.n);
  st.gamma = Vec::Zero(coup.n);
  if (ic.kind == "plate-mode") {
    st.beta(ic.mode - 1) = ic.amplitude;
    if (ic.fluid_amplitude != 0.0) st.alpha(0) = ic.fluid_amplitude;
  } else if (ic.kind == "random-ball") {
    const Ensemble one = sample_ball(run, tau, ic.radius, 1, s.cfg.seed);
    st = one.members[0];
  }
  return st;
}

int cmd_basis(const Session& s) {
  Json extra;
  extra["basis_checksum"] = s.checksum;
  extra["stokes_modes"] = s.cfg.m;
  extra["plate_modes"] = s.cfg.n;
  write_manifest(s);
  write_metadata(s, extra);
  std::cout << "basis cache checksum: " << s.checksum << "\n";
  return kExitOk;
}

int cmd_simulate(const Session& s) {
  const ModalCouplings coup =
      assemble_couplings(s.cache.stokes, s.cache.plate, s.cache.lift, s.cache.ops);
  const ProcessRun run = make_run(s, coup);
  const GalerkinState init =
      initial_state(s, run, coup, s.cfg.experiment.tau);
  const Trajectory traj = evolve(run, init, s.cfg.experiment.t_end);

  write_trajectory_csv(s.out / "trajectory.csv", run, traj);

  const EnergyReport erep = energy_report(run, traj);
  const LyapunovReport lrep =
      lyapunov(run, traj, run.opts.lyapunov_delta);
  Json diag;
  diag["records"] = traj.records();
  diag["initial_scriptE"] = erep.initial_scriptE;
  diag["final_scriptE"] = erep.scriptE(traj.records() - 1);
  diag["balance_residual"] = erep.residual;
  diag["lyapunov"] = {{"delta", lrep.delta},
                      {"omega_hat", lrep.omega_hat},
                      {"delta_admissible", lrep.delta_admissible},
                      {"sandwich_ok", lrep.sandwich_ok},
                      {"decay_C", lrep.decay_C},
                      {"c", {lrep.c1, lrep.c2, lrep.c3, lrep.c4}}};
  write_text(s.out / "diagnostics.json", dump_json(diag));
  write_manifest(s);
  write_metadata(s, Json{{"records", traj.records()}});
  return kExitOk;
}

int cmd_energy_audit(const Session& s) {
  const ModalCouplings coup =
      assemble_couplings(s.cache.stokes, s.cache.plate, s.cache.lift, s.cache.ops);
  ProcessRun run = make_run(s, coup);
  run.opts.record_every = 1;

  Json levels = Json::array();
  std::vector<double> residuals;
  double dt = s.cfg.integrator.dt;
  for (int level = 0; level < s.cfg.experiment.refine_levels; ++level) {
    ProcessRun r2 = run;
    r2.opts.dt = dt;
    const GalerkinState init =
        initial_state(s, r2, coup, s.cfg.experiment.tau);
    const Trajectory traj = evolve(r2, init, s.cfg.experiment.t_end);
    const EnergyReport rep = energy_report(r2, traj);
    residuals.push_back(std::abs(rep.residual));
    Json row;
    row["dt"] = dt;
    row["residual"] = rep.residual;
    row["relative_residual"] = std::abs(rep.residual) /
                               std::max(rep.initial_scriptE, 1e-300);
    levels.push_back(row);
    write_trajectory_csv(s.out / ("trajectory_dt" + std::to_string(level) + ".csv"),
                         r2, traj);
    dt *= 0.5;
  }

  Json audit;
  audit["levels"] = levels;
  Json factors = Json::array();
  for (size_t k = 1; k < residuals.size(); ++k)
    factors.push_back(residuals[k - 1] / std::max(residuals[k], 1e-300));
  audit["contraction_factors"] = factors;
  if (residuals.size() >= 2) {
    audit["order_estimate"] =
        std::log2(residuals.front() / std::max(residuals.back(), 1e-300)) /
        double(residuals.size() - 1);
  }
  write_text(s.out / "energy_audit.json", dump_json(audit));
  write_manifest(s);
  write_metadata(s, Json{{"levels", int(residuals.size())}});
  return kExitOk;
}

int cmd_dissipativity(const Session& s) {
  const ModalCouplings coup =
      assemble_couplings(s.cache.stokes, s.cache.plate, s.cache.lift, s.cache.ops);
  const ProcessRun run = make_run(s, coup);
  const AbsorbReport rep = estimate_absorbing(
      run, s.cfg.experiment.R_grid, s.cfg.experiment.tau, s.cfg.experiment.t_end,
      s.cfg.experiment.ensemble, s.cfg.seed, s.workers());

  Json j;
  j["R"] = rep.R_values;
  j["theta_hat"] = Json::array();
  for (double th : rep.theta_hat) {
    if (std::isnan(th)) j["theta_hat"].push_back(nullptr);
    else j["theta_hat"].push_back(th);
  }
  j["Q_hat"] = rep.Q_hat;
  j["omega_hat"] = rep.omega_hat;
  j["K_hat"] = rep.K_hat;
  j["dominating_factor"] = rep.dominating_factor;
  j["censored"] = rep.censored;
  write_text(s.out / "absorb.json", dump_json(j));

  std::ofstream curve(s.out / "theta.dat", std::ios::trunc);
  curve << "# R theta_hat\n";
  for (size_t i = 0; i < rep.R_values.size(); ++i) {
    curve << format_double(rep.R_values[i]) << " "
          << format_double(rep.theta_hat[i]) << "\n";
  }

  write_manifest(s);
  write_metadata(s, Json{{"censored", rep.censored}});
  return rep.censored ? kExitCensored : kExitOk;
}

int cmd_pullback(const Session& s) {
  const ModalCouplings coup =
      assemble_couplings(s.cache.stokes, s.cache.plate, s.cache.lift, s.cache.ops);
  const ProcessRun run = make_run(s, coup);
  const ExperimentConfig& ex = s.cfg.experiment;

  bool incomplete = false;

  // omega-limit sample (needs at least three origins)
  std::vector<GalerkinState> K_t;
  Json omega_json;
  if (ex.tau_list.size() >= 3) {
    const OmegaLimitResult res =
        omega_limit_sample(run, ex.t, ex.tau_list, ex.R, ex.ensemble,
                           ex.cluster_tol, s.cfg.seed, s.workers());
    K_t = res.representatives;
    omega_json["recurred"] = res.recurred;
    omega_json["cluster_count"] = res.cluster_count;
    omega_json["representatives"] = int(res.representatives.size());
    if (!res.recurred) incomplete = true;
  } else {
    std::cerr << "pfsi: warning: fewer than 3 origins, omega-limit skipped; "
                 "using the zero state as the reference set\n";
    GalerkinState zero;
    zero.t = ex.t;
    zero.alpha = Vec::Zero(coup.m);
    zero.beta = Vec::Zero(coup.n);
    zero.gamma = Vec::Zero(coup.n);
    K_t = {zero};
    omega_json["skipped"] = true;
  }

  const SemidistanceSeries series = attraction_curve(
      run, K_t, ex.t, ex.tau_list, ex.R, ex.ensemble, s.cfg.seed, s.workers());
  if (series.taus.size() < 2) {
    std::cerr << "pfsi: warning: single-origin attraction series is degenerate\n";
  }

  std::ofstream curve(s.out / "attraction.dat", std::ios::trunc);
  curve << "# tau delta\n";
  for (size_t k = 0; k < series.taus.size(); ++k) {
    curve << format_double(series.taus[k]) << " "
          << format_double(series.delta[k]) << "\n";
  }

  // covering surrogate on the ensemble evolved from each origin
  Json covering = Json::array();
  for (size_t k = 0; k < ex.tau_list.size(); ++k) {
    const Ensemble ens =
        sample_ball(run, ex.tau_list[k], ex.R, ex.ensemble, s.cfg.seed + 17 * k);
    const auto finals = evolve_ensemble(run, ens, ex.t, s.workers());
    Json row;
    row["tau"] = ex.tau_list[k];
    row["counts"] = covering_surrogate(run, finals, ex.radius_grid, ex.t);

    // per-member trajectory dumps for the earliest origin
    if (k + 1 == ex.tau_list.size()) {
      const fs::path dir = s.out / "members";
      fs::create_directories(dir);
      for (size_t mem = 0; mem < ens.members.size(); ++mem) {
        const Trajectory traj = evolve(run, ens.members[mem], ex.t);
        write_trajectory_csv(dir / ("member_" + std::to_string(mem) + ".csv"),
                             run, traj);
      }
    }
    covering.push_back(row);
  }

  Json j;
  j["t"] = ex.t;
  j["taus"] = series.taus;
  j["delta"] = series.delta;
  j["log_slope"] = series.log_slope;
  j["omega_limit"] = omega_json;
  j["covering"] = {{"radii", ex.radius_grid}, {"series", covering}};
  j["incomplete"] = incomplete;
  write_text(s.out / "pullback.json", dump_json(j));
  write_manifest(s);
  write_metadata(s, Json{{"origins", int(ex.tau_list.size())}});
  return incomplete ? kExitCensored : kExitOk;
}

int cmd_validate(const Session& s) {
  const ExperimentConfig& ex = s.cfg.experiment;
  SampleSpec spec;
  spec.t_from = ex.t_from;
  spec.t_to = ex.t_to;
  spec.t_count = ex.t_count;
  spec.u_samples = ex.u_samples;
  spec.R = ex.sample_R;
  spec.seed = s.cfg.seed;
  const ValidationReport rep =
      validate_assumptions(s.cfg.coeffs, s.cfg.forcing, s.cfg.nl, s.cache.ops,
                           s.cache.plate, spec);

  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["measured"] = c.measured;
    row["detail"] = c.detail;
    checks.push_back(row);
  }
  Json j;
  j["checks"] = checks;
  j["all_pass"] = rep.all_pass();
  write_text(s.out / "validation.json", dump_json(j));
  write_manifest(s);
  write_metadata(s, Json{{"checks", int(rep.checks.size())}});

  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "pass " : "FAIL ") << c.name << "  measured "
              << c.measured << (c.detail.empty() ? "" : "  [" + c.detail + "]")
              << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfsi: spectral-Galerkin fluid-plate interaction lab"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  std::string config_path;
  std::string out_override;
  int workers_override = 0;
  uint64_t seed_override = 0;
  bool has_seed = false;

  app.add_option("--config", config_path, "configuration file (JSON)")
      ->required();
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--workers", workers_override, "worker pool size");
  app.add_option("--seed", seed_override, "seed override")
      ->each([&has_seed](const std::string&) { has_seed = true; });

  auto* c_basis = app.add_subcommand("basis", "build or verify the basis cache");
  auto* c_sim = app.add_subcommand("simulate", "integrate one trajectory");
  auto* c_energy = app.add_subcommand("energy-audit", "energy identity audit");
  auto* c_diss = app.add_subcommand("dissipativity", "absorbing-estimate fit");
  auto* c_pull = app.add_subcommand("pullback", "pullback attraction experiment");
  auto* c_val = app.add_subcommand("validate-assumptions", "assumption samplers");

  CLI11_PARSE(app, argc, argv);

  try {
    const Session s = open_session(config_path, out_override, workers_override,
                                   has_seed, seed_override);
    std::string invoked;
    if (c_basis->parsed()) invoked = "basis";
    else if (c_sim->parsed()) invoked = "simulate";
    else if (c_energy->parsed()) invoked = "energy-audit";
    else if (c_diss->parsed()) invoked = "dissipativity";
    else if (c_pull->parsed()) invoked = "pullback";
    else if (c_val->parsed()) invoked = "validate-assumptions";
    if (invoked != "basis" && s.cfg.experiment.kind != invoked) {
      std::cerr << "pfsi: warning: experiment.kind is '" << s.cfg.experiment.kind
                << "' but the '" << invoked << "' subcommand was invoked\n";
    }
    if (c_basis->parsed()) return cmd_basis(s);
    if (c_sim->parsed()) return cmd_simulate(s);
    if (c_energy->parsed()) return cmd_energy_audit(s);
    if (c_diss->parsed()) return cmd_dissipativity(s);
    if (c_pull->parsed()) return cmd_pullback(s);
    if (c_val->parsed()) return cmd_validate(s);
    std::cerr << "pfsi: no subcommand\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pfsi: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    if (what.find("stale cache") != std::string::npos ||
        what.find("cache") != std::string::npos) {
      std::cerr << "pfsi: " << what << "\n";
      return kExitConfig;
    }
    std::cerr << "pfsi: solver failure: " << what << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "pfsi: " << e.what() << "\n";
    return kExitSolver;
  }
}
