#include "pfsi/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pfsi {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config: " + key + ": " + why);
}

double num(const Json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(key, "expected a number");
  return j.at(key).get<double>();
}

int integer(const Json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) bad(key, "expected an integer");
  return j.at(key).get<int>();
}

bool boolean(const Json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) bad(key, "expected a boolean");
  return j.at(key).get<bool>();
}

std::string text(const Json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) bad(key, "expected a string");
  return j.at(key).get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& key,
                            std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array()) bad(key, "expected an array");
  return j.at(key).get<std::vector<double>>();
}

const Json& section(const Json& j, const std::string& key, const Json& empty) {
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) bad(key, "expected an object");
  return j.at(key);
}

} // namespace

RunConfig config_from_json(const Json& j) {
  static const Json empty = Json::object();
  RunConfig cfg;

  const Json& grid = section(j, "grid", empty);
  cfg.nx = integer(grid, "nx", cfg.nx);
  cfg.nz = integer(grid, "nz", cfg.nz);
  if (cfg.nx < 4 || cfg.nz < 4) bad("grid", "nx and nz must be at least 4");

  const Json& basis = section(j, "basis", empty);
  cfg.m = integer(basis, "m", cfg.m);
  cfg.n = integer(basis, "n", cfg.n);
  if (cfg.m < 1 || cfg.n < 1) bad("basis", "m and n must be at least 1");
  if (cfg.n > cfg.nx - 1) bad("basis", "n exceeds the zero-mean beam dimension");

  const Json& co = section(j, "coefficients", empty);
  const std::string cfam = text(co, "family", "constant");
  if (cfam == "constant") cfg.coeffs.family = CoefficientProfile::Family::Constant;
  else if (cfam == "logistic") cfg.coeffs.family = CoefficientProfile::Family::LogisticDecay;
  else bad("coefficients.family", "unknown family '" + cfam + "'");
  cfg.coeffs.mu0 = num(co, "mu0", 1.0);
  cfg.coeffs.rho0 = num(co, "rho0", 1.0);
  cfg.coeffs.kappa_c = num(co, "kappa_c", 0.1);
  cfg.coeffs.t_center = num(co, "t_center", 0.0);
  if (cfg.coeffs.mu0 <= 0 || cfg.coeffs.rho0 <= 0)
    bad("coefficients", "mu0 and rho0 must be positive");
  if (cfg.coeffs.kappa_c <= 0) bad("coefficients.kappa_c", "must be positive");

  const Json& fo = section(j, "forcing", empty);
  const std::string ffam = text(fo, "family", "zero");
  if (ffam == "zero") cfg.forcing.family = ForcingProfile::Family::Zero;
  else if (ffam == "periodic") cfg.forcing.family = ForcingProfile::Family::Periodic;
  else if (ffam == "constant") cfg.forcing.family = ForcingProfile::Family::ConstantInTime;
  else if (ffam == "exp-decay") cfg.forcing.family = ForcingProfile::Family::ExpDecay;
  else bad("forcing.family", "unknown family '" + ffam + "'");
  cfg.forcing.amp_f = num(fo, "amp_f", 0.0);
  cfg.forcing.amp_g = num(fo, "amp_g", 0.0);
  cfg.forcing.period = num(fo, "period", 1.0);
  cfg.forcing.phase = num(fo, "phase", 0.0);
  cfg.forcing.kappa_f = num(fo, "kappa_f", 1.0);
  cfg.forcing.sigma0 = num(fo, "sigma0", 1.0);
  cfg.forcing.C_fg = num(fo, "C_fg", 0.0);
  if (cfg.forcing.period <= 0) bad("forcing.period", "must be positive");
  if (cfg.forcing.sigma0 <= 0) bad("forcing.sigma0", "must be positive");

  const Json& nl = section(j, "nonlinearity", empty);
  const std::string nfam = text(nl, "family", "zero");
  if (nfam == "zero") cfg.nl.family = NonlinearForce::Family::Zero;
  else if (nfam == "cubic") cfg.nl.family = NonlinearForce::Family::Cubic;
  else if (nfam == "berger") cfg.nl.family = NonlinearForce::Family::Berger;
  else bad("nonlinearity.family", "unknown family '" + nfam + "'");
  cfg.nl.c = num(nl, "c", 0.0);
  cfg.nl.gamma_b = num(nl, "gamma", 0.0);
  cfg.nl.q_b = num(nl, "q", 0.0);
  if (cfg.nl.family == NonlinearForce::Family::Cubic && cfg.nl.c < 0)
    bad("nonlinearity.c", "must be nonnegative");
  if (cfg.nl.family == NonlinearForce::Family::Berger && cfg.nl.gamma_b <= 0)
    bad("nonlinearity.gamma", "must be positive for the Berger family");
  if (cfg.nl.q_b < 0) bad("nonlinearity.q", "must be nonnegative");

  const Json& in = section(j, "integrator", empty);
  cfg.integrator.dt = num(in, "dt", 1e-3);
  cfg.integrator.fp_tol = num(in, "fp_tol", 1e-11);
  cfg.integrator.fp_max_iters = integer(in, "fp_max_iters", 50);
  cfg.integrator.newton_max_iters = integer(in, "newton_max_iters", 25);
  cfg.integrator.max_dt_halvings = integer(in, "max_dt_halvings", 10);
  cfg.integrator.paper_literal_damping = boolean(in, "paper_literal_damping", false);
  cfg.integrator.paper_literal_ht_norm = boolean(in, "paper_literal_ht_norm", false);
  cfg.integrator.record_every = integer(in, "record_every", 1);
  cfg.integrator.lyapunov_delta = num(in, "lyapunov_delta", 0.05);
  if (cfg.integrator.dt <= 0) bad("integrator.dt", "must be positive");
  if (cfg.integrator.record_every < 1) bad("integrator.record_every", "must be >= 1");
  if (cfg.integrator.lyapunov_delta < 0) bad("integrator.lyapunov_delta", "must be >= 0");

  const Json& ex = section(j, "experiment", empty);
  cfg.experiment.kind = text(ex, "kind", "simulate");
  const std::string& kind = cfg.experiment.kind;
  if (kind != "simulate" && kind != "energy-audit" && kind != "dissipativity" &&
      kind != "pullback" && kind != "validate-assumptions") {
    bad("experiment.kind", "unknown experiment '" + kind + "'");
  }
  cfg.experiment.tau = num(ex, "tau", 0.0);
  cfg.experiment.t_end = num(ex, "t_end", 1.0);
  cfg.experiment.refine_levels = integer(ex, "refine_levels", 3);
  cfg.experiment.R_grid = numbers(ex, "R_grid", cfg.experiment.R_grid);
  cfg.experiment.ensemble = integer(ex, "ensemble", 64);
  cfg.experiment.t = num(ex, "t", 0.0);
  cfg.experiment.tau_list = numbers(ex, "tau_list", cfg.experiment.tau_list);
  cfg.experiment.R = num(ex, "R", 1.0);
  cfg.experiment.cluster_tol = num(ex, "cluster_tol", 1e-3);
  cfg.experiment.radius_grid = numbers(ex, "radius_grid", cfg.experiment.radius_grid);
  cfg.experiment.t_from = num(ex, "t_from", -50.0);
  cfg.experiment.t_to = num(ex, "t_to", 50.0);
  cfg.experiment.t_count = integer(ex, "t_count", 1000);
  cfg.experiment.u_samples = integer(ex, "u_samples", 200);
  cfg.experiment.sample_R = num(ex, "sample_R", 2.0);
  if (cfg.experiment.t_end < cfg.experiment.tau)
    bad("experiment.t_end", "must not precede tau");
  if (cfg.experiment.ensemble < 1) bad("experiment.ensemble", "must be >= 1");
  if (cfg.experiment.refine_levels < 2) bad("experiment.refine_levels", "must be >= 2");

  const Json& init = section(ex, "initial", empty);
  cfg.experiment.initial.kind = text(init, "kind", "zero");
  const std::string& ik = cfg.experiment.initial.kind;
  if (ik != "zero" && ik != "plate-mode" && ik != "random-ball") {
    bad("experiment.initial.kind", "unknown initial datum '" + ik + "'");
  }
  cfg.experiment.initial.mode = integer(init, "mode", 1);
  cfg.experiment.initial.amplitude = num(init, "amplitude", 1.0);
  cfg.experiment.initial.fluid_amplitude = num(init, "fluid_amplitude", 0.0);
  cfg.experiment.initial.radius = num(init, "radius", 1.0);
  if (cfg.experiment.initial.mode < 1 || cfg.experiment.initial.mode > cfg.n)
    bad("experiment.initial.mode", "outside the requested plate basis");

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      bad("seed", "expected an integer");
    cfg.seed = j.at("seed").get<uint64_t>();
  }
  cfg.workers = integer(j, "workers", 0);
  cfg.out_dir = text(j, "out_dir", "out");
  return cfg;
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["grid"] = {{"nx", cfg.nx}, {"nz", cfg.nz}};
  j["basis"] = {{"m", cfg.m}, {"n", cfg.n}};

  Json co;
  co["family"] = cfg.coeffs.family == CoefficientProfile::Family::Constant
                     ? "constant"
                     : "logistic";
  co["mu0"] = cfg.coeffs.mu0;
  co["rho0"] = cfg.coeffs.rho0;
  co["kappa_c"] = cfg.coeffs.kappa_c;
  co["t_center"] = cfg.coeffs.t_center;
  j["coefficients"] = co;

  Json fo;
  switch (cfg.forcing.family) {
    case ForcingProfile::Family::Zero: fo["family"] = "zero"; break;
    case ForcingProfile::Family::Periodic: fo["family"] = "periodic"; break;
    case ForcingProfile::Family::ConstantInTime: fo["family"] = "constant"; break;
    case ForcingProfile::Family::ExpDecay: fo["family"] = "exp-decay"; break;
  }
  fo["amp_f"] = cfg.forcing.amp_f;
  fo["amp_g"] = cfg.forcing.amp_g;
  fo["period"] = cfg.forcing.period;
  fo["phase"] = cfg.forcing.phase;
  fo["kappa_f"] = cfg.forcing.kappa_f;
  fo["sigma0"] = cfg.forcing.sigma0;
  fo["C_fg"] = cfg.forcing.C_fg;
  j["forcing"] = fo;

  Json nl;
  switch (cfg.nl.family) {
    case NonlinearForce::Family::Zero: nl["family"] = "zero"; break;
    case NonlinearForce::Family::Cubic: nl["family"] = "cubic"; break;
    case NonlinearForce::Family::Berger: nl["family"] = "berger"; break;
  }
  nl["c"] = cfg.nl.c;
  nl["gamma"] = cfg.nl.gamma_b;
  nl["q"] = cfg.nl.q_b;
  j["nonlinearity"] = nl;

  Json in;
  in["dt"] = cfg.integrator.dt;
  in["fp_tol"] = cfg.integrator.fp_tol;
  in["fp_max_iters"] = cfg.integrator.fp_max_iters;
  in["newton_max_iters"] = cfg.integrator.newton_max_iters;
  in["max_dt_halvings"] = cfg.integrator.max_dt_halvings;
  in["paper_literal_damping"] = cfg.integrator.paper_literal_damping;
  in["paper_literal_ht_norm"] = cfg.integrator.paper_literal_ht_norm;
  in["record_every"] = cfg.integrator.record_every;
  in["lyapunov_delta"] = cfg.integrator.lyapunov_delta;
  j["integrator"] = in;

  Json ex;
  ex["kind"] = cfg.experiment.kind;
  ex["tau"] = cfg.experiment.tau;
  ex["t_end"] = cfg.experiment.t_end;
  Json init;
  init["kind"] = cfg.experiment.initial.kind;
  init["mode"] = cfg.experiment.initial.mode;
  init["amplitude"] = cfg.experiment.initial.amplitude;
  init["fluid_amplitude"] = cfg.experiment.initial.fluid_amplitude;
  init["radius"] = cfg.experiment.initial.radius;
  ex["initial"] = init;
  ex["refine_levels"] = cfg.experiment.refine_levels;
  ex["R_grid"] = cfg.experiment.R_grid;
  ex["ensemble"] = cfg.experiment.ensemble;
  ex["t"] = cfg.experiment.t;
  ex["tau_list"] = cfg.experiment.tau_list;
  ex["R"] = cfg.experiment.R;
  ex["cluster_tol"] = cfg.experiment.cluster_tol;
  ex["radius_grid"] = cfg.experiment.radius_grid;
  ex["t_from"] = cfg.experiment.t_from;
  ex["t_to"] = cfg.experiment.t_to;
  ex["t_count"] = cfg.experiment.t_count;
  ex["u_samples"] = cfg.experiment.u_samples;
  ex["sample_R"] = cfg.experiment.sample_R;
  j["experiment"] = ex;

  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  return j;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

} // namespace pfsi
