#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pfsi/galerkin.hpp"
#include "pfsi/physics.hpp"

namespace pfsi {

using Json = nlohmann::ordered_json;

struct InitialConfig {
  std::string kind = "zero"; ///< zero | plate-mode | random-ball
  int mode = 1;              ///< plate mode index (1-based)
  double amplitude = 1.0;    ///< plate-mode amplitude
  double fluid_amplitude = 0.0; ///< optional Stokes mode-1 admixture
  double radius = 1.0;       ///< random-ball radius
};

struct ExperimentConfig {
  std::string kind = "simulate";
  // simulate / energy-audit
  double tau = 0.0;
  double t_end = 1.0;
  InitialConfig initial;
  int refine_levels = 3; ///< energy-audit dt halvings (>= 2)
  // dissipativity
  std::vector<double> R_grid = {0.5, 1.0, 2.0};
  int ensemble = 64;
  // pullback
  double t = 0.0;
  std::vector<double> tau_list = {-5.0, -10.0, -20.0, -40.0, -80.0};
  double R = 1.0;
  double cluster_tol = 1e-3;
  std::vector<double> radius_grid = {0.05, 0.1, 0.2, 0.5};
  // validate-assumptions
  double t_from = -50.0;
  double t_to = 50.0;
  int t_count = 1000;
  int u_samples = 200;
  double sample_R = 2.0;
};

struct RunConfig {
  int nx = 16, nz = 16;
  int m = 8, n = 8;
  CoefficientProfile coeffs;
  ForcingProfile forcing;
  NonlinearForce nl;
  IntegratorOptions integrator;
  ExperimentConfig experiment;
  uint64_t seed = 1;
  int workers = 0; ///< 0 = all hardware threads
  std::string out_dir = "out";
};

/// Parse and validate; unknown families or out-of-range values throw
/// std::invalid_argument with the offending key.
RunConfig config_from_json(const Json& j);

/// Canonical serialization with every default materialized; parsing the
/// output reproduces the struct exactly.
Json config_to_json(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

/// Canonical on-disk rendering (2-space indent, max-precision floats).
std::string dump_json(const Json& j);

} // namespace pfsi
