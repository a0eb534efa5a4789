#pragma once

#include <string>
#include <vector>

#include "pfsi/grid.hpp"
#include "pfsi/plate.hpp"
#include "pfsi/types.hpp"

namespace pfsi {

/// Time-dependent coefficients in front of the time derivatives.  The
/// logistic-decay family mu0 / (1 + exp(kc (t - tc))) is positive, decreasing,
/// bounded together with its derivative, and tends to zero as t -> +inf;
/// the constant family serves autonomous baselines.
struct CoefficientProfile {
  enum class Family { Constant, LogisticDecay };
  Family family = Family::Constant;
  double mu0 = 1.0;
  double rho0 = 1.0;
  double kappa_c = 0.1; ///< logistic decay rate
  double t_center = 0.0;

  double mu(double t) const;
  double mu_prime(double t) const;
  double rho(double t) const;
  double rho_prime(double t) const;

  /// Declared bound for sup |mu| + |mu'| + |rho| + |rho'|.
  double bound_L() const;
};

struct Coefficients {
  double mu, mu_prime, rho, rho_prime;
};

Coefficients eval_coefficients(const CoefficientProfile& profile, double t);

/// Separable forcing: fixed spatial shapes on the fluid and beam grids times
/// scalar time factors.  The exp-decay family is a deliberate fixture that
/// violates the uniform-integrability assumption as t -> -inf.
struct ForcingProfile {
  enum class Family { Zero, Periodic, ConstantInTime, ExpDecay };
  Family family = Family::Zero;
  double amp_f = 0.0;
  double amp_g = 0.0;
  double period = 1.0;
  double phase = 0.0;
  double kappa_f = 1.0; ///< exp-decay rate
  double sigma0 = 1.0;  ///< declared exponent bound for the damping window
  double C_fg = 0.0;    ///< declared window-integral bound; 0 = derive from family

  double f_time(double t) const;
  double g_time(double t) const;

  /// Spatial shapes: uniform horizontal body force on the fluid, a zero-mean
  /// parabolic load on the beam.
  Vec f_shape(const DiscreteOperators& ops) const;
  Vec g_shape(const DiscreteOperators& ops) const;

  /// Declared constant for the window check, derived from the family when
  /// C_fg was left at 0.
  double declared_C_fg(const DiscreteOperators& ops) const;
};

/// Nonlinear feedback force on the plate with potential Pi, F = Pi'.
struct NonlinearForce {
  enum class Family { Zero, Cubic, Berger };
  Family family = Family::Zero;
  double c = 0.0;       ///< cubic coefficient
  double gamma_b = 0.0; ///< Berger stretching modulus
  double q_b = 0.0;     ///< Berger in-plane preload

  /// Declared constants for the structural lower bounds; nu in (0,1).
  double declared_nu() const;
  double declared_C() const;
  double declared_a1() const;
  double declared_a2() const;
};

struct NonlinearEval {
  Vec F;           ///< nodal force field
  double Pi = 0.0; ///< potential value
};

NonlinearEval eval_nonlinearity(const NonlinearForce& nl,
                                const DiscreteOperators& ops, const Vec& u);

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0; ///< the measured constant or worst sample value
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const AssumptionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct SampleSpec {
  double t_from = -50.0;
  double t_to = 50.0;
  int t_count = 1000;
  int u_samples = 200;
  double R = 2.0; ///< energy-norm radius for sampled plate fields
  uint64_t seed = 1234;
  double eps_frac = 0.25; ///< fractional-norm order 2 - eps for the Lipschitz ratio
};

/// Samplers for the coefficient monotonicity/boundedness conditions, the
/// potential/force consistency and lower bounds, and the forcing window
/// integrability.  Samplers measure constants; they do not prove bounds.
ValidationReport validate_assumptions(const CoefficientProfile& profile,
                                      const ForcingProfile& forcing,
                                      const NonlinearForce& nl,
                                      const DiscreteOperators& ops,
                                      const PlateBasis& plate,
                                      const SampleSpec& spec);

} // namespace pfsi
