#pragma once

#include <vector>

#include "pfsi/grid.hpp"
#include "pfsi/types.hpp"

namespace pfsi {

struct PlateMode {
  double kappa = 0.0; ///< eigenvalue, positive
  Vec g;              ///< beam field, zero-mean, Mb-normalized
};

struct PlateBasis {
  std::vector<PlateMode> modes; ///< sorted ascending by kappa
  Mat Gmat;                     ///< mode columns, n_beam x n
  Vec kappas;
  Mat P; ///< Mb-orthogonal zero-mean projector, P^2 = P

  int count() const { return int(modes.size()); }
};

/// Eigenpairs of the clamped fourth-derivative operator restricted to the
/// zero-mean subspace (spectrum of P B4 P away from the constant kernel).
PlateBasis solve_plate_eigen(const DiscreteOperators& ops, int n);

/// Spectral interpolation norm (sum_j kappa_j^{s/2} beta_j^2)^{1/2} for
/// s in [0,2]; s = 2 is the energy norm, s = 0 the L2 norm of the expansion.
double fractional_norm(const PlateBasis& basis, const Vec& beta, double s);

/// Mb-orthogonal projection coefficients beta_j = (u, g_j)_Mb.
Vec project_plate(const PlateBasis& basis, const DiscreteOperators& ops,
                  const Vec& u);

} // namespace pfsi
