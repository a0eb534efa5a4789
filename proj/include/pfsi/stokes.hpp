#pragma once

#include <vector>

#include "pfsi/grid.hpp"
#include "pfsi/types.hpp"

namespace pfsi {

/// Extract a submatrix of a sparse matrix by explicit row/column id lists.
SpMat submatrix(const SpMat& A, const std::vector<Index>& rows,
                const std::vector<Index>& cols);

/// Machinery shared by the constrained eigensolve and the lifting solve:
/// an orthonormal basis of the discrete divergence-free subspace (null space
/// of the interior divergence in Mv-scaled coordinates), the reduced
/// Dirichlet form on it, and a minimum-norm solver for divergence data.
///
/// Coordinates: ehat = W^{1/2} e_int with W = diag(Mv) restricted to the
/// interior DOFs, so Euclidean inner products are Mv inner products.
struct DivFreeSpace {
  std::vector<Index> interior;
  std::vector<Index> boundary;
  Vec w_sqrt;                ///< sqrt(Mv) on interior DOFs
  Mat Z;                     ///< orthonormal basis of ker(Dhat), Nint x K
  Mat A_reduced;             ///< Z^T What Z, symmetric positive definite
  SpMat S_int;               ///< interior block of the Dirichlet form -Lv
  SpMat S_ib;                ///< interior x boundary block of -Lv
  SpMat D_int;               ///< divergence on interior DOFs
  SpMat D_bdy;               ///< divergence on boundary DOFs
  Eigen::CompleteOrthogonalDecomposition<Mat> div_solver;  ///< of Dhat
  Eigen::CompleteOrthogonalDecomposition<Mat> divT_solver; ///< of Dhat^T
  Eigen::LDLT<Mat> reduced_solver;                         ///< of A_reduced

  Index n_interior() const { return Index(interior.size()); }
  Index dim() const { return Z.cols(); }
};

DivFreeSpace build_divfree_space(const DiscreteOperators& ops);

struct StokesMode {
  double lambda = 0.0; ///< eigenvalue, positive
  Vec e;               ///< velocity field, divergence-free, zero on the boundary
  Vec p;               ///< pressure, zero-mean gauge
};

struct StokesBasis {
  std::vector<StokesMode> modes; ///< sorted ascending by lambda
  Mat E;                         ///< mode columns, n_velocity x m
  Vec lambdas;

  int count() const { return int(modes.size()); }
};

/// Eigenpairs of the Dirichlet Stokes problem: -Lap e + grad p = lambda e,
/// div e = 0, e = 0 on the whole boundary.  Null-space reduction followed by
/// a dense symmetric eigensolve; deterministic sign convention (first
/// significant component positive).
StokesBasis solve_stokes_eigen(const DiscreteOperators& ops, int m);
StokesBasis solve_stokes_eigen(const DiscreteOperators& ops,
                               const DivFreeSpace& space, int m);

/// Harmonic-type extension of beam data to a divergence-free fluid field:
/// column j solves the stationary Stokes problem with lid data given by the
/// zero-mean part of the j-th beam unit vector and no-slip walls.
struct LiftingOperator {
  Mat Nmat; ///< beam DOFs -> fluid velocity DOFs, dense
};

LiftingOperator build_lifting(const DiscreteOperators& ops);
LiftingOperator build_lifting(const DiscreteOperators& ops,
                              const DivFreeSpace& space);

struct LiftedField {
  Vec v;
  bool mean_projected = false; ///< input had nonzero mean (compatibility fix)
};

/// Apply the lifting to beam data; nonzero-mean data is projected to the
/// zero-mean subspace first and flagged.
LiftedField apply_lifting(const LiftingOperator& lift,
                          const DiscreteOperators& ops, const Vec& b);

/// Mv-orthogonal projection coefficients alpha_i = (v, e_i)_Mv.
Vec project_onto_basis(const StokesBasis& basis, const DiscreteOperators& ops,
                       const Vec& v);

} // namespace pfsi
