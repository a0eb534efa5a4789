#pragma once

#include <vector>

#include "pfsi/types.hpp"

namespace pfsi {

/// MAC-staggered grid on the unit cavity (0,1) x (-1,0).  Horizontal
/// velocities live on vertical faces, vertical velocities on horizontal
/// faces, pressures at cell centres.  The elastic beam occupies the lid
/// z = 0 and its nodes coincide with the lid row of vertical-velocity DOFs,
/// so the fluid->beam trace is a pure index map.
struct CavityGrid {
  int nx = 0;      ///< cell count across
  int nz = 0;      ///< cell count down
  double hx = 0.0; ///< mesh width, nx*hx = 1
  double hz = 0.0; ///< mesh width, nz*hz = 1

  Index n_vx() const { return Index(nx + 1) * nz; }
  Index n_vz() const { return Index(nx) * (nz + 1); }
  Index n_velocity() const { return n_vx() + n_vz(); }
  Index n_pressure() const { return Index(nx) * nz; }
  Index n_beam() const { return nx; }

  // DOF index maps.  vx(i,k): i in [0,nx], k in [0,nz-1].
  //                  vz(i,k): i in [0,nx-1], k in [0,nz].
  //                  p(i,k):  i in [0,nx-1], k in [0,nz-1].
  Index vx_id(int i, int k) const { return Index(k) * (nx + 1) + i; }
  Index vz_id(int i, int k) const { return n_vx() + Index(k) * nx + i; }
  Index p_id(int i, int k) const { return Index(k) * nx + i; }

  /// Lid vertical-velocity DOF carrying beam node i.
  Index lid_id(int i) const { return vz_id(i, nz); }

  /// Beam node abscissa (cell centre on the lid).
  double beam_x(int i) const { return (i + 0.5) * hx; }

  bool is_boundary_vx(int i) const { return i == 0 || i == nx; }
  bool is_boundary_vz(int k) const { return k == 0 || k == nz; }
};

/// Rejects nx or nz below 4 (the clamped closures degenerate).
CavityGrid build_grid(int nx, int nz);

/// All discrete operators the rest of the pipeline consumes.  Immutable
/// after assembly and reproducible bit-for-bit for a given grid.
struct DiscreteOperators {
  CavityGrid grid;

  SpMat D;  ///< divergence, velocity -> pressure cells (unweighted stencil)
  SpMat Gp; ///< pressure gradient, cells -> velocity (zero rows on boundary DOFs)
  SpMat Lv; ///< vector Laplacian with no-slip closure; -Lv is the Dirichlet form
  Mat B4;   ///< clamped beam fourth derivative, symmetric positive definite
  Mat B2;   ///< clamped beam -u'' weak form (gradient Gram), for Berger terms
  SpMat T;  ///< trace, velocity -> beam (lid row extraction)
  Vec m;    ///< mean functional on beam DOFs (quadrature weights), m.1 = 1
  Vec Mv;   ///< velocity quadrature weights (diagonal mass)
  Vec Mb;   ///< beam quadrature weights (diagonal mass)

  std::vector<Index> interior; ///< velocity DOFs free of Dirichlet data
  std::vector<Index> boundary; ///< wall + lid normal-velocity DOFs

  /// Discrete Dirichlet form a(u,v) = integral grad u : grad v.
  double dirichlet_form(const Vec& u, const Vec& v) const {
    return -u.dot(Lv * v);
  }

  double velocity_norm(const Vec& v) const {
    return std::sqrt(v.dot(Mv.cwiseProduct(v)));
  }
  double beam_norm(const Vec& u) const {
    return std::sqrt(u.dot(Mb.cwiseProduct(u)));
  }
  double beam_inner(const Vec& u, const Vec& w) const {
    return u.dot(Mb.cwiseProduct(w));
  }
  double beam_mean(const Vec& u) const { return m.dot(u); }
};

DiscreteOperators assemble_operators(const CavityGrid& grid);

/// Lid vertical-velocity samples of a full velocity DOF vector.  Exact index
/// extraction, no smoothing.  Throws on size mismatch.
Vec apply_trace(const DiscreteOperators& ops, const Vec& v);

} // namespace pfsi
