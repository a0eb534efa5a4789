#include "pfsi/grid.hpp"

#include <stdexcept>

namespace pfsi {

CavityGrid build_grid(int nx, int nz) {
  if (nx < 4 || nz < 4) {
    throw std::invalid_argument("build_grid: nx and nz must be at least 4");
  }
  CavityGrid g;
  g.nx = nx;
  g.nz = nz;
  g.hx = 1.0 / nx;
  g.hz = 1.0 / nz;
  return g;
}

namespace {

SpMat assemble_divergence(const CavityGrid& g) {
  std::vector<Triplet> trip;
  trip.reserve(4 * g.n_pressure());
  for (int k = 0; k < g.nz; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const Index row = g.p_id(i, k);
      trip.emplace_back(row, g.vx_id(i + 1, k), 1.0 / g.hx);
      trip.emplace_back(row, g.vx_id(i, k), -1.0 / g.hx);
      trip.emplace_back(row, g.vz_id(i, k + 1), 1.0 / g.hz);
      trip.emplace_back(row, g.vz_id(i, k), -1.0 / g.hz);
    }
  }
  SpMat D(g.n_pressure(), g.n_velocity());
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  return D;
}

SpMat assemble_gradient(const CavityGrid& g) {
  std::vector<Triplet> trip;
  trip.reserve(4 * g.n_pressure());
  for (int k = 0; k < g.nz; ++k) {
    for (int i = 1; i < g.nx; ++i) {
      const Index row = g.vx_id(i, k);
      trip.emplace_back(row, g.p_id(i, k), 1.0 / g.hx);
      trip.emplace_back(row, g.p_id(i - 1, k), -1.0 / g.hx);
    }
  }
  for (int k = 1; k < g.nz; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const Index row = g.vz_id(i, k);
      trip.emplace_back(row, g.p_id(i, k), 1.0 / g.hz);
      trip.emplace_back(row, g.p_id(i, k - 1), -1.0 / g.hz);
    }
  }
  SpMat Gp(g.n_velocity(), g.n_pressure());
  Gp.setFromTriplets(trip.begin(), trip.end());
  Gp.makeCompressed();
  return Gp;
}

// The Dirichlet form is assembled sample-by-sample: every gradient sample g_s
// contributes w_s * g_s(u) * g_s(v).  Samples on boundary lines carry half
// weight (trapezoidal closure); tangential no-slip walls enter through the
// usual reflected-ghost sample at half-cell distance.  The resulting matrix
// S is symmetric positive definite on all DOFs and Lv = -S.
SpMat assemble_laplacian(const CavityGrid& g) {
  std::vector<Triplet> trip;
  const double hx = g.hx, hz = g.hz;
  const double vol = hx * hz;

  auto add_pair = [&trip](Index a, Index b, double w, double inv_h) {
    const double s = w * inv_h * inv_h;
    trip.emplace_back(a, a, s);
    trip.emplace_back(b, b, s);
    trip.emplace_back(a, b, -s);
    trip.emplace_back(b, a, -s);
  };
  auto add_wall = [&trip](Index a, double w, double inv_half_h) {
    trip.emplace_back(a, a, w * inv_half_h * inv_half_h);
  };

  // vx: d/dx samples at cell centres.
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      add_pair(g.vx_id(i, k), g.vx_id(i + 1, k), vol, 1.0 / hx);

  // vx: d/dz samples at horizontal interfaces, half width on wall columns.
  for (int i = 0; i <= g.nx; ++i) {
    const double wcol = g.is_boundary_vx(i) ? 0.5 * vol : vol;
    for (int k = 1; k < g.nz; ++k)
      add_pair(g.vx_id(i, k - 1), g.vx_id(i, k), wcol, 1.0 / hz);
    // ghost samples against bottom wall and lid (tangential no-slip)
    add_wall(g.vx_id(i, 0), 0.5 * wcol, 2.0 / hz);
    add_wall(g.vx_id(i, g.nz - 1), 0.5 * wcol, 2.0 / hz);
  }

  // vz: d/dz samples at cell centres.
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i)
      add_pair(g.vz_id(i, k), g.vz_id(i, k + 1), vol, 1.0 / hz);

  // vz: d/dx samples at vertical interfaces, half width on bottom/lid rows.
  for (int k = 0; k <= g.nz; ++k) {
    const double wrow = g.is_boundary_vz(k) ? 0.5 * vol : vol;
    for (int i = 1; i < g.nx; ++i)
      add_pair(g.vz_id(i - 1, k), g.vz_id(i, k), wrow, 1.0 / hx);
    // ghost samples against the side walls (tangential no-slip)
    add_wall(g.vz_id(0, k), 0.5 * wrow, 2.0 / hx);
    add_wall(g.vz_id(g.nx - 1, k), 0.5 * wrow, 2.0 / hx);
  }

  SpMat S(g.n_velocity(), g.n_velocity());
  S.setFromTriplets(trip.begin(), trip.end());
  S.makeCompressed();
  return SpMat(-S);
}

// Clamped fourth derivative on cell-centred nodes.  Nodal values are
// averaged onto the interior vertices (the clamped end values vanish), the
// curvature Gram is taken there with a boundary sample (8/5) w_1 / h^2 that
// is exact on clamped quartics acting on averaged data, and a fourth-
// difference stabilizer removes the checkerboard mode the averaging cannot
// see.  Symmetric positive definite; interior rows reduce to the standard
// five-point fourth difference.
Mat assemble_beam_fourth(const CavityGrid& g) {
  const int n = g.nx;
  const double h = g.hx;

  Mat R = Mat::Zero(n - 1, n);
  for (int i = 0; i + 1 < n; ++i) {
    R(i, i) = 0.5;
    R(i, i + 1) = 0.5;
  }

  Mat D2v = Mat::Zero(n + 1, n - 1);
  Vec Wv = Vec::Constant(n + 1, h);
  D2v(0, 0) = 1.6 / (h * h);
  Wv(0) = 0.5 * h;
  for (int i = 1; i <= n - 1; ++i) {
    if (i - 2 >= 0) D2v(i, i - 2) = 1.0 / (h * h);
    D2v(i, i - 1) = -2.0 / (h * h);
    if (i < n - 1) D2v(i, i) = 1.0 / (h * h);
  }
  D2v(n, n - 2) = 1.6 / (h * h);
  Wv(n) = 0.5 * h;

  Mat B4 = R.transpose() * (D2v.transpose() * Wv.asDiagonal() * D2v) * R / h;

  const double cs = 1.0 / 256.0;
  if (n >= 5) {
    Mat D4 = Mat::Zero(n, n);
    for (int j = 0; j + 4 < n; ++j) {
      D4(j, j) = 1.0;
      D4(j, j + 1) = -4.0;
      D4(j, j + 2) = 6.0;
      D4(j, j + 3) = -4.0;
      D4(j, j + 4) = 1.0;
    }
    D4 /= h * h;
    B4 += cs * D4.transpose() * D4;
  } else {
    Mat D3 = Mat::Zero(1, n);
    D3(0, 0) = -1.0;
    D3(0, 1) = 3.0;
    D3(0, 2) = -3.0;
    D3(0, 3) = 1.0;
    D3 /= h * h;
    B4 += cs * D3.transpose() * D3;
  }
  return 0.5 * (B4 + B4.transpose());
}

Mat assemble_beam_gradient_gram(const CavityGrid& g) {
  const int n = g.nx;
  const double h = g.hx;
  Mat Dx = Mat::Zero(n + 1, n);
  Vec w(n + 1);
  Dx(0, 0) = 2.0 / h;
  w(0) = 0.5 * h;
  for (int i = 1; i < n; ++i) {
    Dx(i, i - 1) = -1.0 / h;
    Dx(i, i) = 1.0 / h;
    w(i) = h;
  }
  Dx(n, n - 1) = -2.0 / h;
  w(n) = 0.5 * h;
  // operator form: Mb^{-1} Dx^T W Dx with uniform Mb = h I
  return (Dx.transpose() * w.asDiagonal() * Dx) / h;
}

} // namespace

DiscreteOperators assemble_operators(const CavityGrid& grid) {
  DiscreteOperators ops;
  ops.grid = grid;
  ops.D = assemble_divergence(grid);
  ops.Gp = assemble_gradient(grid);
  ops.Lv = assemble_laplacian(grid);

  ops.B4 = assemble_beam_fourth(grid);
  ops.B2 = assemble_beam_gradient_gram(grid);

  std::vector<Triplet> trip;
  trip.reserve(grid.n_beam());
  for (int i = 0; i < grid.nx; ++i)
    trip.emplace_back(i, grid.lid_id(i), 1.0);
  ops.T = SpMat(grid.n_beam(), grid.n_velocity());
  ops.T.setFromTriplets(trip.begin(), trip.end());
  ops.T.makeCompressed();

  ops.m = Vec::Constant(grid.n_beam(), grid.hx);
  ops.Mb = Vec::Constant(grid.n_beam(), grid.hx);

  ops.Mv = Vec(grid.n_velocity());
  const double vol = grid.hx * grid.hz;
  for (int k = 0; k < grid.nz; ++k)
    for (int i = 0; i <= grid.nx; ++i)
      ops.Mv(grid.vx_id(i, k)) = grid.is_boundary_vx(i) ? 0.5 * vol : vol;
  for (int k = 0; k <= grid.nz; ++k)
    for (int i = 0; i < grid.nx; ++i)
      ops.Mv(grid.vz_id(i, k)) = grid.is_boundary_vz(k) ? 0.5 * vol : vol;

  for (int k = 0; k < grid.nz; ++k)
    for (int i = 0; i <= grid.nx; ++i)
      (grid.is_boundary_vx(i) ? ops.boundary : ops.interior)
          .push_back(grid.vx_id(i, k));
  for (int k = 0; k <= grid.nz; ++k)
    for (int i = 0; i < grid.nx; ++i)
      (grid.is_boundary_vz(k) ? ops.boundary : ops.interior)
          .push_back(grid.vz_id(i, k));

  return ops;
}

Vec apply_trace(const DiscreteOperators& ops, const Vec& v) {
  if (v.size() != ops.grid.n_velocity()) {
    throw std::invalid_argument("apply_trace: velocity DOF size mismatch");
  }
  return ops.T * v;
}

} // namespace pfsi
