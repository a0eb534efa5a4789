#include "pfsi/stokes.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pfsi {

SpMat submatrix(const SpMat& A, const std::vector<Index>& rows,
                const std::vector<Index>& cols) {
  std::unordered_map<Index, Index> row_pos, col_pos;
  row_pos.reserve(rows.size());
  col_pos.reserve(cols.size());
  for (Index r = 0; r < Index(rows.size()); ++r) row_pos[rows[r]] = r;
  for (Index c = 0; c < Index(cols.size()); ++c) col_pos[cols[c]] = c;

  std::vector<Triplet> trip;
  for (int outer = 0; outer < A.outerSize(); ++outer) {
    for (SpMat::InnerIterator it(A, outer); it; ++it) {
      auto ri = row_pos.find(it.row());
      if (ri == row_pos.end()) continue;
      auto ci = col_pos.find(it.col());
      if (ci == col_pos.end()) continue;
      trip.emplace_back(ri->second, ci->second, it.value());
    }
  }
  SpMat B(Index(rows.size()), Index(cols.size()));
  B.setFromTriplets(trip.begin(), trip.end());
  B.makeCompressed();
  return B;
}

namespace {

std::vector<Index> all_cells(const CavityGrid& g) {
  std::vector<Index> ids(g.n_pressure());
  for (Index i = 0; i < g.n_pressure(); ++i) ids[i] = i;
  return ids;
}

void fix_sign(Vec& e, Vec* p) {
  const double thresh = 1e-12 * e.cwiseAbs().maxCoeff();
  for (Index i = 0; i < e.size(); ++i) {
    if (std::abs(e(i)) > thresh) {
      if (e(i) < 0.0) {
        e = -e;
        if (p) *p = -*p;
      }
      return;
    }
  }
}

} // namespace

DivFreeSpace build_divfree_space(const DiscreteOperators& ops) {
  DivFreeSpace sp;
  sp.interior = ops.interior;
  sp.boundary = ops.boundary;

  const auto cells = all_cells(ops.grid);
  const SpMat S(-ops.Lv);
  sp.S_int = submatrix(S, sp.interior, sp.interior);
  sp.S_ib = submatrix(S, sp.interior, sp.boundary);
  sp.D_int = submatrix(ops.D, cells, sp.interior);
  sp.D_bdy = submatrix(ops.D, cells, sp.boundary);

  const Index nint = sp.n_interior();
  sp.w_sqrt = Vec(nint);
  for (Index i = 0; i < nint; ++i) sp.w_sqrt(i) = std::sqrt(ops.Mv(sp.interior[i]));

  // Dhat = D_int W^{-1/2}: Euclidean geometry in scaled coordinates is the
  // Mv geometry in physical ones.
  Mat Dhat = Mat(sp.D_int);
  for (Index j = 0; j < nint; ++j) Dhat.col(j) /= sp.w_sqrt(j);

  Eigen::ColPivHouseholderQR<Mat> qr(Dhat.transpose());
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();
  const Index ncells = ops.grid.n_pressure();
  if (rank != ncells - 1) {
    std::ostringstream msg;
    msg << "build_divfree_space: divergence rank " << rank << ", expected "
        << (ncells - 1);
    throw std::runtime_error(msg.str());
  }
  Mat Q = qr.householderQ();
  sp.Z = Q.rightCols(nint - rank);

  Mat Shat = Mat(sp.S_int);
  for (Index i = 0; i < nint; ++i) Shat.row(i) /= sp.w_sqrt(i);
  for (Index j = 0; j < nint; ++j) Shat.col(j) /= sp.w_sqrt(j);
  sp.A_reduced = sp.Z.transpose() * Shat * sp.Z;
  sp.A_reduced = 0.5 * (sp.A_reduced + sp.A_reduced.transpose()).eval();

  sp.div_solver.compute(Dhat);
  sp.divT_solver.compute(Dhat.transpose());
  sp.reduced_solver.compute(sp.A_reduced);
  return sp;
}

StokesBasis solve_stokes_eigen(const DiscreteOperators& ops, int m) {
  return solve_stokes_eigen(ops, build_divfree_space(ops), m);
}

StokesBasis solve_stokes_eigen(const DiscreteOperators& ops,
                               const DivFreeSpace& space, int m) {
  if (m < 1) throw std::invalid_argument("solve_stokes_eigen: m must be >= 1");
  if (m > space.dim()) {
    std::ostringstream msg;
    msg << "solve_stokes_eigen: requested " << m << " modes, divergence-free "
        << "subspace has dimension " << space.dim();
    throw std::invalid_argument(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(space.A_reduced);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("solve_stokes_eigen: dense eigensolver failed");
  }

  const CavityGrid& g = ops.grid;
  const Index nint = space.n_interior();
  const double cell_measure = g.hx * g.hz;

  StokesBasis basis;
  basis.E = Mat::Zero(g.n_velocity(), m);
  basis.lambdas = Vec(m);
  basis.modes.reserve(m);

  for (int i = 0; i < m; ++i) {
    StokesMode mode;
    mode.lambda = eig.eigenvalues()(i);
    if (!(mode.lambda > 0.0)) {
      throw std::runtime_error(
          "solve_stokes_eigen: nonpositive eigenvalue (basis defect)");
    }

    Vec ehat = space.Z * eig.eigenvectors().col(i);
    ehat /= ehat.norm();
    Vec e_int = ehat.cwiseQuotient(space.w_sqrt);

    mode.e = Vec::Zero(g.n_velocity());
    for (Index r = 0; r < nint; ++r) mode.e(space.interior[r]) = e_int(r);

    // Momentum residual lies in range(D_int^T Mp); recover the pressure by
    // least squares and fix the zero-mean gauge.
    Vec r = space.S_int * e_int;
    for (Index k = 0; k < nint; ++k)
      r(k) -= mode.lambda * ops.Mv(space.interior[k]) * e_int(k);
    Vec q = space.divT_solver.solve(r.cwiseQuotient(space.w_sqrt));
    mode.p = q / cell_measure;
    mode.p.array() -= mode.p.mean();

    Vec mv_e = Vec(nint);
    for (Index k = 0; k < nint; ++k)
      mv_e(k) = ops.Mv(space.interior[k]) * e_int(k);
    const double resid =
        (space.S_int * e_int - space.D_int.transpose() * (cell_measure * mode.p) -
         mode.lambda * mv_e)
            .norm();
    if (resid > 1e-7 * std::max(1.0, mode.lambda)) {
      std::ostringstream msg;
      msg << "solve_stokes_eigen: mode " << i << " residual " << resid;
      throw std::runtime_error(msg.str());
    }

    fix_sign(mode.e, &mode.p);
    basis.E.col(i) = mode.e;
    basis.lambdas(i) = mode.lambda;
    basis.modes.push_back(std::move(mode));
  }
  return basis;
}

LiftingOperator build_lifting(const DiscreteOperators& ops) {
  return build_lifting(ops, build_divfree_space(ops));
}

LiftingOperator build_lifting(const DiscreteOperators& ops,
                              const DivFreeSpace& space) {
  const CavityGrid& g = ops.grid;
  const Index nb = g.n_beam();
  const Index nbdy = Index(space.boundary.size());

  std::unordered_map<Index, Index> bdy_pos;
  bdy_pos.reserve(space.boundary.size());
  for (Index r = 0; r < nbdy; ++r) bdy_pos[space.boundary[r]] = r;

  LiftingOperator lift;
  lift.Nmat = Mat::Zero(g.n_velocity(), nb);

  for (Index j = 0; j < nb; ++j) {
    // zero-mean part of the unit beam vector (incompressibility demands it)
    Vec b = Vec::Constant(nb, -g.hx);
    b(j) += 1.0;

    Vec v_bdy = Vec::Zero(nbdy);
    for (Index i = 0; i < nb; ++i) v_bdy(bdy_pos.at(g.lid_id(int(i)))) = b(i);

    // particular divergence-matching velocity, then the null-space momentum
    // correction from the reduced Dirichlet form
    Vec d = -(space.D_bdy * v_bdy);
    Vec xhat = space.div_solver.solve(d);
    Vec v_part = xhat.cwiseQuotient(space.w_sqrt);

    Vec momentum = space.S_int * v_part + space.S_ib * v_bdy;
    Vec y = space.reduced_solver.solve(
        -(space.Z.transpose() * momentum.cwiseQuotient(space.w_sqrt)));
    Vec v_int = v_part + (space.Z * y).cwiseQuotient(space.w_sqrt);

    Vec col = Vec::Zero(g.n_velocity());
    for (Index r = 0; r < space.n_interior(); ++r)
      col(space.interior[r]) = v_int(r);
    for (Index i = 0; i < nb; ++i) col(g.lid_id(int(i))) = b(i);
    lift.Nmat.col(j) = col;
  }
  return lift;
}

LiftedField apply_lifting(const LiftingOperator& lift,
                          const DiscreteOperators& ops, const Vec& b) {
  if (b.size() != ops.grid.n_beam()) {
    throw std::invalid_argument("apply_lifting: beam DOF size mismatch");
  }
  LiftedField out;
  const double mean = ops.beam_mean(b);
  out.mean_projected = std::abs(mean) > 1e-12 * (1.0 + b.cwiseAbs().maxCoeff());
  out.v = lift.Nmat * b;
  return out;
}

Vec project_onto_basis(const StokesBasis& basis, const DiscreteOperators& ops,
                       const Vec& v) {
  if (basis.count() == 0) {
    throw std::invalid_argument("project_onto_basis: empty basis");
  }
  return basis.E.transpose() * ops.Mv.cwiseProduct(v);
}

} // namespace pfsi
