#include "pfsi/plate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pfsi {

namespace {

void fix_sign(Vec& g) {
  const double thresh = 1e-12 * g.cwiseAbs().maxCoeff();
  for (Index i = 0; i < g.size(); ++i) {
    if (std::abs(g(i)) > thresh) {
      if (g(i) < 0.0) g = -g;
      return;
    }
  }
}

} // namespace

PlateBasis solve_plate_eigen(const DiscreteOperators& ops, int n) {
  const Index nb = ops.grid.n_beam();
  if (n < 1) throw std::invalid_argument("solve_plate_eigen: n must be >= 1");
  if (n > nb - 1) {
    std::ostringstream msg;
    msg << "solve_plate_eigen: requested " << n << " modes, zero-mean clamped "
        << "subspace has dimension " << (nb - 1);
    throw std::invalid_argument(msg.str());
  }

  PlateBasis basis;
  // Uniform Mb makes the plain symmetric projector Mb-orthogonal as well.
  basis.P = Mat::Identity(nb, nb) - Vec::Ones(nb) * ops.m.transpose();

  Mat A = basis.P * ops.B4 * basis.P;
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("solve_plate_eigen: dense eigensolver failed");
  }

  // Exactly one spurious zero from the constant kernel of P.
  const double drop_tol = 1e-10 * eig.eigenvalues().cwiseAbs().maxCoeff();
  int first = 0;
  while (first < nb && eig.eigenvalues()(first) < drop_tol) ++first;
  if (first != 1) {
    std::ostringstream msg;
    msg << "solve_plate_eigen: expected one null mode, found " << first;
    throw std::runtime_error(msg.str());
  }

  const double h = ops.grid.hx;
  basis.Gmat = Mat(nb, n);
  basis.kappas = Vec(n);
  basis.modes.reserve(n);
  for (int j = 0; j < n; ++j) {
    PlateMode mode;
    mode.kappa = eig.eigenvalues()(first + j);
    Vec g = eig.eigenvectors().col(first + j);
    g = basis.P * g;          // scrub rounding in the mean
    g /= std::sqrt(h) * g.norm();
    fix_sign(g);
    mode.g = g;
    basis.Gmat.col(j) = g;
    basis.kappas(j) = mode.kappa;
    basis.modes.push_back(std::move(mode));
  }
  return basis;
}

double fractional_norm(const PlateBasis& basis, const Vec& beta, double s) {
  if (s < 0.0 || s > 2.0) {
    throw std::invalid_argument("fractional_norm: s must lie in [0,2]");
  }
  if (beta.size() != basis.count()) {
    throw std::invalid_argument("fractional_norm: coefficient size mismatch");
  }
  double acc = 0.0;
  for (int j = 0; j < basis.count(); ++j) {
    acc += std::pow(basis.kappas(j), 0.5 * s) * beta(j) * beta(j);
  }
  return std::sqrt(acc);
}

Vec project_plate(const PlateBasis& basis, const DiscreteOperators& ops,
                  const Vec& u) {
  if (basis.count() == 0) {
    throw std::invalid_argument("project_plate: empty basis");
  }
  return basis.Gmat.transpose() * ops.Mb.cwiseProduct(u);
}

} // namespace pfsi
