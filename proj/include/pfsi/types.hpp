#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pfsi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Index = Eigen::Index;

} // namespace pfsi
