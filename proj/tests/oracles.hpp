#pragma once

// Dense reference computations used only by the tests.

#include <Eigen/Dense>

#include "rbskm/linear_system.hpp"
#include "rbskm/sparse_matrix.hpp"

namespace oracle {

inline Eigen::VectorXd to_eigen(const rbskm::Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline rbskm::Vector from_eigen(const Eigen::VectorXd& v) {
  return rbskm::Vector(v.data(), v.data() + v.size());
}

/// Minimum-norm least-squares solution through an SVD.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cutoff = 1e-12 * (svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  Eigen::VectorXd s_inv = svd.singularValues();
  for (Eigen::Index i = 0; i < s_inv.size(); ++i) s_inv(i) = s_inv(i) > cutoff ? 1.0 / s_inv(i) : 0.0;
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose() * b;
}

/// Orthogonal projector onto range(a^T).
inline Eigen::MatrixXd row_space_projector(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const double cutoff = 1e-10 * (svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace oracle
