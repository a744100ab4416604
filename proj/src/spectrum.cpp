#include "rbskm/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "rbskm/error.hpp"
#include "rbskm/rng.hpp"

namespace rbskm {

namespace {

// Gram matrix of the smaller side: A^T A (n x n) if n <= m, else A A^T.
// Both share the same nonzero eigenvalues.
Eigen::MatrixXd small_gram(const SparseMatrix& a) {
  const Eigen::MatrixXd d = a.to_dense();
  if (a.cols() <= a.rows()) return d.transpose() * d;
  return d * d.transpose();
}

}  // namespace

SpectrumEstimate estimate_spectrum(const SparseMatrix& a, const SpectrumOptions& opts) {
  if (a.rows() == 0 || a.cols() == 0 || a.is_zero())
    throw DegenerateInputError("estimate_spectrum: matrix is zero");
  if (!(opts.tol > 0.0) || opts.max_iter == 0)
    throw ArgumentError("estimate_spectrum: tol must be positive and max_iter >= 1");

  RngStream rng(opts.seed);
  Vector v(a.cols());
  for (double& vi : v) vi = rng.normal();
  double nv = norm2(v);
  for (double& vi : v) vi /= nv;

  Vector av(a.rows());
  double lambda = 0.0;
  std::size_t it = 0;
  while (it < opts.max_iter) {
    ++it;
    a.matvec(v, av);
    Vector w = a.matvec_t(av);
    const double rayleigh = norm2_sq(av);  // v^T A^T A v with |v| = 1
    const double nw = norm2(w);
    if (nw == 0.0) {
      // start vector in the null space; restart from a fresh draw
      for (double& vi : v) vi = rng.normal();
      nv = norm2(v);
      for (double& vi : v) vi /= nv;
      continue;
    }
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = w[j] / nw;
    const bool done = it > 1 && std::abs(rayleigh - lambda) <= opts.tol * rayleigh;
    lambda = rayleigh;
    if (done) break;
  }

  SpectrumEstimate est;
  est.lambda_max = lambda;
  est.iterations_used = it;
  est.tolerance = opts.tol;

  if (std::min(a.rows(), a.cols()) <= opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small_gram(a), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
    const double top = ev(ev.size() - 1);
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev(k) > opts.rank_cutoff * top) {
        est.lambda_min_plus = std::min(ev(k), est.lambda_max);
        break;
      }
    }
    est.method = SpectrumMethod::DenseExact;
  }
  return est;
}

}  // namespace rbskm
