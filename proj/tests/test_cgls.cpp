#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rbskm/cgls.hpp"
#include "rbskm/error.hpp"
#include "rbskm/rng.hpp"

using namespace rbskm;

namespace {

std::vector<Index> iota(Index n) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i) v[i] = i;
  return v;
}

InnerSolveResult solve_dense(const Eigen::MatrixXd& b, const Vector& rhs, InnerSolveConfig cfg = {}) {
  const SparseMatrix keep = SparseMatrix::from_dense(b);
  return cgls_min_norm(row_gather(keep, iota(keep.rows())), rhs, cfg);
}

}  // namespace

TEST(Cgls, Scalar) {
  Eigen::MatrixXd b(1, 1);
  b << 2;
  const auto res = solve_dense(b, {4});
  ASSERT_EQ(res.d.size(), 1u);
  EXPECT_NEAR(res.d[0], 2.0, 1e-14);
  EXPECT_EQ(res.stats.iterations, 1u);
}

TEST(Cgls, Identity) {
  const auto res = solve_dense(Eigen::MatrixXd::Identity(2, 2), {1, 2});
  EXPECT_NEAR(res.d[0], 1.0, 1e-14);
  EXPECT_NEAR(res.d[1], 2.0, 1e-14);
}

TEST(Cgls, RankOneMinNorm) {
  Eigen::MatrixXd b(2, 2);
  b << 1, 0, 1, 0;
  const auto res = solve_dense(b, {1, 1});
  const auto want = oracle::pinv_solve(b, Eigen::Vector2d(1, 1));
  EXPECT_NEAR(res.d[0], 1.0, 1e-12);
  EXPECT_NEAR(res.d[1], 0.0, 1e-12);
  EXPECT_LE((oracle::to_eigen(res.d) - want).norm(), 1e-12);
}

TEST(Cgls, ZeroBlockIsDegenerate) {
  const auto res = solve_dense(Eigen::MatrixXd::Zero(2, 3), {1, 2});
  EXPECT_TRUE(res.stats.degenerate);
  EXPECT_EQ(res.d, Vector(3, 0.0));
}

TEST(Cgls, Errors) {
  const auto id = SparseMatrix::identity(3);
  EXPECT_THROW(cgls_min_norm(row_gather(id, {}), Vector{}), ArgumentError);
  EXPECT_THROW(cgls_min_norm(row_gather(id, {0, 1}), Vector{1}), ArgumentError);
  InnerSolveConfig bad;
  bad.rel_tol = 0;
  EXPECT_THROW(cgls_min_norm(row_gather(id, {0}), Vector{1}, bad), ArgumentError);
}

TEST(Cgls, IterationCapRespected) {
  RngStream rng(3);
  Eigen::MatrixXd b(20, 20);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
  Vector rhs(20);
  for (auto& v : rhs) v = rng.normal();
  InnerSolveConfig cfg;
  cfg.max_inner_iter = 3;
  EXPECT_LE(solve_dense(b, rhs, cfg).stats.iterations, 3u);
  EXPECT_LE(solve_dense(b, rhs).stats.iterations, InnerSolveConfig{}.resolved_cap(20, 20));
}

TEST(Cgls, FullRowRankMatchesPinvAndStaysInRowSpace) {
  RngStream rng(17);
  for (int t = 0; t < 50; ++t) {
    const Index rows = 1 + rng.uniform_below(10);
    const Index cols = rows + rng.uniform_below(20);
    Eigen::MatrixXd b(rows, cols);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
    Vector rhs(rows);
    for (auto& v : rhs) v = rng.normal();
    const auto res = solve_dense(b, rhs);
    const Eigen::VectorXd d = oracle::to_eigen(res.d);
    const Eigen::VectorXd want = oracle::pinv_solve(b, oracle::to_eigen(rhs));
    EXPECT_LE((d - want).norm(), 1e-6 * (1 + want.norm()));
    const Eigen::VectorXd off = d - oracle::row_space_projector(b) * d;
    EXPECT_LE(off.norm(), 1e-10 * d.norm());
    // well-conditioned small blocks terminate near rank(B)
    EXPECT_LE(res.stats.iterations, rows + 3);
  }
}
