#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "rbskm/error.hpp"
#include "rbskm/generators.hpp"
#include "rbskm/linear_system.hpp"
#include "rbskm/matrix_market.hpp"

using namespace rbskm;

namespace {

SparseMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return load_matrix_market(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return 0;
}

}  // namespace

TEST(MatrixMarket, MinimalCoordinate) {
  const auto a = parse(
      "%%MatrixMarket matrix coordinate real general\n"
      "% comment\n"
      "2 2 2\n"
      "1 1 3.0\n"
      "2 2 4.0\n");
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
  want(0, 0) = 3;
  want(1, 1) = 4;
  EXPECT_EQ(a.to_dense(), want);
}

TEST(MatrixMarket, SymmetricMirrored) {
  const auto a = parse(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 2\n"
      "1 1 2\n"
      "3 1 -5\n");
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
  want(0, 0) = 2;
  want(2, 0) = -5;
  want(0, 2) = -5;
  EXPECT_EQ(a.to_dense(), want);
  EXPECT_EQ(a.nnz(), 3u);
}

TEST(MatrixMarket, SkewSymmetricNegated) {
  const auto a = parse(
      "%%MatrixMarket matrix coordinate real skew-symmetric\n"
      "2 2 1\n"
      "2 1 7\n");
  EXPECT_DOUBLE_EQ(a.to_dense()(1, 0), 7.0);
  EXPECT_DOUBLE_EQ(a.to_dense()(0, 1), -7.0);
}

TEST(MatrixMarket, DuplicatesSummed) {
  const auto a = parse(
      "%%MatrixMarket matrix coordinate real general\n"
      "1 2 3\n"
      "1 2 1.5\n"
      "1 1 1\n"
      "1 2 2.5\n");
  EXPECT_EQ(a.nnz(), 2u);
  EXPECT_DOUBLE_EQ(a.to_dense()(0, 1), 4.0);
}

TEST(MatrixMarket, IntegerFieldAndArrayLayout) {
  const auto a = parse(
      "%%MatrixMarket matrix array integer general\n"
      "2 2\n"
      "1\n"
      "0\n"
      "3\n"
      "4\n");
  Eigen::MatrixXd want(2, 2);
  want << 1, 3, 0, 4;
  EXPECT_EQ(a.to_dense(), want);
  EXPECT_EQ(a.nnz(), 3u);
}

TEST(MatrixMarket, ArraySymmetric) {
  const auto a = parse(
      "%%MatrixMarket matrix array real symmetric\n"
      "2 2\n"
      "1\n"
      "2\n"
      "3\n");
  Eigen::MatrixXd want(2, 2);
  want << 1, 2, 2, 3;
  EXPECT_EQ(a.to_dense(), want);
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"), 1u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n"), 1u);
  EXPECT_EQ(error_line("garbage\n"), 1u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n3 1 1.0\n"), 4u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"), 3u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 x 2\n"), 2u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n"), 3u);
}

TEST(MatrixMarket, RoundTrip) {
  const auto a = generate({.kind = GeneratorKind::SparseRandom, .m = 40, .n = 12, .density = 0.3, .seed = 5});
  std::stringstream buf;
  write_matrix_market(buf, a);
  EXPECT_EQ(load_matrix_market(buf), a);
}

TEST(MatrixMarket, VectorFile) {
  std::istringstream in(
      "%%MatrixMarket matrix array real general\n"
      "3 1\n1.5\n0\n-2\n");
  EXPECT_EQ(load_vector_market(in), (Vector{1.5, 0.0, -2.0}));
  std::istringstream wide("%%MatrixMarket matrix array real general\n1 2\n1\n2\n");
  EXPECT_THROW(load_vector_market(wide), ParseError);
}

TEST(MatrixMarket, MissingFileIsIoError) {
  EXPECT_THROW(load_matrix_market(std::filesystem::path("/nonexistent/x.mtx")),
               std::ios_base::failure);
}

TEST(MatrixMarket, Well1850Dimensions) {
  const char* env = std::getenv("RBSKM_DATA_DIR");
  const std::filesystem::path dir = env ? env : RBSKM_TEST_DATA_DIR;
  const auto path = dir / "well1850.mtx";
  if (!std::filesystem::exists(path)) GTEST_SKIP() << path << " not present";
  const auto a = load_matrix_market(path);
  EXPECT_EQ(a.rows(), 1850u);
  EXPECT_EQ(a.cols(), 712u);
  EXPECT_EQ(a.nnz(), 8755u);
}

TEST(Generators, GaussianMoments) {
  const auto a = generate({.kind = GeneratorKind::Gaussian, .m = 1000, .n = 50, .sigma = 1.0, .seed = 3});
  ASSERT_EQ(a.nnz(), 50000u);
  double s = 0, s2 = 0;
  for (double v : a.values()) {
    s += v;
    s2 += v * v;
  }
  const double n = 50000.0, mean = s / n, var = s2 / n - mean * mean;
  EXPECT_GT(mean, -0.05);
  EXPECT_LT(mean, 0.05);
  EXPECT_GT(var, 0.9);
  EXPECT_LT(var, 1.1);
}

TEST(Generators, SigmaScales) {
  const auto a = generate({.kind = GeneratorKind::Gaussian, .m = 400, .n = 50, .sigma = 3.0, .seed = 3});
  double s2 = 0;
  for (double v : a.values()) s2 += v * v;
  EXPECT_NEAR(s2 / 20000.0, 9.0, 0.5);
}

TEST(Generators, SparseDensity) {
  const auto a = generate({.kind = GeneratorKind::SparseRandom, .m = 500, .n = 100, .density = 0.2, .seed = 4});
  const double frac = static_cast<double>(a.nnz()) / 50000.0;
  EXPECT_GT(frac, 0.17);
  EXPECT_LT(frac, 0.23);
}

TEST(Generators, Deterministic) {
  const GeneratorSpec g{.kind = GeneratorKind::SparseRandom, .m = 200, .n = 50, .density = 0.1, .seed = 77};
  EXPECT_EQ(generate(g), generate(g));
  GeneratorSpec h = g;
  h.seed = 78;
  EXPECT_NE(generate(g), generate(h));
}

TEST(Generators, Validation) {
  EXPECT_THROW(generate({.kind = GeneratorKind::SparseRandom, .m = 5, .n = 5, .density = 0.0}), ArgumentError);
  EXPECT_THROW(generate({.kind = GeneratorKind::SparseRandom, .m = 5, .n = 5, .density = 1.5}), ArgumentError);
  EXPECT_THROW(generate({.kind = GeneratorKind::Gaussian, .m = 4, .n = 5}), ArgumentError);
  EXPECT_THROW(generate({.kind = GeneratorKind::Gaussian, .m = 5, .n = 5, .sigma = 0.0}), ArgumentError);
}

TEST(ConsistentSystem, ForcedSolution) {
  const auto sys = make_consistent_system(SparseMatrix::identity(2), Vector{1, 2});
  EXPECT_EQ(sys.b(), (Vector{1, 2}));
  ASSERT_TRUE(sys.x_star());
  EXPECT_EQ(*sys.x_star(), (Vector{1, 2}));
}

TEST(ConsistentSystem, ZeroSolutionGivesZeroRhs) {
  const auto a = generate({.kind = GeneratorKind::Gaussian, .m = 6, .n = 3, .seed = 1});
  const auto sys = make_consistent_system(a, Vector(3, 0.0));
  EXPECT_EQ(sys.b(), Vector(6, 0.0));
}

TEST(ConsistentSystem, ResidualInvariant) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = generate({.kind = GeneratorKind::SparseRandom, .m = 50, .n = 10, .density = 0.3, .seed = s});
    const auto sys = make_consistent_system(a, s + 100);
    Vector r = a.matvec(*sys.x_star());
    for (Index i = 0; i < r.size(); ++i) r[i] -= sys.b()[i];
    EXPECT_LE(norm2(r), 1e-10 * (1 + norm2(sys.b())));
    EXPECT_EQ(sys.rhs_source(), "generated");
  }
}

TEST(LinearSystem, Validation) {
  const auto id = SparseMatrix::identity(2);
  EXPECT_THROW(LinearSystem(id, Vector{1}), ArgumentError);
  EXPECT_THROW(LinearSystem(id, Vector{1, 2}, Vector{1}), ArgumentError);
  EXPECT_THROW(LinearSystem(id, Vector{1, 2}, Vector{1, 3}), ArgumentError);
  EXPECT_NO_THROW(LinearSystem(id, Vector{1, 2}, Vector{1, 2}));
}
