#include "rbskm/generators.hpp"

#include <cmath>

#include "rbskm/error.hpp"
#include "rbskm/rng.hpp"
#include "rbskm/text.hpp"

namespace rbskm {

namespace {

// Stream ids under the generator seed. Fixed forever: changing them changes
// every seeded matrix.
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kSolutionStream = 1;

}  // namespace

const char* to_string(GeneratorKind k) {
  return k == GeneratorKind::Gaussian ? "gaussian" : "sparse-random";
}

void GeneratorSpec::validate() const {
  if (m == 0 || n == 0) throw ArgumentError("generator: m and n must be positive");
  if (m < n) throw ArgumentError("generator: requires m >= n");
  if (kind == GeneratorKind::Gaussian && !(sigma > 0.0))
    throw ArgumentError("generator: sigma must be positive");
  if (kind == GeneratorKind::SparseRandom && !(density > 0.0 && density <= 1.0))
    throw ArgumentError("generator: density must lie in (0, 1]");
}

std::string GeneratorSpec::describe() const {
  std::string s = std::string(to_string(kind)) + "(m=" + std::to_string(m) +
                  ",n=" + std::to_string(n);
  if (kind == GeneratorKind::Gaussian)
    s += ",sigma=" + to_text(sigma);
  else
    s += ",density=" + to_text(density);
  return s + ",seed=" + std::to_string(seed) + ")";
}

SparseMatrix generate(const GeneratorSpec& spec) {
  spec.validate();
  RngStream rng = RngStream(spec.seed).split(kMatrixStream);

  std::vector<Index> row_ptr(spec.m + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  if (spec.kind == GeneratorKind::Gaussian) {
    cols.reserve(spec.m * spec.n);
    vals.reserve(spec.m * spec.n);
    for (Index i = 0; i < spec.m; ++i) {
      for (Index j = 0; j < spec.n; ++j) {
        cols.push_back(j);
        vals.push_back(spec.sigma * rng.normal());
      }
      row_ptr[i + 1] = cols.size();
    }
  } else {
    const auto expected = static_cast<std::size_t>(spec.density * spec.m * spec.n);
    cols.reserve(expected + expected / 8);
    vals.reserve(expected + expected / 8);
    for (Index i = 0; i < spec.m; ++i) {
      for (Index j = 0; j < spec.n; ++j) {
        if (rng.uniform() < spec.density) {
          cols.push_back(j);
          vals.push_back(rng.normal());
        }
      }
      row_ptr[i + 1] = cols.size();
    }
  }
  return SparseMatrix(spec.m, spec.n, std::move(row_ptr), std::move(cols), std::move(vals));
}

LinearSystem make_consistent_system(const SparseMatrix& a, std::uint64_t seed,
                                    std::string label) {
  RngStream rng = RngStream(seed).split(kSolutionStream);
  Vector x_star(a.cols());
  for (double& v : x_star) v = rng.normal();
  auto sys = make_consistent_system(a, x_star, std::move(label));
  sys.set_rhs_source("generated");
  return sys;
}

LinearSystem make_consistent_system(const SparseMatrix& a, const Vector& x_star,
                                    std::string label) {
  if (x_star.size() != a.cols())
    throw ArgumentError("make_consistent_system: x_star has the wrong length");
  Vector b = a.matvec(x_star);
  LinearSystem sys(a, std::move(b), x_star, std::move(label));
  sys.set_rhs_source("generated");
  return sys;
}

}  // namespace rbskm
