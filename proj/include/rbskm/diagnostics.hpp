#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rbskm/linear_system.hpp"
#include "rbskm/op_count.hpp"
#include "rbskm/rng.hpp"
#include "rbskm/solver.hpp"
#include "rbskm/spectrum.hpp"

namespace rbskm {

// ---------------------------------------------------------------------------
// xi: ratio of subset residual energy to the delta-th largest selected entry
// ---------------------------------------------------------------------------

enum class XiMode { Exhaustive, MonteCarlo };
const char* to_string(XiMode m);

struct XiEstimate {
  double value = 0.0;
  std::uint64_t num_subsets = 0;
  XiMode mode = XiMode::Exhaustive;
  std::optional<double> std_error;  ///< Monte Carlo only (delta method)
};

/// Subsets are enumerated when C(m, beta) is at most this.
inline constexpr double kExhaustiveXiLimit = 1e5;

/// C(m, k) as a double (inf on overflow).
double binomial(std::uint64_t m, std::uint64_t k);

/// xi for a given residual vector r.
///
///   xi = sum_tau |r_tau|^2 / sum_tau (delta-th largest r_i^2, i in tau)
///
/// over all beta-subsets tau of [m] when C(m, beta) <= exhaustive_limit,
/// otherwise over `num_samples` uniform subsets. Monte Carlo draws come from
/// per-sample substreams of a key taken from `rng`, so the estimate does not
/// depend on evaluation order. Throws UndefinedXiError when the denominator
/// is zero and ArgumentError unless 1 <= delta <= beta <= m.
XiEstimate estimate_xi_from_residual(std::span<const double> r, Index beta, Index delta,
                                     std::size_t num_samples, RngStream& rng,
                                     double exhaustive_limit = kExhaustiveXiLimit);

/// xi at iterate x of `sys` (residual b - A x).
XiEstimate estimate_xi(const LinearSystem& sys, std::span<const double> x, Index beta,
                       Index delta, std::size_t num_samples, RngStream& rng,
                       double exhaustive_limit = kExhaustiveXiLimit);

// ---------------------------------------------------------------------------
// Contraction factor
// ---------------------------------------------------------------------------

/// 1 - (delta / xi) (beta / m) (lambda_min_plus / lambda_max_block)
double rate_factor(double delta, double xi, double beta, double m, double lambda_min_plus,
                   double lambda_max_block);

enum class BlockNormSource { Sampled, FullMatrixBound };
const char* to_string(BlockNormSource s);

struct RateBound {
  double rho = 1.0;              ///< with lambda_max_block
  double rho_guaranteed = 1.0;   ///< with lambda_max(A^T A) in place of the block value
  double lambda_min_plus = 0.0;
  double lambda_max_block = 0.0;
  double lambda_max_full = 0.0;
  BlockNormSource block_source = BlockNormSource::Sampled;
  XiEstimate xi;
  Index beta = 0;
  Index delta = 0;
  Index m = 0;
};

/// Expected one-step contraction bound at iterate x.
///
/// lambda_max(A_I^T A_I) is the largest value seen over `block_sample_count`
/// realizations of (tau, I_k) drawn at x; with zero samples the full-matrix
/// value lambda_max(A^T A), an upper bound on every block, is used instead.
/// Requires spectrum.lambda_min_plus.
RateBound rate_bound(const LinearSystem& sys, std::span<const double> x,
                     const SolverConfig& cfg, const SpectrumEstimate& spectrum,
                     std::size_t block_sample_count, RngStream& rng,
                     std::size_t xi_samples = 1000);

// ---------------------------------------------------------------------------
// Eigenvalue interlacing of principal submatrices
// ---------------------------------------------------------------------------

/// With eigenvalues in nonincreasing order and t = |principal_rows|, checks
///   lambda_{n-t+i}(S) <= lambda_i(S_t) <= lambda_i(S),  i = 1..t
/// to 1e-9 absolute. Throws ArgumentError if S is not symmetric to 1e-12 or
/// the rows are repeated or out of range.
bool interlacing_check(const Eigen::MatrixXd& s, std::span<const Index> principal_rows);

// ---------------------------------------------------------------------------
// Dense reference solution
// ---------------------------------------------------------------------------

/// A^+ b by a complete orthogonal decomposition. Throws CapabilityError when
/// min(m, n) exceeds `dense_threshold`.
Vector reference_solution(const LinearSystem& sys, std::size_t dense_threshold = 2000);

// ---------------------------------------------------------------------------
// xi versus beta on Gaussian data
// ---------------------------------------------------------------------------

struct XiTrendRow {
  Index beta = 0;
  XiEstimate xi;
  /// xi log(beta - delta) / (beta - delta)
  double log_scaled = 0.0;
  /// 1 - log(beta - delta) delta / (beta - delta) * beta / m * lambda_min_plus / lambda_max
  double gaussian_rate_overlay = 0.0;
};

/// xi at a fixed random x for each beta in the grid, with b = 0 so the
/// residual is A x. Grid entries must lie in (delta, m].
std::vector<XiTrendRow> xi_trend_study(const SparseMatrix& a, std::span<const Index> beta_grid,
                                       Index delta, std::size_t num_samples, RngStream& rng);

/// Same on a freshly generated m x n Gaussian matrix with entry std-dev sigma.
std::vector<XiTrendRow> xi_trend_study(Index n, Index m, double sigma,
                                       std::span<const Index> beta_grid, Index delta,
                                       std::size_t num_samples, RngStream& rng);

/// CSV with columns beta,xi,std_error,mode,log_scaled_xi,gaussian_rate_overlay.
/// Each metadata pair becomes a "# key: value" line ahead of the header.
void write_xi_trend_csv(std::ostream& out, std::span<const XiTrendRow> rows,
                        std::span<const std::pair<std::string, std::string>> metadata = {});

}  // namespace rbskm
