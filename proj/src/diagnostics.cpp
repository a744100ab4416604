#include "rbskm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rbskm/error.hpp"
#include "rbskm/generators.hpp"
#include "rbskm/sampling.hpp"
#include "rbskm/text.hpp"

namespace rbskm {

namespace {

void check_beta_delta(Index m, Index beta, Index delta, const char* who) {
  if (delta < 1 || delta > beta || beta > m)
    throw ArgumentError(std::string(who) + ": need 1 <= delta <= beta <= m (delta=" +
                        std::to_string(delta) + ", beta=" + std::to_string(beta) +
                        ", m=" + std::to_string(m) + ")");
}

Vector residual(const LinearSystem& sys, std::span<const double> x) {
  if (x.size() != sys.cols()) throw ArgumentError("residual: x has the wrong length");
  Vector r = sys.a().matvec(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sys.b()[i] - r[i];
  return r;
}

XiEstimate xi_exhaustive(std::span<const double> sq, Index beta, Index delta,
                         std::uint64_t count) {
  const Index m = sq.size();
  std::vector<Index> comb(beta);
  std::iota(comb.begin(), comb.end(), Index{0});
  std::vector<double> sub(beta);
  double num = 0.0, den = 0.0;
  for (;;) {
    double energy = 0.0;
    for (Index l = 0; l < beta; ++l) {
      sub[l] = sq[comb[l]];
      energy += sub[l];
    }
    num += energy;
    den += kth_largest(sub, delta);

    // next combination in lexicographic order
    Index pos = beta;
    while (pos > 0 && comb[pos - 1] == m - beta + (pos - 1)) --pos;
    if (pos == 0) break;
    ++comb[pos - 1];
    for (Index l = pos; l < beta; ++l) comb[l] = comb[l - 1] + 1;
  }
  if (den == 0.0) throw UndefinedXiError("xi: residual vanishes on every selected index");
  XiEstimate est{num / den, count, XiMode::Exhaustive, std::nullopt};
  // each subset contributes energy >= delta * (delta-th largest)
  if (est.value < static_cast<double>(delta) * (1.0 - 1e-12))
    throw std::logic_error("xi: exhaustive value fell below delta");
  return est;
}

XiEstimate xi_monte_carlo(std::span<const double> sq, Index beta, Index delta,
                          std::size_t num_samples, RngStream& rng) {
  if (num_samples < 2) throw ArgumentError("xi: Monte Carlo needs at least 2 samples");
  const Index m = sq.size();
  const RngStream base(rng.next_u64());
  std::vector<double> nums(num_samples), dens(num_samples), sub(beta);
  for (std::size_t s = 0; s < num_samples; ++s) {
    RngStream sub_rng = base.split(s);
    const IndexSet tau = sample_uniform_subset(m, beta, sub_rng);
    double energy = 0.0;
    for (Index l = 0; l < beta; ++l) {
      sub[l] = sq[tau[l]];
      energy += sub[l];
    }
    nums[s] = energy;
    dens[s] = kth_largest(sub, delta);
  }
  const double ns = static_cast<double>(num_samples);
  const double mean_n = std::accumulate(nums.begin(), nums.end(), 0.0) / ns;
  const double mean_d = std::accumulate(dens.begin(), dens.end(), 0.0) / ns;
  if (mean_d == 0.0) throw UndefinedXiError("xi: residual vanishes on every sampled subset");
  const double ratio = mean_n / mean_d;

  double snn = 0.0, sdd = 0.0, snd = 0.0;
  for (std::size_t s = 0; s < num_samples; ++s) {
    const double a = nums[s] - mean_n, b = dens[s] - mean_d;
    snn += a * a;
    sdd += b * b;
    snd += a * b;
  }
  snn /= ns - 1.0;
  sdd /= ns - 1.0;
  snd /= ns - 1.0;
  const double var = (snn - 2.0 * ratio * snd + ratio * ratio * sdd) / (mean_d * mean_d * ns);
  return {ratio, num_samples, XiMode::MonteCarlo, std::sqrt(std::max(var, 0.0))};
}

double block_lambda_max(const RowBlock& block) {
  const Eigen::MatrixXd d = block.to_dense();
  const Eigen::MatrixXd gram = d * d.transpose();  // delta x delta, same spectrum as A_I^T A_I
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(eig.eigenvalues().size() - 1);
}

}  // namespace

const char* to_string(XiMode m) {
  return m == XiMode::Exhaustive ? "exhaustive" : "monte-carlo";
}

const char* to_string(BlockNormSource s) {
  return s == BlockNormSource::Sampled ? "sampled" : "full-matrix-bound";
}

double binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0.0;
  k = std::min(k, m - k);
  double c = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(m - k + i) / static_cast<double>(i);
    if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
  }
  return c;
}

XiEstimate estimate_xi_from_residual(std::span<const double> r, Index beta, Index delta,
                                     std::size_t num_samples, RngStream& rng,
                                     double exhaustive_limit) {
  check_beta_delta(r.size(), beta, delta, "estimate_xi");
  Vector sq(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) sq[i] = r[i] * r[i];

  const double count = binomial(r.size(), beta);
  if (count <= exhaustive_limit)
    return xi_exhaustive(sq, beta, delta, static_cast<std::uint64_t>(std::llround(count)));
  return xi_monte_carlo(sq, beta, delta, num_samples, rng);
}

XiEstimate estimate_xi(const LinearSystem& sys, std::span<const double> x, Index beta,
                       Index delta, std::size_t num_samples, RngStream& rng,
                       double exhaustive_limit) {
  const Vector r = residual(sys, x);
  return estimate_xi_from_residual(r, beta, delta, num_samples, rng, exhaustive_limit);
}

double rate_factor(double delta, double xi, double beta, double m, double lambda_min_plus,
                   double lambda_max_block) {
  return 1.0 - (delta / xi) * (beta / m) * (lambda_min_plus / lambda_max_block);
}

RateBound rate_bound(const LinearSystem& sys, std::span<const double> x,
                     const SolverConfig& cfg, const SpectrumEstimate& spectrum,
                     std::size_t block_sample_count, RngStream& rng, std::size_t xi_samples) {
  const Index m = sys.rows();
  check_beta_delta(m, cfg.beta, cfg.delta, "rate_bound");
  if (!spectrum.lambda_min_plus)
    throw ArgumentError("rate_bound: spectrum estimate lacks lambda_min_plus");

  RateBound rb;
  rb.beta = cfg.beta;
  rb.delta = cfg.delta;
  rb.m = m;
  rb.lambda_min_plus = *spectrum.lambda_min_plus;
  rb.lambda_max_full = spectrum.lambda_max;

  const Vector r = residual(sys, x);
  rb.xi = estimate_xi_from_residual(r, cfg.beta, cfg.delta, xi_samples, rng);

  if (block_sample_count == 0) {
    rb.block_source = BlockNormSource::FullMatrixBound;
    rb.lambda_max_block = rb.lambda_max_full;
  } else {
    rb.block_source = BlockNormSource::Sampled;
    std::vector<double> sub(cfg.beta);
    for (std::size_t s = 0; s < block_sample_count; ++s) {
      const IndexSet tau = sample_uniform_subset(m, cfg.beta, rng);
      for (std::size_t l = 0; l < tau.size(); ++l) sub[l] = std::abs(r[tau[l]]);
      const IndexSet chosen = top_delta(sub, tau, cfg.delta);
      const RowBlock block = row_gather(sys.a(), chosen.vec());
      rb.lambda_max_block = std::max(rb.lambda_max_block, block_lambda_max(block));
    }
  }

  const auto d = static_cast<double>(cfg.delta);
  const auto b = static_cast<double>(cfg.beta);
  const auto mm = static_cast<double>(m);
  rb.rho = rate_factor(d, rb.xi.value, b, mm, rb.lambda_min_plus, rb.lambda_max_block);
  rb.rho_guaranteed = rate_factor(d, rb.xi.value, b, mm, rb.lambda_min_plus, rb.lambda_max_full);
  return rb;
}

bool interlacing_check(const Eigen::MatrixXd& s, std::span<const Index> principal_rows) {
  if (s.rows() != s.cols()) throw ArgumentError("interlacing_check: matrix is not square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ArgumentError("interlacing_check: matrix is not symmetric");
  const auto n = static_cast<Index>(s.rows());
  std::vector<char> seen(n, 0);
  for (Index i : principal_rows) {
    if (i >= n) throw ArgumentError("interlacing_check: row out of range");
    if (seen[i]++) throw ArgumentError("interlacing_check: repeated row");
  }
  const Index t = principal_rows.size();
  if (t == 0) return true;

  Eigen::MatrixXd sub(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t));
  for (Index a = 0; a < t; ++a)
    for (Index b = 0; b < t; ++b)
      sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          s(static_cast<Eigen::Index>(principal_rows[a]),
            static_cast<Eigen::Index>(principal_rows[b]));

  // Eigen returns ascending order; index from the top for nonincreasing order
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(s, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> part(sub, Eigen::EigenvaluesOnly);
  auto desc = [](const Eigen::VectorXd& ev, Index i) {  // 1-based, nonincreasing
    return ev(ev.size() - static_cast<Eigen::Index>(i));
  };
  constexpr double kTol = 1e-9;
  for (Index i = 1; i <= t; ++i) {
    const double li = desc(part.eigenvalues(), i);
    if (li > desc(full.eigenvalues(), i) + kTol) return false;
    if (li < desc(full.eigenvalues(), n - t + i) - kTol) return false;
  }
  return true;
}

Vector reference_solution(const LinearSystem& sys, std::size_t dense_threshold) {
  if (std::min(sys.rows(), sys.cols()) > dense_threshold)
    throw CapabilityError("reference_solution: min(m, n) = " +
                          std::to_string(std::min(sys.rows(), sys.cols())) +
                          " exceeds the dense limit " + std::to_string(dense_threshold));
  const Eigen::MatrixXd a = sys.a().to_dense();
  const Eigen::Map<const Eigen::VectorXd> b(sys.b().data(),
                                            static_cast<Eigen::Index>(sys.b().size()));
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd x = cod.solve(b);
  return Vector(x.data(), x.data() + x.size());
}

std::vector<XiTrendRow> xi_trend_study(const SparseMatrix& a, std::span<const Index> beta_grid,
                                       Index delta, std::size_t num_samples, RngStream& rng) {
  const Index m = a.rows();
  for (Index beta : beta_grid)
    if (beta <= delta || beta > m)
      throw ArgumentError("xi_trend_study: grid value " + std::to_string(beta) +
                          " outside (delta, m]");

  Vector x(a.cols());
  for (double& v : x) v = rng.normal();
  const Vector r = a.matvec(x);  // b = 0

  const SpectrumEstimate spec = estimate_spectrum(a, {.seed = rng.next_u64()});
  const double lambda_ratio = spec.lambda_min_plus ? *spec.lambda_min_plus / spec.lambda_max : 0.0;

  std::vector<XiTrendRow> rows;
  rows.reserve(beta_grid.size());
  for (Index beta : beta_grid) {
    XiTrendRow row;
    row.beta = beta;
    row.xi = estimate_xi_from_residual(r, beta, delta, num_samples, rng);
    const auto gap = static_cast<double>(beta - delta);
    const double lg = std::log(gap);
    row.log_scaled = row.xi.value * lg / gap;
    row.gaussian_rate_overlay = 1.0 - lg * static_cast<double>(delta) / gap *
                                          static_cast<double>(beta) / static_cast<double>(m) *
                                          lambda_ratio;
    rows.push_back(row);
  }
  return rows;
}

std::vector<XiTrendRow> xi_trend_study(Index n, Index m, double sigma,
                                       std::span<const Index> beta_grid, Index delta,
                                       std::size_t num_samples, RngStream& rng) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Gaussian;
  spec.m = m;
  spec.n = n;
  spec.sigma = sigma;
  spec.seed = rng.next_u64();
  const SparseMatrix a = generate(spec);
  return xi_trend_study(a, beta_grid, delta, num_samples, rng);
}

void write_xi_trend_csv(std::ostream& out, std::span<const XiTrendRow> rows,
                        std::span<const std::pair<std::string, std::string>> metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  out << "beta,xi,std_error,mode,log_scaled_xi,gaussian_rate_overlay\n";
  for (const auto& row : rows) {
    out << row.beta << ',' << to_text(row.xi.value) << ','
        << (row.xi.std_error ? to_text(*row.xi.std_error) : std::string()) << ','
        << to_string(row.xi.mode) << ',' << to_text(row.log_scaled) << ','
        << to_text(row.gaussian_rate_overlay) << '\n';
  }
}

}  // namespace rbskm
