#include "rbskm/cgls.hpp"

#include <cmath>

#include "rbskm/error.hpp"

namespace rbskm {

void InnerSolveConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ArgumentError("inner solver: rel_tol must be positive");
  if (max_inner_iter && *max_inner_iter < 1)
    throw ArgumentError("inner solver: max_inner_iter must be at least 1");
}

InnerSolveResult cgls_min_norm(const RowBlock& block, std::span<const double> rhs,
                               const InnerSolveConfig& cfg) {
  cfg.validate();
  if (block.size() == 0) throw ArgumentError("cgls_min_norm: empty block");
  if (rhs.size() != block.size())
    throw ArgumentError("cgls_min_norm: rhs length does not match block rows");

  const std::size_t n = block.cols();
  InnerSolveResult out{Vector(n, 0.0), {}};
  if (block.is_zero()) {
    out.stats.degenerate = true;
    return out;
  }

  Vector& d = out.d;
  Vector r(rhs.begin(), rhs.end());  // rhs - B d
  Vector s = block.matvec_t(r);      // B^T r
  Vector p = s;
  Vector q(block.size());
  double gamma = norm2_sq(s);
  const double s0 = std::sqrt(gamma);
  if (s0 == 0.0) return out;  // rhs orthogonal to range(B): d = 0 is exact

  const std::size_t cap = cfg.resolved_cap(block.size(), n);
  double rel = 1.0;
  std::size_t it = 0;
  while (it < cap) {
    block.matvec(p, q);
    const double qq = norm2_sq(q);
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    for (std::size_t j = 0; j < n; ++j) d[j] += alpha * p[j];
    for (std::size_t l = 0; l < r.size(); ++l) r[l] -= alpha * q[l];
    block.matvec_t(r, s);
    ++it;
    const double gamma_next = norm2_sq(s);
    rel = std::sqrt(gamma_next) / s0;
    if (rel <= cfg.rel_tol) break;
    const double beta = gamma_next / gamma;
    gamma = gamma_next;
    for (std::size_t j = 0; j < n; ++j) p[j] = s[j] + beta * p[j];
  }
  out.stats.iterations = it;
  out.stats.final_relative_residual = rel;
  return out;
}

}  // namespace rbskm
