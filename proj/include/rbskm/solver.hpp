#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbskm/cgls.hpp"
#include "rbskm/linear_system.hpp"
#include "rbskm/rng.hpp"
#include "rbskm/sampling.hpp"

namespace rbskm {

enum class UpdateRule {
  BlockProjection,    ///< d = A_I^+ (b_I - A_I x) via CGLS
  PseudoinverseFree,  ///< averaged single-row projections, step alpha
};

/// Named special cases of the (beta, delta) family.
enum class Preset { RK, Motzkin, RBK, SKM, BSKM1 };

struct SolverConfig {
  std::string method = "RB-SKM";
  Index beta = 1;
  Index delta = 1;
  UpdateRule update_rule = UpdateRule::BlockProjection;
  /// Step size of the pseudoinverse-free rule; weights are uniform 1/delta.
  double pif_alpha = 1.0;
  double rr_tolerance = 1e-6;
  std::size_t max_iterations = 200000;
  /// Recompute r = b - A x every this many steps (0 disables).
  std::size_t residual_refresh_period = 1000;
  InnerSolveConfig inner;
  std::uint64_t seed = 0;
  /// Store tau and I_k in each StepRecord. Turn off for long benchmark runs.
  bool keep_index_sets = true;

  /// Checks 1 <= delta <= beta <= m and the scalar knobs.
  void validate(Index m) const;
};

/// Table of special cases:
///   RK (1, 1), Motzkin (m, 1), RBK (beta, beta), SKM (beta, 1), BSKM1 (m, delta).
/// Throws ArgumentError if a free parameter is missing or a supplied one
/// contradicts the preset.
SolverConfig preset(Preset name, std::optional<Index> beta, std::optional<Index> delta,
                    Index m);

/// "RK", "Motzkin", "RBK", "SKM", "BSKM1" (case-insensitive).
std::optional<Preset> parse_preset(std::string_view name);
const char* to_string(Preset p);
const char* to_string(UpdateRule r);

struct SolverState {
  Vector x;
  Vector r;  ///< maintained b - A x
  std::size_t k = 0;
  std::uint64_t ops = 0;
  RngStream rng;
  double r0_norm_sq = 0.0;  ///< |b - A x^0|^2, denominator of RR
};

/// x^0 = 0, r^0 = b, rng seeded from cfg.seed.
SolverState initial_state(const LinearSystem& sys, const SolverConfig& cfg);
/// State at an arbitrary x (r computed exactly). RR stays relative to x^0 = 0.
SolverState state_at(const LinearSystem& sys, const SolverConfig& cfg, Vector x);

struct StepRecord {
  std::size_t iteration = 0;  ///< k after the step
  IndexSet tau;               ///< empty unless keep_index_sets
  IndexSet chosen;            ///< I_k; empty unless keep_index_sets
  InnerSolveStats inner;
  Index nnz_block = 0;
  double rr_after = 0.0;
  std::uint64_t ops_this_step = 0;
  std::uint64_t cumulative_ops = 0;  ///< state ops after the step
  std::size_t resamples = 0;     ///< extra tau draws after an all-zero subresidual
  std::size_t skipped_rows = 0;  ///< zero-norm rows dropped by the pseudoinverse-free rule
  bool stalled = false;
  double elapsed_seconds = 0.0;  ///< filled by solve(); informational
};

/// One iteration with cfg.update_rule. Mutates `state`.
StepRecord step(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg);
/// One pseudoinverse-free iteration; requires that rule in cfg.
StepRecord pif_step(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg);

enum class RunStatus { Converged, IterationCap, Stalled };
const char* to_string(RunStatus s);

struct RunReport {
  RunStatus status = RunStatus::IterationCap;
  std::size_t iterations = 0;
  /// Every step when max_iterations <= 10^4, else every 10th plus the last.
  std::vector<StepRecord> trace;
  double final_rr = 0.0;
  std::uint64_t total_ops = 0;
  double wall_time = 0.0;
  SolverConfig config;
  std::string system_label;
  std::string rhs_source;
  Vector solution;
};

/// Iterates from x^0 = 0 until RR = |r|^2 / |b|^2 < rr_tolerance, the
/// iteration cap, or a stall. b = 0 returns converged at once.
RunReport solve(const LinearSystem& sys, const SolverConfig& cfg);

}  // namespace rbskm
