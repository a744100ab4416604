#include "rbskm/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

#include "rbskm/error.hpp"
#include "rbskm/op_count.hpp"

namespace rbskm {

namespace {

constexpr std::size_t kFullTraceLimit = 10000;
constexpr std::size_t kThinning = 10;

struct Selection {
  IndexSet tau;
  IndexSet chosen;
  std::size_t resamples = 0;
  bool stalled = false;
};

// Draw tau, and pick I_k from |r_tau|. An all-zero subresidual is redrawn up
// to m / beta times before giving up.
Selection select_rows(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg) {
  const Index m = sys.rows();
  const std::size_t redraws = cfg.beta == m ? 0 : m / cfg.beta;
  Selection sel;
  std::vector<double> sub;
  for (std::size_t attempt = 0;; ++attempt) {
    sel.tau = sample_uniform_subset(m, cfg.beta, state.rng);
    sub.resize(sel.tau.size());
    bool any = false;
    for (std::size_t l = 0; l < sel.tau.size(); ++l) {
      sub[l] = std::abs(state.r[sel.tau[l]]);
      any = any || sub[l] != 0.0;
    }
    if (any) break;
    if (attempt == redraws) {
      sel.stalled = true;
      return sel;
    }
    ++sel.resamples;
  }
  sel.chosen = top_delta(sub, sel.tau, cfg.delta);
  return sel;
}

void refresh_residual(const LinearSystem& sys, SolverState& state) {
  sys.a().matvec(state.x, state.r);
  for (std::size_t i = 0; i < state.r.size(); ++i) state.r[i] = sys.b()[i] - state.r[i];
}

// x += d, r -= A d, then bookkeeping shared by both update rules.
void apply_update(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg,
                  const Vector& d, StepRecord& rec) {
  Vector ad(sys.rows());
  sys.a().matvec(d, ad);
  for (std::size_t j = 0; j < d.size(); ++j) state.x[j] += d[j];
  for (std::size_t i = 0; i < ad.size(); ++i) state.r[i] -= ad[i];
  ++state.k;
  if (cfg.residual_refresh_period > 0 && state.k % cfg.residual_refresh_period == 0)
    refresh_residual(sys, state);

  rec.iteration = state.k;
  rec.rr_after = state.r0_norm_sq > 0.0 ? norm2_sq(state.r) / state.r0_norm_sq : 0.0;
  rec.ops_this_step = op_count({.m = sys.rows(),
                                .n = sys.cols(),
                                .beta = cfg.beta,
                                .delta = cfg.delta,
                                .nnz_block = rec.nnz_block,
                                .it1 = rec.inner.iterations},
                               OpCountMethod::RbSkm);
  state.ops += rec.ops_this_step;
}

StepRecord stalled_record(const SolverState& state, Selection& sel, const SolverConfig& cfg) {
  StepRecord rec;
  rec.iteration = state.k;
  rec.stalled = true;
  rec.resamples = sel.resamples;
  rec.rr_after = state.r0_norm_sq > 0.0 ? norm2_sq(state.r) / state.r0_norm_sq : 0.0;
  if (cfg.keep_index_sets) rec.tau = std::move(sel.tau);
  return rec;
}

StepRecord block_projection_step(const LinearSystem& sys, SolverState& state,
                                 const SolverConfig& cfg) {
  Selection sel = select_rows(sys, state, cfg);
  if (sel.stalled) return stalled_record(state, sel, cfg);

  const RowBlock block = row_gather(sys.a(), sel.chosen.vec());
  Vector rhs = block.matvec(state.x);
  for (std::size_t l = 0; l < rhs.size(); ++l) rhs[l] = sys.b()[block.rows()[l]] - rhs[l];
  auto [d, stats] = cgls_min_norm(block, rhs, cfg.inner);

  StepRecord rec;
  rec.inner = stats;
  rec.nnz_block = block.nnz();
  rec.resamples = sel.resamples;
  apply_update(sys, state, cfg, d, rec);
  if (cfg.keep_index_sets) {
    rec.tau = std::move(sel.tau);
    rec.chosen = std::move(sel.chosen);
  }
  return rec;
}

}  // namespace

// ---------------------------------------------------------------------------

void SolverConfig::validate(Index m) const {
  if (delta < 1 || delta > beta || beta > m)
    throw ArgumentError("solver config: need 1 <= delta <= beta <= m (delta=" +
                        std::to_string(delta) + ", beta=" + std::to_string(beta) +
                        ", m=" + std::to_string(m) + ")");
  if (!(rr_tolerance > 0.0)) throw ArgumentError("solver config: rr_tolerance must be positive");
  if (update_rule == UpdateRule::PseudoinverseFree && !(pif_alpha >= 0.0))
    throw ArgumentError("solver config: pseudoinverse-free step size must be nonnegative");
  inner.validate();
}

SolverConfig preset(Preset name, std::optional<Index> beta, std::optional<Index> delta,
                    Index m) {
  auto require = [&](const std::optional<Index>& v, const char* what) {
    if (!v)
      throw ArgumentError(std::string("preset ") + to_string(name) + " needs " + what);
    return *v;
  };
  auto fixed = [&](const std::optional<Index>& v, Index value, const char* what) {
    if (v && *v != value)
      throw ArgumentError(std::string("preset ") + to_string(name) + " fixes " + what +
                          " = " + std::to_string(value));
    return value;
  };

  SolverConfig cfg;
  cfg.method = to_string(name);
  switch (name) {
    case Preset::RK:
      cfg.beta = fixed(beta, 1, "beta");
      cfg.delta = fixed(delta, 1, "delta");
      break;
    case Preset::Motzkin:
      cfg.beta = fixed(beta, m, "beta");
      cfg.delta = fixed(delta, 1, "delta");
      break;
    case Preset::RBK:
      cfg.beta = require(beta, "beta");
      cfg.delta = fixed(delta, cfg.beta, "delta");
      break;
    case Preset::SKM:
      cfg.beta = require(beta, "beta");
      cfg.delta = fixed(delta, 1, "delta");
      break;
    case Preset::BSKM1:
      cfg.beta = fixed(beta, m, "beta");
      cfg.delta = require(delta, "delta");
      break;
  }
  cfg.validate(m);
  return cfg;
}

std::optional<Preset> parse_preset(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "rk") return Preset::RK;
  if (s == "motzkin") return Preset::Motzkin;
  if (s == "rbk") return Preset::RBK;
  if (s == "skm") return Preset::SKM;
  if (s == "bskm1") return Preset::BSKM1;
  return std::nullopt;
}

const char* to_string(Preset p) {
  switch (p) {
    case Preset::RK: return "RK";
    case Preset::Motzkin: return "Motzkin";
    case Preset::RBK: return "RBK";
    case Preset::SKM: return "SKM";
    case Preset::BSKM1: return "BSKM1";
  }
  return "?";
}

const char* to_string(UpdateRule r) {
  return r == UpdateRule::BlockProjection ? "block-projection" : "pseudoinverse-free";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationCap: return "iteration-cap";
    case RunStatus::Stalled: return "stalled";
  }
  return "?";
}

SolverState initial_state(const LinearSystem& sys, const SolverConfig& cfg) {
  return state_at(sys, cfg, Vector(sys.cols(), 0.0));
}

SolverState state_at(const LinearSystem& sys, const SolverConfig& cfg, Vector x) {
  if (x.size() != sys.cols()) throw ArgumentError("state_at: x has the wrong length");
  SolverState s;
  s.x = std::move(x);
  s.r.resize(sys.rows());
  refresh_residual(sys, s);
  s.rng = RngStream(cfg.seed);
  s.r0_norm_sq = norm2_sq(sys.b());
  return s;
}

StepRecord step(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg) {
  if (state.x.size() != sys.cols() || state.r.size() != sys.rows())
    throw ArgumentError("step: state does not match the system");
  cfg.validate(sys.rows());
  if (cfg.update_rule == UpdateRule::PseudoinverseFree) return pif_step(sys, state, cfg);
  return block_projection_step(sys, state, cfg);
}

StepRecord pif_step(const LinearSystem& sys, SolverState& state, const SolverConfig& cfg) {
  if (cfg.update_rule != UpdateRule::PseudoinverseFree)
    throw ArgumentError("pif_step: config does not select the pseudoinverse-free rule");
  if (state.x.size() != sys.cols() || state.r.size() != sys.rows())
    throw ArgumentError("pif_step: state does not match the system");
  cfg.validate(sys.rows());

  Selection sel = select_rows(sys, state, cfg);
  if (sel.stalled) return stalled_record(state, sel, cfg);

  const SparseMatrix& a = sys.a();
  const double weight = cfg.pif_alpha / static_cast<double>(cfg.delta);
  StepRecord rec;
  rec.resamples = sel.resamples;
  Vector d(sys.cols(), 0.0);
  for (Index i : sel.chosen) {
    rec.nnz_block += a.row_nnz(i);
    const double norm_sq = a.row_norm_sq(i);
    if (norm_sq == 0.0) {
      ++rec.skipped_rows;
      continue;
    }
    const auto row = a.row(i);
    row.axpy(weight * (sys.b()[i] - row.dot(state.x)) / norm_sq, d);
  }
  apply_update(sys, state, cfg, d, rec);
  if (cfg.keep_index_sets) {
    rec.tau = std::move(sel.tau);
    rec.chosen = std::move(sel.chosen);
  }
  return rec;
}

RunReport solve(const LinearSystem& sys, const SolverConfig& cfg) {
  cfg.validate(sys.rows());
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  RunReport rep;
  rep.config = cfg;
  rep.system_label = sys.label();
  rep.rhs_source = sys.rhs_source();

  SolverState state = initial_state(sys, cfg);
  if (state.r0_norm_sq == 0.0) {
    rep.status = RunStatus::Converged;
    rep.solution = std::move(state.x);
    return rep;
  }

  const bool full_trace = cfg.max_iterations <= kFullTraceLimit;
  double rr = 1.0;
  rep.status = RunStatus::IterationCap;
  bool last_kept = true;
  StepRecord last;
  while (rr >= cfg.rr_tolerance && state.k < cfg.max_iterations) {
    StepRecord rec = step(sys, state, cfg);
    rec.elapsed_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    rec.cumulative_ops = state.ops;
    rr = rec.rr_after;
    const bool stalled = rec.stalled;
    if (full_trace || rec.iteration % kThinning == 0) {
      rep.trace.push_back(std::move(rec));
      last_kept = true;
    } else {
      last = std::move(rec);
      last_kept = false;
    }
    if (stalled) {
      rep.status = RunStatus::Stalled;
      break;
    }
  }
  if (!last_kept) rep.trace.push_back(std::move(last));
  if (rr < cfg.rr_tolerance) rep.status = RunStatus::Converged;

  rep.iterations = state.k;
  rep.final_rr = rr;
  rep.total_ops = state.ops;
  rep.solution = std::move(state.x);
  rep.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
  return rep;
}

}  // namespace rbskm
