#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbskm/cgls.hpp"
#include "rbskm/generators.hpp"
#include "rbskm/linear_system.hpp"
#include "rbskm/solver.hpp"

namespace rbskm::bench {

/// Exit codes of every harness entry point.
enum ExitCode : int { kOk = 0, kIoError = 2, kInvalidSpec = 3 };

/// Where the system comes from: a Matrix Market file or a generator.
struct SystemSource {
  std::optional<std::filesystem::path> matrix_path;
  /// Right-hand side file; without one, b = A x_star with a seeded x_star.
  std::optional<std::filesystem::path> rhs_path;
  std::optional<GeneratorSpec> generator;
};

/// A method before it is bound to a system size.
struct MethodSpec {
  std::string name = "RB-SKM";  ///< preset name, "RB-SKM", or "full-scan-greedy"
  std::optional<Index> beta;
  std::optional<Index> delta;
  UpdateRule rule = UpdateRule::BlockProjection;
  double alpha = 1.0;

  /// "name[,beta=B,delta=D,rule=block|pif,alpha=A]"
  static MethodSpec parse(std::string_view text);
  std::string label() const;
};

/// "kind=gaussian|sparse-random,m=..,n=..,density=..,sigma=..,seed=.."
GeneratorSpec parse_generator(std::string_view text);

enum class Record { RrVsIteration, RrVsOps, RrVsTime };

struct BenchSpec {
  SystemSource source;
  std::vector<MethodSpec> methods;
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  double rr_tolerance = 1e-6;
  std::size_t max_iterations = 200000;
  std::size_t residual_refresh_period = 1000;
  InnerSolveConfig inner;
  /// Redraw a generated system (and seeded x_star) for every trial.
  bool redraw_system = false;
  std::vector<Record> record{Record::RrVsIteration, Record::RrVsOps, Record::RrVsTime};
  /// Trace CSV; the summary goes next to it (see summary_path). Empty: no files.
  std::filesystem::path output_path;
};

struct SweepSpec {
  enum class Vary { Beta, Delta };
  Vary vary = Vary::Beta;
  std::vector<Index> grid;
  Index fixed_other = 0;
  /// System, trials, seeds and tolerances; its method list is ignored.
  BenchSpec base;
};

struct MethodSummary {
  std::string label;
  SolverConfig config;
  std::size_t trials = 0;
  double mean_iterations = 0.0;
  double mean_total_ops = 0.0;
  double mean_wall_time = 0.0;
  double mean_final_rr = 0.0;
  std::size_t converged = 0;
  std::size_t iteration_cap = 0;
  std::size_t stalled = 0;
};

struct BenchResult {
  int exit_code = kOk;
  std::string message;
  std::vector<MethodSummary> summaries;
};

struct SweepRow {
  Index value = 0;
  bool skipped = false;
  std::string reason;
  MethodSummary summary;
};

struct SweepResult {
  int exit_code = kOk;
  std::string message;
  std::vector<SweepRow> rows;
};

/// "<stem>.summary.csv" beside the trace file.
std::filesystem::path summary_path(const std::filesystem::path& trace_path);

/// Seed for (master, stream, index) through the splittable generator.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Builds the system for trial `trial` (the trial only matters when redrawing).
LinearSystem load_system(const SystemSource& src, std::uint64_t master_seed, std::size_t trial,
                         bool redraw);

/// Binds a method to a system of m rows, applying the shared bench knobs.
SolverConfig bind_method(const MethodSpec& method, Index m, const BenchSpec& spec);

/// Every method, `trials` independent solves each. Trial t of every method
/// uses the solver seed derived from (master_seed, t), so adding trials
/// never changes earlier ones.
BenchResult run_bench(const BenchSpec& spec);

/// One RB-SKM summary per grid value; the CSV is written to
/// base.output_path. Grid values violating delta <= beta <= m are skipped
/// with a warning row; an empty effective grid gives kInvalidSpec.
SweepResult run_sweep(const SweepSpec& spec);

struct XiTraceSpec {
  SystemSource source;
  std::vector<Index> beta_grid;
  Index delta = 1;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::filesystem::path output_path;
};

/// xi versus beta at a random x with b = 0; CSV as write_xi_trend_csv.
int run_xi_trace(const XiTraceSpec& spec, std::string* message = nullptr);

}  // namespace rbskm::bench
