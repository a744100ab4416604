// rbskm: command-line front end for solves, benchmarks, sweeps and xi traces.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbskm/bench.hpp"
#include "rbskm/error.hpp"
#include "rbskm/matrix_market.hpp"
#include "rbskm/spectrum.hpp"
#include "rbskm/text.hpp"

namespace bench = rbskm::bench;

namespace {

struct Common {
  std::string matrix;
  std::string rhs;
  std::string generate;
  std::vector<std::string> methods;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double rr_tol = 1e-6;
  std::size_t max_iters = 200000;
  std::size_t refresh = 1000;
  double inner_tol = 1e-8;
  std::optional<std::size_t> inner_max;
  bool redraw = false;
  std::string out;
};

void add_source(CLI::App* cmd, Common& c) {
  auto* mx = cmd->add_option("--matrix", c.matrix, "Matrix Market file");
  cmd->add_option("--rhs", c.rhs, "right-hand side (Matrix Market vector)")->needs(mx);
  auto* gen = cmd->add_option("--generate", c.generate,
                              "kind=gaussian|sparse-random,m=..,n=..,density=..,sigma=..,seed=..");
  mx->excludes(gen);
}

void add_run(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--rr-tol", c.rr_tol, "stop when |r|^2/|b|^2 falls below this");
  cmd->add_option("--max-iters", c.max_iters, "iteration cap");
  cmd->add_option("--refresh", c.refresh, "recompute the residual every N steps (0: never)");
  cmd->add_option("--inner-tol", c.inner_tol, "CGLS relative tolerance");
  cmd->add_option("--inner-max", c.inner_max, "CGLS iteration cap");
  cmd->add_flag("--redraw-system", c.redraw, "redraw a generated system for every trial");
  cmd->add_option("--out", c.out, "output CSV path");
}

bench::SystemSource source_of(const Common& c) {
  bench::SystemSource s;
  if (!c.matrix.empty()) s.matrix_path = c.matrix;
  if (!c.rhs.empty()) s.rhs_path = c.rhs;
  if (!c.generate.empty()) s.generator = bench::parse_generator(c.generate);
  return s;
}

bench::BenchSpec spec_of(const Common& c) {
  bench::BenchSpec s;
  s.source = source_of(c);
  for (const auto& m : c.methods) s.methods.push_back(bench::MethodSpec::parse(m));
  s.trials = c.trials;
  s.master_seed = c.seed;
  s.rr_tolerance = c.rr_tol;
  s.max_iterations = c.max_iters;
  s.residual_refresh_period = c.refresh;
  s.inner.rel_tol = c.inner_tol;
  s.inner.max_inner_iter = c.inner_max;
  s.redraw_system = c.redraw;
  s.output_path = c.out;
  return s;
}

void print_summary(const std::vector<bench::MethodSummary>& rows) {
  for (const auto& s : rows) {
    std::cout << s.label << ": iterations " << rbskm::to_text(s.mean_iterations) << ", ops "
              << rbskm::to_text(s.mean_total_ops) << ", rr " << rbskm::to_text(s.mean_final_rr)
              << ", converged " << s.converged << '/' << s.trials;
    if (s.iteration_cap) std::cout << ", capped " << s.iteration_cap;
    if (s.stalled) std::cout << ", stalled " << s.stalled;
    std::cout << '\n';
  }
}

int report(int code, const std::string& message) {
  if (code != bench::kOk) std::cerr << "rbskm: " << message << '\n';
  return code;
}

int run_spectrum(const Common& c, std::size_t dense_threshold) {
  std::string msg;
  try {
    const auto src = source_of(c);
    if (src.matrix_path.has_value() == src.generator.has_value())
      throw rbskm::ArgumentError("give exactly one of --matrix or --generate");
    const rbskm::SparseMatrix a = src.matrix_path ? rbskm::load_matrix_market(*src.matrix_path)
                                                  : rbskm::generate(*src.generator);
    rbskm::SpectrumOptions opts;
    opts.seed = c.seed;
    opts.dense_threshold = dense_threshold;
    const auto est = rbskm::estimate_spectrum(a, opts);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!c.out.empty()) {
      file.open(c.out);
      if (!file) throw std::ios_base::failure("cannot write '" + c.out + "'");
      out = &file;
    }
    *out << "m: " << a.rows() << "\nn: " << a.cols() << "\nnnz: " << a.nnz()
         << "\nlambda_max: " << rbskm::to_text(est.lambda_max) << "\nlambda_min_plus: "
         << (est.lambda_min_plus ? rbskm::to_text(*est.lambda_min_plus) : std::string("n/a"))
         << "\nmethod: " << rbskm::to_string(est.method)
         << "\npower_iterations: " << est.iterations_used << '\n';
    if (est.lambda_min_plus)
      *out << "condition_number: " << rbskm::to_text(std::sqrt(est.lambda_max / *est.lambda_min_plus))
           << '\n';
    return bench::kOk;
  } catch (const rbskm::ParseError& e) {
    return report(bench::kIoError, std::string("parse error: ") + e.what());
  } catch (const std::ios_base::failure& e) {
    return report(bench::kIoError, e.what());
  } catch (const std::exception& e) {
    return report(bench::kInvalidSpec, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized block subsampling Kaczmarz-Motzkin solver and benchmarks"};
  app.set_config("--config", "", "read options from a key-value (INI/TOML) file");
  app.require_subcommand(1);

  Common c;

  auto* solve = app.add_subcommand("solve", "single solve, writes the RR trace");
  add_source(solve, c);
  add_run(solve, c);
  std::string solve_method = "RB-SKM";
  solve->add_option("--method", solve_method, "name[,beta=B,delta=D,rule=block|pif,alpha=A]");

  auto* bn = app.add_subcommand("bench", "compare methods over repeated trials");
  add_source(bn, c);
  add_run(bn, c);
  bn->add_option("--method", c.methods, "repeatable; name[,beta=B,delta=D,rule=..,alpha=..]")
      ->required();
  bn->add_option("--trials", c.trials, "trials per method");

  auto* sw = app.add_subcommand("sweep", "vary beta or delta of RB-SKM");
  add_source(sw, c);
  add_run(sw, c);
  sw->add_option("--trials", c.trials, "trials per grid value");
  std::string vary = "beta";
  std::vector<rbskm::Index> grid;
  rbskm::Index fixed = 0;
  sw->add_option("--vary", vary, "beta or delta")->check(CLI::IsMember({"beta", "delta"}));
  sw->add_option("--grid", grid, "grid values")->delimiter(',')->required();
  sw->add_option("--fixed", fixed, "value of the parameter held fixed")->required();

  auto* xi = app.add_subcommand("xi-trace", "xi versus beta at a random iterate");
  add_source(xi, c);
  std::vector<rbskm::Index> beta_grid;
  rbskm::Index xi_delta = 1;
  std::size_t samples = 1000;
  xi->add_option("--beta-grid", beta_grid, "beta values")->delimiter(',')->required();
  xi->add_option("--delta", xi_delta, "delta")->required();
  xi->add_option("--samples", samples, "Monte Carlo subsets per point");
  xi->add_option("--seed", c.seed, "seed");
  xi->add_option("--out", c.out, "output CSV path")->required();

  auto* sp = app.add_subcommand("spectrum", "extremal eigenvalues of A^T A");
  add_source(sp, c);
  sp->add_option("--seed", c.seed, "power iteration start seed");
  std::size_t dense_threshold = 2000;
  sp->add_option("--dense-threshold", dense_threshold, "largest min(m,n) for the dense path");
  sp->add_option("--out", c.out, "write key: value lines here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bench::kInvalidSpec;
  }

  if (*sp) return run_spectrum(c, dense_threshold);

  if (*xi) {
    bench::XiTraceSpec spec;
    std::string msg;
    try {
      spec.source = source_of(c);
    } catch (const std::exception& e) {
      return report(bench::kInvalidSpec, e.what());
    }
    spec.beta_grid = beta_grid;
    spec.delta = xi_delta;
    spec.samples = samples;
    spec.seed = c.seed;
    spec.output_path = c.out;
    const int code = bench::run_xi_trace(spec, &msg);
    return report(code, msg);
  }

  bench::BenchSpec spec;
  try {
    if (*solve) {
      c.methods = {solve_method};
      c.trials = 1;
    }
    spec = spec_of(c);
  } catch (const std::exception& e) {
    return report(bench::kInvalidSpec, e.what());
  }

  if (*sw) {
    bench::SweepSpec s;
    s.vary = vary == "beta" ? bench::SweepSpec::Vary::Beta : bench::SweepSpec::Vary::Delta;
    s.grid = grid;
    s.fixed_other = fixed;
    s.base = spec;
    const auto res = bench::run_sweep(s);
    for (const auto& r : res.rows)
      if (r.skipped) std::cerr << "rbskm: warning: skipped " << vary << '=' << r.value << ": " << r.reason << '\n';
    if (res.exit_code == bench::kOk) {
      std::vector<bench::MethodSummary> rows;
      for (const auto& r : res.rows)
        if (!r.skipped) rows.push_back(r.summary);
      print_summary(rows);
    }
    return report(res.exit_code, res.message);
  }

  const auto res = bench::run_bench(spec);
  if (res.exit_code == bench::kOk) print_summary(res.summaries);
  return report(res.exit_code, res.message);
}
