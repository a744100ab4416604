#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rbskm/bench.hpp"
#include "rbskm/error.hpp"
#include "rbskm/matrix_market.hpp"

using namespace rbskm;
using namespace rbskm::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rbskm_test_bench_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the columns whose header names contain "elapsed" or "wall".
std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::vector<bool> keep;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      out << line << '\n';
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (keep.empty())
      for (const auto& c : cells) keep.push_back(c.find("elapsed") == std::string::npos && c.find("wall") == std::string::npos);
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (k >= keep.size() || keep[k]) out << cells[k] << ',';
    out << '\n';
  }
  return out.str();
}

BenchSpec small_spec() {
  BenchSpec s;
  s.source.generator = parse_generator("kind=gaussian,m=120,n=20,seed=3");
  s.methods = {MethodSpec::parse("RB-SKM,beta=20,delta=4"), MethodSpec::parse("full-scan-greedy,delta=4")};
  s.trials = 3;
  s.master_seed = 42;
  return s;
}

}  // namespace

TEST(MethodSpec, Parse) {
  const auto m = MethodSpec::parse("RB-SKM,beta=30,delta=5,rule=pif,alpha=0.5");
  EXPECT_EQ(m.name, "RB-SKM");
  EXPECT_EQ(m.beta, 30u);
  EXPECT_EQ(m.delta, 5u);
  EXPECT_EQ(m.rule, UpdateRule::PseudoinverseFree);
  EXPECT_EQ(m.alpha, 0.5);
  EXPECT_EQ(MethodSpec::parse("RK").label(), "RK");
  EXPECT_THROW(MethodSpec::parse("RB-SKM,gamma=1"), ArgumentError);
  EXPECT_THROW(MethodSpec::parse("RB-SKM,beta=x"), ArgumentError);
  EXPECT_THROW(MethodSpec::parse("beta=3"), ArgumentError);
}

TEST(Generator, Parse) {
  const auto g = parse_generator("kind=sparse-random,m=50,n=10,density=0.3,seed=9");
  EXPECT_EQ(g.kind, GeneratorKind::SparseRandom);
  EXPECT_EQ(g.m, 50u);
  EXPECT_EQ(g.density, 0.3);
  EXPECT_EQ(g.seed, 9u);
  EXPECT_THROW(parse_generator("kind=gaussian,m=5"), ArgumentError);
  EXPECT_THROW(parse_generator("kind=gaussian,m=5,n=6"), ArgumentError);
}

TEST(BindMethod, PresetsAndNames) {
  BenchSpec spec;
  EXPECT_EQ(bind_method(MethodSpec::parse("Motzkin"), 40, spec).beta, 40u);
  const auto g = bind_method(MethodSpec::parse("full-scan-greedy,delta=3"), 40, spec);
  EXPECT_EQ(g.beta, 40u);
  EXPECT_EQ(g.delta, 3u);
  EXPECT_THROW(bind_method(MethodSpec::parse("RB-SKM,beta=3"), 40, spec), ArgumentError);
  EXPECT_THROW(bind_method(MethodSpec::parse("mystery"), 40, spec), ArgumentError);
  EXPECT_THROW(bind_method(MethodSpec::parse("RB-SKM,beta=50,delta=3"), 40, spec), ArgumentError);
}

TEST(RunBench, IdentityOneIteration) {
  const auto mtx = scratch("id5.mtx");
  {
    std::ofstream out(mtx);
    write_matrix_market(out, SparseMatrix::identity(5));
  }
  BenchSpec s;
  s.source.matrix_path = mtx;
  s.methods = {MethodSpec::parse("RB-SKM,beta=5,delta=5")};
  s.trials = 1;
  const auto res = run_bench(s);
  ASSERT_EQ(res.exit_code, kOk) << res.message;
  ASSERT_EQ(res.summaries.size(), 1u);
  EXPECT_EQ(res.summaries[0].mean_iterations, 1.0);
  EXPECT_EQ(res.summaries[0].converged, 1u);
}

TEST(RunBench, ExitCodes) {
  BenchSpec s = small_spec();
  s.source = {};
  s.source.matrix_path = "/nonexistent/matrix.mtx";
  EXPECT_EQ(run_bench(s).exit_code, kIoError);

  const auto bad = scratch("bad.mtx");
  std::ofstream(bad) << "not a matrix\n";
  s.source.matrix_path = bad;
  EXPECT_EQ(run_bench(s).exit_code, kIoError);

  BenchSpec t = small_spec();
  t.methods.clear();
  EXPECT_EQ(run_bench(t).exit_code, kInvalidSpec);
  t = small_spec();
  t.trials = 0;
  EXPECT_EQ(run_bench(t).exit_code, kInvalidSpec);
  t = small_spec();
  t.methods = {MethodSpec::parse("RB-SKM,beta=500,delta=4")};
  EXPECT_EQ(run_bench(t).exit_code, kInvalidSpec);
}

TEST(RunBench, CapIsNotAnError) {
  BenchSpec s = small_spec();
  s.max_iterations = 3;
  const auto res = run_bench(s);
  EXPECT_EQ(res.exit_code, kOk);
  EXPECT_EQ(res.summaries[0].iteration_cap, 3u);
}

TEST(RunBench, CsvShapeAndDeterminism) {
  BenchSpec s = small_spec();
  s.output_path = scratch("a/trace.csv");
  ASSERT_EQ(run_bench(s).exit_code, kOk);
  const auto trace1 = slurp(s.output_path), sum1 = slurp(summary_path(s.output_path));
  s.output_path = scratch("b/trace.csv");
  ASSERT_EQ(run_bench(s).exit_code, kOk);
  const auto trace2 = slurp(s.output_path), sum2 = slurp(summary_path(s.output_path));
  EXPECT_EQ(strip_timing(trace1), strip_timing(trace2));
  EXPECT_EQ(strip_timing(sum1), strip_timing(sum2));
  EXPECT_NE(trace1.find("method,trial,iteration,rr,cumulative_ops,elapsed_seconds\n"), std::string::npos);
  EXPECT_NE(trace1.find("# master_seed: 42"), std::string::npos);
  EXPECT_NE(sum1.find("mean_iterations,mean_total_ops,mean_wall_time"), std::string::npos);
}

TEST(RunBench, AddingTrialsKeepsEarlierOnes) {
  BenchSpec s = small_spec();
  s.methods.resize(1);
  s.trials = 2;
  s.output_path = scratch("t2.csv");
  run_bench(s);
  s.trials = 4;
  s.output_path = scratch("t4.csv");
  run_bench(s);
  auto rows = [](const std::string& csv, int max_trial) {
    std::istringstream in(strip_timing(csv));
    std::string line, out;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("method", 0) == 0) continue;
      const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
      if (std::stoi(line.substr(c1 + 1, c2 - c1 - 1)) < max_trial) out += line + '\n';
    }
    return out;
  };
  const auto a = rows(slurp(scratch("t2.csv")), 2), b = rows(slurp(scratch("t4.csv")), 2);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(RunBench, RedrawSystem) {
  BenchSpec s = small_spec();
  s.methods.resize(1);
  s.redraw_system = true;
  const auto a = load_system(s.source, s.master_seed, 0, true);
  const auto b = load_system(s.source, s.master_seed, 1, true);
  EXPECT_NE(a.a(), b.a());
  const auto c = load_system(s.source, s.master_seed, 1, false);
  EXPECT_EQ(a.a(), c.a());
  EXPECT_EQ(a.b(), c.b());
  EXPECT_EQ(run_bench(s).exit_code, kOk);
}

TEST(RunSweep, SinglePointAtFullScan) {
  SweepSpec sw;
  sw.base = small_spec();
  sw.base.trials = 2;
  sw.grid = {120};
  sw.fixed_other = 4;
  const auto res = run_sweep(sw);
  ASSERT_EQ(res.exit_code, kOk) << res.message;
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].summary.config.beta, 120u);

  BenchSpec g = small_spec();
  g.trials = 2;
  g.methods = {MethodSpec::parse("full-scan-greedy,delta=4")};
  const auto ref = run_bench(g);
  EXPECT_EQ(ref.summaries[0].mean_total_ops, res.rows[0].summary.mean_total_ops);
}

TEST(RunSweep, SkipsInvalidAndFailsWhenEmpty) {
  SweepSpec sw;
  sw.base = small_spec();
  sw.base.trials = 1;
  sw.grid = {2, 10, 500};
  sw.fixed_other = 4;
  sw.base.output_path = scratch("sweep.csv");
  const auto res = run_sweep(sw);
  ASSERT_EQ(res.exit_code, kOk);
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_TRUE(res.rows[0].skipped);
  EXPECT_FALSE(res.rows[1].skipped);
  EXPECT_TRUE(res.rows[2].skipped);
  const auto csv = slurp(sw.base.output_path);
  EXPECT_NE(csv.find("2,2,4,skipped"), std::string::npos);

  sw.grid = {500};
  EXPECT_EQ(run_sweep(sw).exit_code, kInvalidSpec);
  sw.grid.clear();
  EXPECT_EQ(run_sweep(sw).exit_code, kInvalidSpec);
}

TEST(RunSweep, VaryDelta) {
  SweepSpec sw;
  sw.base = small_spec();
  sw.base.trials = 1;
  sw.vary = SweepSpec::Vary::Delta;
  sw.grid = {1, 5, 30};
  sw.fixed_other = 20;
  const auto res = run_sweep(sw);
  ASSERT_EQ(res.exit_code, kOk);
  EXPECT_EQ(res.rows[1].summary.config.delta, 5u);
  EXPECT_TRUE(res.rows[2].skipped);
}

TEST(RunXiTrace, SinglePoint) {
  XiTraceSpec x;
  x.source.generator = parse_generator("kind=gaussian,m=100,n=10,seed=2");
  x.beta_grid = {12};
  x.delta = 5;
  x.samples = 100;
  x.output_path = scratch("xi.csv");
  ASSERT_EQ(run_xi_trace(x), kOk);
  std::istringstream in(slurp(x.output_path));
  std::string line;
  int data = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line.rfind("beta", 0) != 0) ++data;
  EXPECT_EQ(data, 1);
  const auto first = slurp(x.output_path);
  ASSERT_EQ(run_xi_trace(x), kOk);
  EXPECT_EQ(slurp(x.output_path), first);
}

#ifdef RBSKM_CLI_PATH
namespace {
int cli(const std::string& args) {
  const int raw = std::system((std::string(RBSKM_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}
}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("bench --matrix /nonexistent.mtx --method RK"), 2);
  EXPECT_EQ(cli("bench --generate kind=gaussian,m=5,n=9 --method RK"), 3);
  EXPECT_EQ(cli("bench --generate kind=gaussian,m=50,n=5 --method RK --bogus"), 3);
  EXPECT_EQ(cli("sweep --generate kind=gaussian,m=50,n=5 --grid 60 --fixed 2"), 3);
  EXPECT_EQ(cli("spectrum --generate kind=gaussian,m=50,n=5"), 0);
}

TEST(Cli, RepeatRunsAreByteIdentical) {
  const auto a = scratch("cli_a.csv"), b = scratch("cli_b.csv");
  const std::string common =
      "bench --generate kind=sparse-random,m=200,n=40,density=0.2,seed=5 --method RB-SKM,beta=30,delta=5 "
      "--method SKM,beta=30 --trials 2 --seed 17 --out ";
  ASSERT_EQ(cli(common + a.string()), 0);
  ASSERT_EQ(cli(common + b.string()), 0);
  EXPECT_EQ(strip_timing(slurp(a)), strip_timing(slurp(b)));
  EXPECT_EQ(strip_timing(slurp(summary_path(a))), strip_timing(slurp(summary_path(b))));
}

TEST(Cli, ConfigFile) {
  const auto cfg = scratch("run.ini");
  const auto out = scratch("cfg_out.csv");
  std::ofstream(cfg) << "[bench]\ngenerate=\"kind=gaussian,m=60,n=10,seed=1\"\nmethod=\"RK\"\ntrials=1\nout=\""
                     << out.string() << "\"\n";
  ASSERT_EQ(cli("--config " + cfg.string() + " bench"), 0);
  EXPECT_TRUE(fs::exists(out));
}
#endif
