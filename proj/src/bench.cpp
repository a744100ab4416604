#include "rbskm/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ios>
#include <map>
#include <ostream>
#include <sstream>

#include "rbskm/diagnostics.hpp"
#include "rbskm/error.hpp"
#include "rbskm/matrix_market.hpp"
#include "rbskm/rng.hpp"
#include "rbskm/text.hpp"

namespace rbskm::bench {

namespace {

// Stream tags under the master seed. Fixed: changing them changes results.
constexpr std::uint64_t kSolverStream = 1;
constexpr std::uint64_t kSystemStream = 2;
constexpr std::uint64_t kSolutionStream = 3;

using Meta = std::vector<std::pair<std::string, std::string>>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T to_number(const std::string& text, const std::string& key) {
  T v{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw ArgumentError("invalid value '" + text + "' for " + key);
  return v;
}

// key=value pairs after an optional leading bare word
std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& parts,
                                               std::size_t first) {
  std::map<std::string, std::string> kv;
  for (std::size_t k = first; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string::npos || eq == 0)
      throw ArgumentError("expected key=value, got '" + parts[k] + "'");
    const auto key = lower(trim(std::string_view(parts[k]).substr(0, eq)));
    if (!kv.emplace(key, trim(std::string_view(parts[k]).substr(eq + 1))).second)
      throw ArgumentError("key '" + key + "' given twice");
  }
  return kv;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
  return out;
}

void write_meta(std::ostream& out, const Meta& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << '\n';
}

std::string config_echo(const SolverConfig& c) {
  std::string s = "method=" + c.method + " beta=" + std::to_string(c.beta) +
                  " delta=" + std::to_string(c.delta) + " rule=" + to_string(c.update_rule);
  if (c.update_rule == UpdateRule::PseudoinverseFree) s += " alpha=" + to_text(c.pif_alpha);
  return s;
}

Meta common_meta(const BenchSpec& spec, const LinearSystem& sys) {
  Meta meta;
  meta.emplace_back("generator", std::string(RngStream::kName));
  meta.emplace_back("system", sys.label());
  meta.emplace_back("m", std::to_string(sys.rows()));
  meta.emplace_back("n", std::to_string(sys.cols()));
  meta.emplace_back("nnz", std::to_string(sys.a().nnz()));
  meta.emplace_back("rhs_source", sys.rhs_source());
  meta.emplace_back("redraw_system", spec.redraw_system ? "true" : "false");
  meta.emplace_back("master_seed", std::to_string(spec.master_seed));
  meta.emplace_back("trials", std::to_string(spec.trials));
  meta.emplace_back("rr_tolerance", to_text(spec.rr_tolerance));
  meta.emplace_back("max_iterations", std::to_string(spec.max_iterations));
  meta.emplace_back("residual_refresh_period", std::to_string(spec.residual_refresh_period));
  meta.emplace_back("inner_rel_tol", to_text(spec.inner.rel_tol));
  meta.emplace_back("inner_max_iter", spec.inner.max_inner_iter
                                          ? std::to_string(*spec.inner.max_inner_iter)
                                          : std::string("min(delta,n)+10"));
  return meta;
}

bool records(const BenchSpec& spec, Record r) {
  return std::find(spec.record.begin(), spec.record.end(), r) != spec.record.end();
}

void validate(const BenchSpec& spec) {
  if (spec.trials < 1) throw ArgumentError("bench: trials must be at least 1");
  const int sources = static_cast<int>(spec.source.matrix_path.has_value()) +
                      static_cast<int>(spec.source.generator.has_value());
  if (sources != 1) throw ArgumentError("bench: give exactly one of a matrix file or a generator");
  if (!(spec.rr_tolerance > 0.0)) throw ArgumentError("bench: rr tolerance must be positive");
}

// Runs every trial of one bound config and appends trace rows to `trace`.
MethodSummary run_method(const BenchSpec& spec, const LinearSystem& fixed_sys,
                         const std::string& label, const SolverConfig& base_cfg,
                         std::ostream* trace) {
  MethodSummary sum;
  sum.label = label;
  sum.config = base_cfg;
  sum.trials = spec.trials;
  const bool with_ops = records(spec, Record::RrVsOps);
  const bool with_time = records(spec, Record::RrVsTime);

  for (std::size_t t = 0; t < spec.trials; ++t) {
    std::optional<LinearSystem> redrawn;
    if (spec.redraw_system && t > 0)
      redrawn.emplace(load_system(spec.source, spec.master_seed, t, true));
    const LinearSystem& sys = redrawn ? *redrawn : fixed_sys;

    SolverConfig cfg = base_cfg;
    cfg.seed = derive_seed(spec.master_seed, kSolverStream, t);
    const RunReport rep = solve(sys, cfg);

    sum.mean_iterations += static_cast<double>(rep.iterations);
    sum.mean_total_ops += static_cast<double>(rep.total_ops);
    sum.mean_wall_time += rep.wall_time;
    sum.mean_final_rr += rep.final_rr;
    switch (rep.status) {
      case RunStatus::Converged: ++sum.converged; break;
      case RunStatus::IterationCap: ++sum.iteration_cap; break;
      case RunStatus::Stalled: ++sum.stalled; break;
    }

    if (trace) {
      auto row = [&](std::size_t it, double rr, std::uint64_t ops, double secs) {
        *trace << label << ',' << t << ',' << it << ',' << to_text(rr);
        if (with_ops) *trace << ',' << ops;
        if (with_time) *trace << ',' << to_text(secs);
        *trace << '\n';
      };
      row(0, 1.0, 0, 0.0);
      for (const auto& rec : rep.trace) {
        row(rec.iteration, rec.rr_after, rec.cumulative_ops, rec.elapsed_seconds);
      }
    }
  }
  const auto n = static_cast<double>(spec.trials);
  sum.mean_iterations /= n;
  sum.mean_total_ops /= n;
  sum.mean_wall_time /= n;
  sum.mean_final_rr /= n;
  return sum;
}

void write_trace_header(std::ostream& out, const BenchSpec& spec) {
  out << "method,trial,iteration,rr";
  if (records(spec, Record::RrVsOps)) out << ",cumulative_ops";
  if (records(spec, Record::RrVsTime)) out << ",elapsed_seconds";
  out << '\n';
}

void write_summary_row(std::ostream& out, const MethodSummary& s) {
  out << s.label << ',' << s.config.beta << ',' << s.config.delta << ','
      << to_string(s.config.update_rule) << ',' << s.trials << ','
      << to_text(s.mean_iterations) << ',' << to_text(s.mean_total_ops) << ','
      << to_text(s.mean_wall_time) << ',' << to_text(s.mean_final_rr) << ',' << s.converged
      << ',' << s.iteration_cap << ',' << s.stalled << '\n';
}

constexpr const char* kSummaryHeader =
    "method,beta,delta,rule,trials,mean_iterations,mean_total_ops,mean_wall_time,"
    "mean_final_rr,converged,iteration_cap,stalled\n";

template <class F>
auto guarded(F&& body, std::string& message) -> int {
  try {
    return body();
  } catch (const ParseError& e) {
    message = std::string("parse error: ") + e.what();
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    message = std::string("i/o error: ") + e.what();
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    message = std::string("i/o error: ") + e.what();
    return kIoError;
  } catch (const std::invalid_argument& e) {
    message = std::string("invalid spec: ") + e.what();
    return kInvalidSpec;
  } catch (const std::domain_error& e) {
    message = std::string("invalid spec: ") + e.what();
    return kInvalidSpec;
  } catch (const std::length_error& e) {
    message = std::string("invalid spec: ") + e.what();
    return kInvalidSpec;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

MethodSpec MethodSpec::parse(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts[0].empty() || parts[0].find('=') != std::string::npos)
    throw ArgumentError("method spec must start with a name: '" + std::string(text) + "'");
  MethodSpec m;
  m.name = parts[0];
  for (const auto& [key, value] : parse_pairs(parts, 1)) {
    if (key == "beta") {
      m.beta = to_number<Index>(value, key);
    } else if (key == "delta") {
      m.delta = to_number<Index>(value, key);
    } else if (key == "rule") {
      const auto v = lower(value);
      if (v == "block" || v == "block-projection")
        m.rule = UpdateRule::BlockProjection;
      else if (v == "pif" || v == "pseudoinverse-free")
        m.rule = UpdateRule::PseudoinverseFree;
      else
        throw ArgumentError("unknown rule '" + value + "'");
    } else if (key == "alpha") {
      m.alpha = to_number<double>(value, key);
    } else {
      throw ArgumentError("unknown method key '" + key + "'");
    }
  }
  return m;
}

std::string MethodSpec::label() const {
  std::string s = name;
  std::vector<std::string> extra;
  if (beta) extra.push_back("beta=" + std::to_string(*beta));
  if (delta) extra.push_back("delta=" + std::to_string(*delta));
  if (rule == UpdateRule::PseudoinverseFree) {
    extra.emplace_back("rule=pif");
    extra.push_back("alpha=" + to_text(alpha));
  }
  if (extra.empty()) return s;
  s += '(';
  for (std::size_t k = 0; k < extra.size(); ++k) s += (k ? ";" : "") + extra[k];
  return s + ')';
}

GeneratorSpec parse_generator(std::string_view text) {
  const auto kv = parse_pairs(split(text, ','), 0);
  GeneratorSpec g;
  bool have_kind = false, have_m = false, have_n = false;
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      const auto v = lower(value);
      if (v == "gaussian")
        g.kind = GeneratorKind::Gaussian;
      else if (v == "sparse-random" || v == "sparse")
        g.kind = GeneratorKind::SparseRandom;
      else
        throw ArgumentError("unknown generator kind '" + value + "'");
      have_kind = true;
    } else if (key == "m") {
      g.m = to_number<Index>(value, key);
      have_m = true;
    } else if (key == "n") {
      g.n = to_number<Index>(value, key);
      have_n = true;
    } else if (key == "density") {
      g.density = to_number<double>(value, key);
    } else if (key == "sigma") {
      g.sigma = to_number<double>(value, key);
    } else if (key == "seed") {
      g.seed = to_number<std::uint64_t>(value, key);
    } else {
      throw ArgumentError("unknown generator key '" + key + "'");
    }
  }
  if (!have_kind || !have_m || !have_n)
    throw ArgumentError("generator needs kind, m and n");
  g.validate();
  return g;
}

std::filesystem::path summary_path(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p.replace_extension();
  p += ".summary.csv";
  return p;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return RngStream(master).split(stream).split(index).seed();
}

LinearSystem load_system(const SystemSource& src, std::uint64_t master_seed, std::size_t trial,
                         bool redraw) {
  const std::size_t draw = redraw ? trial : 0;
  if (src.generator) {
    GeneratorSpec g = *src.generator;
    if (redraw && trial > 0) g.seed = derive_seed(g.seed, kSystemStream, trial);
    const SparseMatrix a = generate(g);
    return make_consistent_system(a, derive_seed(master_seed, kSolutionStream, draw),
                                  g.describe());
  }
  if (!src.matrix_path) throw ArgumentError("no system source");
  SparseMatrix a = load_matrix_market(*src.matrix_path);
  const std::string label = src.matrix_path->stem().string();
  if (src.rhs_path) {
    Vector b = load_vector_market(*src.rhs_path);
    LinearSystem sys(std::move(a), std::move(b), std::nullopt, label);
    sys.set_rhs_source("file");
    return sys;
  }
  return make_consistent_system(a, derive_seed(master_seed, kSolutionStream, draw), label);
}

SolverConfig bind_method(const MethodSpec& method, Index m, const BenchSpec& spec) {
  SolverConfig cfg;
  const std::string key = lower(method.name);
  if (auto p = parse_preset(method.name)) {
    cfg = preset(*p, method.beta, method.delta, m);
  } else if (key == "full-scan-greedy") {
    cfg = preset(Preset::BSKM1, method.beta, method.delta, m);
    cfg.method = "full-scan-greedy";
  } else if (key == "rb-skm") {
    if (!method.beta || !method.delta) throw ArgumentError("RB-SKM needs beta and delta");
    cfg.method = "RB-SKM";
    cfg.beta = *method.beta;
    cfg.delta = *method.delta;
  } else {
    throw ArgumentError("unknown method '" + method.name + "'");
  }
  cfg.update_rule = method.rule;
  cfg.pif_alpha = method.alpha;
  cfg.rr_tolerance = spec.rr_tolerance;
  cfg.max_iterations = spec.max_iterations;
  cfg.residual_refresh_period = spec.residual_refresh_period;
  cfg.inner = spec.inner;
  cfg.keep_index_sets = false;
  cfg.validate(m);
  return cfg;
}

BenchResult run_bench(const BenchSpec& spec) {
  BenchResult res;
  res.exit_code = guarded(
      [&] {
        validate(spec);
        if (spec.methods.empty()) throw ArgumentError("bench: at least one method is required");
        const LinearSystem sys = load_system(spec.source, spec.master_seed, 0, spec.redraw_system);

        std::vector<std::pair<std::string, SolverConfig>> bound;
        for (const auto& m : spec.methods) bound.emplace_back(m.label(), bind_method(m, sys.rows(), spec));

        Meta meta = common_meta(spec, sys);
        for (const auto& [label, cfg] : bound) meta.emplace_back("config " + label, config_echo(cfg));

        const bool to_file = !spec.output_path.empty();
        std::ostringstream trace;
        if (to_file) {
          write_meta(trace, meta);
          write_trace_header(trace, spec);
        }
        for (const auto& [label, cfg] : bound)
          res.summaries.push_back(run_method(spec, sys, label, cfg, to_file ? &trace : nullptr));

        if (to_file) {
          auto out = open_output(spec.output_path);
          out << trace.str();
          auto sum = open_output(summary_path(spec.output_path));
          write_meta(sum, meta);
          sum << kSummaryHeader;
          for (const auto& s : res.summaries) write_summary_row(sum, s);
          if (!out || !sum) throw std::ios_base::failure("write failed");
        }
        return static_cast<int>(kOk);
      },
      res.message);
  return res;
}

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult res;
  res.exit_code = guarded(
      [&] {
        validate(spec.base);
        if (spec.grid.empty()) throw ArgumentError("sweep: grid is empty");
        const LinearSystem sys =
            load_system(spec.base.source, spec.base.master_seed, 0, spec.base.redraw_system);
        const Index m = sys.rows();
        const bool vary_beta = spec.vary == SweepSpec::Vary::Beta;

        Meta meta = common_meta(spec.base, sys);
        meta.emplace_back("vary", vary_beta ? "beta" : "delta");
        meta.emplace_back(vary_beta ? "delta" : "beta", std::to_string(spec.fixed_other));

        for (Index v : spec.grid) {
          SweepRow row;
          row.value = v;
          const Index beta = vary_beta ? v : spec.fixed_other;
          const Index delta = vary_beta ? spec.fixed_other : v;
          if (delta < 1 || delta > beta || beta > m) {
            row.skipped = true;
            row.reason = "violates 1 <= delta <= beta <= m";
            res.rows.push_back(std::move(row));
            continue;
          }
          MethodSpec method;
          method.name = "RB-SKM";
          method.beta = beta;
          method.delta = delta;
          const SolverConfig cfg = bind_method(method, m, spec.base);
          row.summary = run_method(spec.base, sys, method.label(), cfg, nullptr);
          res.rows.push_back(std::move(row));
        }
        const bool any = std::any_of(res.rows.begin(), res.rows.end(),
                                     [](const SweepRow& r) { return !r.skipped; });

        if (!spec.base.output_path.empty()) {
          auto out = open_output(spec.base.output_path);
          write_meta(out, meta);
          out << "value,beta,delta,status,mean_iterations,mean_total_ops,mean_wall_time\n";
          for (const auto& r : res.rows) {
            const Index beta = vary_beta ? r.value : spec.fixed_other;
            const Index delta = vary_beta ? spec.fixed_other : r.value;
            out << r.value << ',' << beta << ',' << delta << ',';
            if (r.skipped) {
              out << "skipped,,,\n";
              continue;
            }
            out << "ok," << to_text(r.summary.mean_iterations) << ','
                << to_text(r.summary.mean_total_ops) << ',' << to_text(r.summary.mean_wall_time)
                << '\n';
          }
          if (!out) throw std::ios_base::failure("write failed");
        }
        if (!any) throw ArgumentError("sweep: no grid value satisfies delta <= beta <= m");
        return static_cast<int>(kOk);
      },
      res.message);
  return res;
}

int run_xi_trace(const XiTraceSpec& spec, std::string* message) {
  std::string msg;
  const int code = guarded(
      [&] {
        const int sources = static_cast<int>(spec.source.matrix_path.has_value()) +
                            static_cast<int>(spec.source.generator.has_value());
        if (sources != 1) throw ArgumentError("xi-trace: give exactly one system source");
        if (spec.beta_grid.empty()) throw ArgumentError("xi-trace: beta grid is empty");

        SparseMatrix a;
        std::string label;
        if (spec.source.generator) {
          a = generate(*spec.source.generator);
          label = spec.source.generator->describe();
        } else {
          a = load_matrix_market(*spec.source.matrix_path);
          label = spec.source.matrix_path->stem().string();
        }
        RngStream rng(spec.seed);
        const auto rows = xi_trend_study(a, spec.beta_grid, spec.delta, spec.samples, rng);

        const std::vector<std::pair<std::string, std::string>> meta{
            {"generator", std::string(RngStream::kName)},
            {"system", label},
            {"delta", std::to_string(spec.delta)},
            {"samples", std::to_string(spec.samples)},
            {"seed", std::to_string(spec.seed)},
            {"exhaustive_limit", to_text(kExhaustiveXiLimit)},
        };
        if (spec.output_path.empty()) throw ArgumentError("xi-trace: output path is required");
        auto out = open_output(spec.output_path);
        write_xi_trend_csv(out, rows, meta);
        if (!out) throw std::ios_base::failure("write failed");
        return static_cast<int>(kOk);
      },
      msg);
  if (message) *message = msg;
  return code;
}

}  // namespace rbskm::bench
