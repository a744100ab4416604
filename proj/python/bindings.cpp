#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rbskm/bench.hpp"
#include "rbskm/diagnostics.hpp"
#include "rbskm/error.hpp"
#include "rbskm/generators.hpp"
#include "rbskm/matrix_market.hpp"
#include "rbskm/solver.hpp"

namespace py = pybind11;
using namespace rbskm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const Vector& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Vector from_numpy(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return Vector(a.data(), a.data() + a.size());
}

SparseMatrix from_csr(Index rows, Index cols, const std::vector<Index>& indptr,
                      const std::vector<Index>& indices, const Array& data) {
  return SparseMatrix(rows, cols, indptr, indices, from_numpy(data));
}

SparseMatrix dense_to_sparse(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  Eigen::MatrixXd m(a.shape(0), a.shape(1));
  auto v = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = v(i, j);
  return SparseMatrix::from_dense(m);
}

Array to_dense(const SparseMatrix& s) {
  Array out({static_cast<py::ssize_t>(s.rows()), static_cast<py::ssize_t>(s.cols())});
  auto v = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < v.shape(0); ++i)
    for (py::ssize_t j = 0; j < v.shape(1); ++j) v(i, j) = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    const auto row = s.row(i);
    for (std::size_t k = 0; k < row.cols.size(); ++k)
      v(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(row.cols[k])) = row.values[k];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rbskm, m) {
  m.doc() = "Randomized block subsampling Kaczmarz-Motzkin solver";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<UndefinedXiError>(m, "UndefinedXiError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<SparseMatrix>(m, "SparseMatrix")
      .def(py::init(&from_csr), py::arg("rows"), py::arg("cols"), py::arg("indptr"),
           py::arg("indices"), py::arg("data"))
      .def_static("from_dense", &dense_to_sparse)
      .def_static("identity", &SparseMatrix::identity)
      .def_property_readonly("shape", [](const SparseMatrix& s) { return py::make_tuple(s.rows(), s.cols()); })
      .def_property_readonly("nnz", &SparseMatrix::nnz)
      .def("matvec", [](const SparseMatrix& s, const Array& x) { return to_numpy(s.matvec(from_numpy(x))); })
      .def("to_dense", &to_dense)
      .def("__eq__", [](const SparseMatrix& a, const SparseMatrix& b) { return a == b; });

  py::class_<LinearSystem>(m, "LinearSystem")
      .def(py::init([](SparseMatrix a, const Array& b, std::optional<Array> x_star, std::string label) {
             std::optional<Vector> xs;
             if (x_star) xs = from_numpy(*x_star);
             return LinearSystem(std::move(a), from_numpy(b), std::move(xs), std::move(label));
           }),
           py::arg("a"), py::arg("b"), py::arg("x_star") = py::none(), py::arg("label") = "")
      .def_property_readonly("a", &LinearSystem::a)
      .def_property_readonly("b", [](const LinearSystem& s) { return to_numpy(s.b()); })
      .def_property_readonly("x_star", [](const LinearSystem& s) -> py::object {
        if (!s.x_star()) return py::none();
        return to_numpy(*s.x_star());
      })
      .def_property_readonly("label", &LinearSystem::label)
      .def_property_readonly("rhs_source", &LinearSystem::rhs_source);

  py::enum_<GeneratorKind>(m, "GeneratorKind")
      .value("GAUSSIAN", GeneratorKind::Gaussian)
      .value("SPARSE_RANDOM", GeneratorKind::SparseRandom);

  m.def("generate",
        [](GeneratorKind kind, Index rows, Index cols, double sigma, double density, std::uint64_t seed) {
          return generate({.kind = kind, .m = rows, .n = cols, .sigma = sigma, .density = density, .seed = seed});
        },
        py::arg("kind"), py::arg("m"), py::arg("n"), py::arg("sigma") = 1.0, py::arg("density") = 0.2,
        py::arg("seed") = 0);
  m.def("make_consistent_system",
        py::overload_cast<const SparseMatrix&, std::uint64_t, std::string>(&make_consistent_system),
        py::arg("a"), py::arg("seed"), py::arg("label") = "");
  m.def("load_matrix_market", py::overload_cast<const std::filesystem::path&>(&load_matrix_market));
  m.def("load_vector_market",
        [](const std::filesystem::path& p) { return to_numpy(load_vector_market(p)); });

  py::enum_<UpdateRule>(m, "UpdateRule")
      .value("BLOCK_PROJECTION", UpdateRule::BlockProjection)
      .value("PSEUDOINVERSE_FREE", UpdateRule::PseudoinverseFree);
  py::enum_<Preset>(m, "Preset")
      .value("RK", Preset::RK)
      .value("MOTZKIN", Preset::Motzkin)
      .value("RBK", Preset::RBK)
      .value("SKM", Preset::SKM)
      .value("BSKM1", Preset::BSKM1);
  py::enum_<RunStatus>(m, "RunStatus")
      .value("CONVERGED", RunStatus::Converged)
      .value("ITERATION_CAP", RunStatus::IterationCap)
      .value("STALLED", RunStatus::Stalled);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](Index beta, Index delta, std::uint64_t seed, double rr_tolerance,
                       std::size_t max_iterations, UpdateRule rule, double alpha) {
             SolverConfig c;
             c.beta = beta;
             c.delta = delta;
             c.seed = seed;
             c.rr_tolerance = rr_tolerance;
             c.max_iterations = max_iterations;
             c.update_rule = rule;
             c.pif_alpha = alpha;
             return c;
           }),
           py::arg("beta"), py::arg("delta"), py::arg("seed") = 0, py::arg("rr_tolerance") = 1e-6,
           py::arg("max_iterations") = 200000, py::arg("update_rule") = UpdateRule::BlockProjection,
           py::arg("pif_alpha") = 1.0)
      .def_readwrite("method", &SolverConfig::method)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("delta", &SolverConfig::delta)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("rr_tolerance", &SolverConfig::rr_tolerance)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("residual_refresh_period", &SolverConfig::residual_refresh_period)
      .def_readwrite("update_rule", &SolverConfig::update_rule)
      .def_readwrite("pif_alpha", &SolverConfig::pif_alpha);

  m.def("preset", &preset, py::arg("name"), py::arg("beta") = py::none(), py::arg("delta") = py::none(),
        py::arg("m"));

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("status", &RunReport::status)
      .def_readonly("iterations", &RunReport::iterations)
      .def_readonly("final_rr", &RunReport::final_rr)
      .def_readonly("total_ops", &RunReport::total_ops)
      .def_readonly("wall_time", &RunReport::wall_time)
      .def_property_readonly("solution", [](const RunReport& r) { return to_numpy(r.solution); })
      .def_property_readonly("trace_iterations", [](const RunReport& r) {
        std::vector<std::size_t> v;
        for (const auto& s : r.trace) v.push_back(s.iteration);
        return v;
      })
      .def_property_readonly("trace_rr", [](const RunReport& r) {
        Vector v;
        for (const auto& s : r.trace) v.push_back(s.rr_after);
        return to_numpy(v);
      })
      .def_property_readonly("trace_ops", [](const RunReport& r) {
        std::vector<std::uint64_t> v;
        for (const auto& s : r.trace) v.push_back(s.cumulative_ops);
        return v;
      });

  m.def("solve", &solve, py::arg("system"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::class_<SpectrumEstimate>(m, "SpectrumEstimate")
      .def_readonly("lambda_max", &SpectrumEstimate::lambda_max)
      .def_readonly("lambda_min_plus", &SpectrumEstimate::lambda_min_plus)
      .def_readonly("iterations_used", &SpectrumEstimate::iterations_used)
      .def_property_readonly("method", [](const SpectrumEstimate& s) { return std::string(to_string(s.method)); });
  m.def("estimate_spectrum",
        [](const SparseMatrix& a, double tol, std::size_t max_iter, std::uint64_t seed) {
          SpectrumOptions o;
          o.tol = tol;
          o.max_iter = max_iter;
          o.seed = seed;
          return estimate_spectrum(a, o);
        },
        py::arg("a"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000, py::arg("seed") = 0);

  py::class_<XiEstimate>(m, "XiEstimate")
      .def_readonly("value", &XiEstimate::value)
      .def_readonly("num_subsets", &XiEstimate::num_subsets)
      .def_readonly("std_error", &XiEstimate::std_error)
      .def_property_readonly("mode", [](const XiEstimate& x) { return std::string(to_string(x.mode)); });
  m.def("estimate_xi",
        [](const Array& r, Index beta, Index delta, std::size_t samples, std::uint64_t seed) {
          RngStream rng(seed);
          return estimate_xi_from_residual(from_numpy(r), beta, delta, samples, rng);
        },
        py::arg("residual"), py::arg("beta"), py::arg("delta"), py::arg("num_samples") = 1000,
        py::arg("seed") = 0);
  m.def("rate_factor", &rate_factor, py::arg("delta"), py::arg("xi"), py::arg("beta"), py::arg("m"),
        py::arg("lambda_min_plus"), py::arg("lambda_max_block"));
  m.def("reference_solution",
        [](const LinearSystem& s, std::size_t threshold) { return to_numpy(reference_solution(s, threshold)); },
        py::arg("system"), py::arg("dense_threshold") = 2000);
  m.def("op_count",
        [](std::uint64_t rows, std::uint64_t cols, std::uint64_t beta, std::uint64_t delta,
           std::uint64_t nnz_block, std::uint64_t it1, bool full_scan) {
          return op_count({rows, cols, beta, delta, nnz_block, it1},
                          full_scan ? OpCountMethod::FullScanGreedy : OpCountMethod::RbSkm);
        },
        py::arg("m"), py::arg("n"), py::arg("beta"), py::arg("delta"), py::arg("nnz_block"), py::arg("it1"),
        py::arg("full_scan") = false);
}
