#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "roq/eim.hpp"
#include "roq/error.hpp"
#include "roq/experiments.hpp"
#include "roq/families.hpp"
#include "roq/greedy.hpp"
#include "roq/numerics.hpp"
#include "roq/quadrature.hpp"
#include "roq/roq.hpp"

namespace py = pybind11;
using namespace roq;

namespace {

Json from_dict(const py::dict& d) {
  return Json::parse(py::str(py::module_::import("json").attr("dumps")(d)).cast<std::string>());
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reduced order quadrature: greedy bases, DEIM points and ROQ weights";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<SingularError>(m, "SingularError", PyExc_ArithmeticError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);

  py::class_<QuadratureRule>(m, "QuadratureRule")
      .def_readonly("kind", &QuadratureRule::kind)
      .def_readonly("x", &QuadratureRule::x)
      .def_readonly("y", &QuadratureRule::y)
      .def_readonly("weights", &QuadratureRule::weights)
      .def_property_readonly("size", &QuadratureRule::size)
      .def_property_readonly("dimension", &QuadratureRule::dimension)
      .def("weight_sum", &QuadratureRule::weight_sum)
      .def("fingerprint", &QuadratureRule::fingerprint);

  m.def("trapezoidal_rule", &trapezoidal_rule, py::arg("a"), py::arg("b"), py::arg("M"));
  m.def("gauss_legendre_rule", py::overload_cast<std::size_t, double, double>(&gauss_legendre_rule),
        py::arg("M"), py::arg("a") = -1.0, py::arg("b") = 1.0);
  m.def("tensor_product_rule", &tensor_product_rule);

  m.def("inner_product",
        [](const ComplexVector& f, const ComplexVector& g, const std::vector<double>& w) {
          return discrete_inner_product(f, g, w);
        });

  py::class_<FunctionFamily>(m, "FunctionFamily").def_readonly("name", &FunctionFamily::name);
  py::class_<GwPreset>(m, "GwPreset")
      .def(py::init<>())
      .def_readwrite("fmin", &GwPreset::fmin)
      .def_readwrite("fmax", &GwPreset::fmax)
      .def("mc_min_kg", &GwPreset::mc_min_kg)
      .def("mc_max_kg", &GwPreset::mc_max_kg);
  m.def("gw_family", &gw_family, py::arg("preset") = GwPreset{});
  m.def("analytic_family", &analytic_family);
  m.def("log_training_set", &log_training_set);
  m.def("normalized_legendre", &normalized_legendre);

  py::class_<SampledFunctionSet>(m, "SampledFunctionSet")
      .def_readonly("samples", &SampledFunctionSet::samples)
      .def_readonly("parameters", &SampledFunctionSet::parameters)
      .def_readonly("original_norms", &SampledFunctionSet::original_norms)
      .def_readonly("rule", &SampledFunctionSet::rule);
  m.def("sample_family", &sample_family, py::arg("family"), py::arg("parameters"), py::arg("rule"),
        py::arg("normalize") = true);

  py::class_<ReducedBasis>(m, "ReducedBasis")
      .def_readonly("V", &ReducedBasis::V)
      .def_readonly("greedy_indices", &ReducedBasis::greedy_indices)
      .def_readonly("greedy_errors", &ReducedBasis::greedy_errors)
      .def_readonly("pairs", &ReducedBasis::pairs)
      .def_readonly("rule", &ReducedBasis::rule)
      .def_readonly("converged", &ReducedBasis::converged)
      .def_property_readonly("size", &ReducedBasis::size);
  m.def("rb_greedy", py::overload_cast<const SampledFunctionSet&, double, std::size_t>(&rb_greedy),
        py::arg("training"), py::arg("tolerance"), py::arg("seed_index") = 0);
  m.def("two_step_greedy",
        [](const ReducedBasis& b, double tol) { return two_step_greedy(b, tol); });

  py::class_<EimOperator>(m, "EimOperator")
      .def_readonly("point_indices", &EimOperator::point_indices)
      .def_readonly("nodes_x", &EimOperator::nodes_x)
      .def_property_readonly("size", &EimOperator::size)
      .def("interpolate", [](const EimOperator& op, const ComplexMatrix& V, const ComplexVector& at) {
        return eim_interpolate(op, V, at);
      });
  m.def("build_deim", py::overload_cast<const ReducedBasis&>(&build_deim));

  py::class_<LebesgueConstants>(m, "LebesgueConstants")
      .def_readonly("lambda_2", &LebesgueConstants::lambda_2)
      .def_readonly("lambda_2_bound", &LebesgueConstants::lambda_2_bound)
      .def_readonly("lambda_inf", &LebesgueConstants::lambda_inf);
  m.def("lebesgue_constants", [](const EimOperator& op, const ReducedBasis& b) {
    return lebesgue_constants(op, b.V, b.rule.weights);
  });

  py::class_<RoqRule>(m, "RoqRule")
      .def_readonly("point_indices", &RoqRule::point_indices)
      .def_readonly("points_x", &RoqRule::points_x)
      .def_readonly("weights", &RoqRule::weights)
      .def_property_readonly("size", &RoqRule::size)
      .def("condition_number", &RoqRule::condition_number)
      .def("inner_product", [](const RoqRule& q, const ComplexVector& a, const ComplexVector& b) {
        return roq_inner_product(q, a, b);
      });
  m.def("build_roq", py::overload_cast<const ReducedBasis&, const EimOperator&>(&build_roq));
  m.def("truncate_roq", py::overload_cast<const ReducedBasis&, const EimOperator&, std::size_t>(&truncate_roq));
  m.def("verify_basis_integration", [](const RoqRule& q, const ReducedBasis& b) {
    return verify_basis_integration(q, b).max_relative;
  });

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("C", &DecayFit::C)
      .def_readonly("c0", &DecayFit::c0)
      .def_readonly("alpha", &DecayFit::alpha)
      .def_readonly("n_min", &DecayFit::n_min)
      .def_readonly("at_grid_boundary", &DecayFit::at_grid_boundary);
  m.def("fit_exponential_decay",
        [](const std::vector<double>& e, std::size_t n_min) { return fit_exponential_decay(e, n_min); },
        py::arg("errors"), py::arg("n_min") = 0);

  m.def("experiments", &ExperimentConfig::experiments);
  m.def("default_config", [](const std::string& e) { return to_py(ExperimentConfig::defaults(e).to_json()); });
  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::string& output_dir, const py::dict& overrides) {
        ExperimentConfig c = ExperimentConfig::defaults(experiment);
        c.merge(from_dict(overrides));
        c.output_dir = output_dir;
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
        }
        py::list criteria;
        for (const auto& k : r.criteria) {
          py::dict d;
          d["id"] = k.id;
          d["name"] = k.name;
          d["passed"] = k.passed;
          d["hard"] = k.hard;
          d["value"] = k.value;
          d["threshold"] = k.threshold;
          criteria.append(d);
        }
        py::dict out;
        out["experiment"] = r.experiment;
        out["criteria"] = criteria;
        out["summary"] = to_py(r.summary);
        return out;
      },
      py::arg("experiment"), py::arg("output_dir"), py::arg("overrides") = py::dict());
}
