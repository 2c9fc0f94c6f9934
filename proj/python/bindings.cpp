#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <sstream>

#include "onegrab/baselines.hpp"
#include "onegrab/bounds.hpp"
#include "onegrab/demo.hpp"
#include "onegrab/hypergeom.hpp"
#include "onegrab/montecarlo.hpp"
#include "onegrab/rng.hpp"
#include "onegrab/sizing.hpp"

namespace py = pybind11;

namespace {

// Big rationals cross into python as exact Fraction objects.
py::object exact_as_fraction(const onegrab::ProbabilityValue& value) {
  if (!value.exact.has_value()) return py::none();
  const py::object fraction =
      py::module_::import("fractions").attr("Fraction");
  const py::object num = py::module_::import("builtins").attr("int")(
      boost::multiprecision::numerator(*value.exact).str());
  const py::object den = py::module_::import("builtins").attr("int")(
      boost::multiprecision::denominator(*value.exact).str());
  return fraction(num, den);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sample-size planning for one-time-grab multi-structure fitting";

  const py::exception<onegrab::Error> base(m, "Error");
  py::register_exception<onegrab::SizeViolation>(m, "SizeViolation", base);
  py::register_exception<onegrab::EmptyStructures>(m, "EmptyStructures", base);
  py::register_exception<onegrab::DomainError>(m, "DomainError", base);
  py::register_exception<onegrab::TooLarge>(m, "TooLarge", base);
  py::register_exception<onegrab::DenominatorViolation>(
      m, "DenominatorViolation", base);
  py::register_exception<onegrab::Infeasible>(m, "Infeasible", base);
  py::register_exception<onegrab::Degenerate>(m, "Degenerate", base);
  py::register_exception<onegrab::SeparationFailure>(m, "SeparationFailure",
                                                     base);

  py::enum_<onegrab::Backend>(m, "Backend")
      .value("automatic", onegrab::Backend::automatic)
      .value("rational", onegrab::Backend::rational)
      .value("log_space", onegrab::Backend::log_space);

  py::enum_<onegrab::P0Form>(m, "P0Form")
      .value("paper_literal", onegrab::P0Form::paper_literal)
      .value("safe", onegrab::P0Form::safe)
      .value("exponential", onegrab::P0Form::exponential);

  py::enum_<onegrab::DeltaBinomial>(m, "DeltaBinomial")
      .value("grab_choose", onegrab::DeltaBinomial::grab_choose)
      .value("structure_choose", onegrab::DeltaBinomial::structure_choose)
      .value("strict", onegrab::DeltaBinomial::strict);

  py::enum_<onegrab::SizingMethod>(m, "SizingMethod")
      .value("bound", onegrab::SizingMethod::bound)
      .value("exact", onegrab::SizingMethod::exact)
      .value("mc", onegrab::SizingMethod::mc);

  py::enum_<onegrab::Geometry>(m, "Geometry")
      .value("line2d", onegrab::Geometry::line2d)
      .value("plane3d", onegrab::Geometry::plane3d);

  py::class_<onegrab::PopulationSpec>(m, "PopulationSpec")
      .def_readonly("total_points", &onegrab::PopulationSpec::total_points)
      .def_readonly("structure_sizes", &onegrab::PopulationSpec::structure_sizes)
      .def_readonly("outlier_count", &onegrab::PopulationSpec::outlier_count)
      .def("structure_count", &onegrab::PopulationSpec::structure_count)
      .def("inlier_total", &onegrab::PopulationSpec::inlier_total)
      .def("min_structure_size", &onegrab::PopulationSpec::min_structure_size)
      .def("structure_of", &onegrab::PopulationSpec::structure_of,
           py::arg("index"))
      .def("__repr__", [](const onegrab::PopulationSpec& spec) {
        std::ostringstream out;
        out << "PopulationSpec(N=" << spec.total_points << ", C="
            << spec.structure_count() << ", outliers=" << spec.outlier_count
            << ")";
        return out.str();
      });

  py::class_<onegrab::Requirement>(m, "Requirement")
      .def(py::init<std::int64_t, double>(), py::arg("dof"),
           py::arg("confidence"))
      .def_readonly("dof", &onegrab::Requirement::dof)
      .def_readonly("confidence", &onegrab::Requirement::confidence);

  py::class_<onegrab::GrabOutcome>(m, "GrabOutcome")
      .def_readonly("structure_hits", &onegrab::GrabOutcome::structure_hits)
      .def_readonly("outlier_hits", &onegrab::GrabOutcome::outlier_hits)
      .def_readonly("grab_size", &onegrab::GrabOutcome::grab_size);

  py::class_<onegrab::BoundVariant>(m, "BoundVariant")
      .def(py::init([](onegrab::P0Form p0, onegrab::DeltaBinomial delta) {
             return onegrab::BoundVariant{p0, delta};
           }),
           py::arg("p0_form") = onegrab::P0Form::safe,
           py::arg("delta_binomial") = onegrab::DeltaBinomial::strict)
      .def_readwrite("p0_form", &onegrab::BoundVariant::p0_form)
      .def_readwrite("delta_binomial", &onegrab::BoundVariant::delta_binomial);

  py::class_<onegrab::BoundBreakdown>(m, "BoundBreakdown")
      .def_readonly("p0_per_structure",
                    &onegrab::BoundBreakdown::p0_per_structure)
      .def_readonly("delta_per_structure",
                    &onegrab::BoundBreakdown::delta_per_structure)
      .def_readonly("joint_lower_bound",
                    &onegrab::BoundBreakdown::joint_lower_bound)
      .def_readonly("variant", &onegrab::BoundBreakdown::variant)
      .def_property_readonly(
          "exact_tail_fallback",
          [](const onegrab::BoundBreakdown& breakdown) {
            std::vector<bool> flags(breakdown.exact_tail_fallback.begin(),
                                    breakdown.exact_tail_fallback.end());
            return flags;
          })
      .def("any_fallback", &onegrab::BoundBreakdown::any_fallback);

  py::class_<onegrab::ProbabilityValue>(m, "ProbabilityValue")
      .def_readonly("linear", &onegrab::ProbabilityValue::linear)
      .def_readonly("log_value", &onegrab::ProbabilityValue::log_value)
      .def_property_readonly("exact", &exact_as_fraction)
      .def("__float__",
           [](const onegrab::ProbabilityValue& value) { return value.linear; });

  py::class_<onegrab::MCEstimate>(m, "MCEstimate")
      .def_readonly("successes", &onegrab::MCEstimate::successes)
      .def_readonly("trials", &onegrab::MCEstimate::trials)
      .def_readonly("p_hat", &onegrab::MCEstimate::p_hat)
      .def_readonly("std_err", &onegrab::MCEstimate::std_err)
      .def_readonly("master_seed", &onegrab::MCEstimate::master_seed);

  py::class_<onegrab::McOptions>(m, "McOptions")
      .def(py::init([](std::int64_t trials, std::uint64_t seed, int threads) {
             onegrab::McOptions options;
             options.trials = trials;
             options.seed = seed;
             options.threads = threads;
             return options;
           }),
           py::arg("trials") = 200, py::arg("seed") = 0, py::arg("threads") = 0)
      .def_readwrite("trials", &onegrab::McOptions::trials)
      .def_readwrite("seed", &onegrab::McOptions::seed)
      .def_readwrite("threads", &onegrab::McOptions::threads);

  py::class_<onegrab::SizingResult>(m, "SizingResult")
      .def_readonly("r", &onegrab::SizingResult::r)
      .def_readonly("method", &onegrab::SizingResult::method)
      .def_readonly("achieved", &onegrab::SizingResult::achieved)
      .def_readonly("evaluations", &onegrab::SizingResult::evaluations)
      .def_readonly("fallback_used", &onegrab::SizingResult::fallback_used)
      .def_readonly("tail_substitution_used",
                    &onegrab::SizingResult::tail_substitution_used)
      .def_readonly("variant", &onegrab::SizingResult::variant);

  py::class_<onegrab::StageReport>(m, "StageReport")
      .def_readonly("population", &onegrab::StageReport::population)
      .def_readonly("inlier_ratio", &onegrab::StageReport::inlier_ratio)
      .def_readonly("iterations", &onegrab::StageReport::iterations);

  py::class_<onegrab::BaselineReport>(m, "BaselineReport")
      .def_readonly("method_name", &onegrab::BaselineReport::method_name)
      .def_readonly("hypotheses", &onegrab::BaselineReport::hypotheses)
      .def_readonly("points_touched", &onegrab::BaselineReport::points_touched)
      .def_readonly("per_stage", &onegrab::BaselineReport::per_stage);

  py::class_<onegrab::HyperplaneModel>(m, "HyperplaneModel")
      .def_readonly("normal", &onegrab::HyperplaneModel::normal)
      .def_readonly("offset", &onegrab::HyperplaneModel::offset)
      .def_readonly("dimension", &onegrab::HyperplaneModel::dimension);

  py::class_<onegrab::SyntheticScene>(m, "SyntheticScene")
      .def_readonly("geometry", &onegrab::SyntheticScene::geometry)
      .def_readonly("spec", &onegrab::SyntheticScene::spec)
      .def_readonly("noise_sigma", &onegrab::SyntheticScene::noise_sigma)
      .def_readonly("ground_truth_models",
                    &onegrab::SyntheticScene::ground_truth_models)
      .def_readonly("points", &onegrab::SyntheticScene::points)
      .def_readonly("labels", &onegrab::SyntheticScene::labels);

  py::class_<onegrab::DemoOutcome>(m, "DemoOutcome")
      .def_readonly("coverage_success", &onegrab::DemoOutcome::coverage_success)
      .def_readonly("recovered_models", &onegrab::DemoOutcome::recovered_models)
      .def_readonly("overlap_scores", &onegrab::DemoOutcome::overlap_scores);

  m.def("validate_population", &onegrab::validate_population,
        py::arg("total_points"), py::arg("structure_sizes"));
  m.def(
      "classify_grab",
      [](const onegrab::PopulationSpec& spec,
         const std::vector<std::int64_t>& indices) {
        return onegrab::classify_grab(spec, indices);
      },
      py::arg("spec"), py::arg("indices"));

  m.def("p0_bound", &onegrab::p0_bound, py::arg("grab_size"),
        py::arg("structures"), py::arg("structure_size"),
        py::arg("total_points"), py::arg("form"),
        py::arg("clamp_out_of_domain") = false);
  m.def("delta_bound", &onegrab::delta_bound, py::arg("grab_size"),
        py::arg("total_points"), py::arg("structures"),
        py::arg("structure_size"), py::arg("dof"),
        py::arg("variant") = onegrab::BoundVariant{});
  m.def("joint_lower_bound", &onegrab::joint_lower_bound, py::arg("spec"),
        py::arg("dof"), py::arg("grab_size"),
        py::arg("variant") = onegrab::BoundVariant{});

  m.def("structure_tail_exact", &onegrab::structure_tail_exact,
        py::arg("total_points"), py::arg("structure_size"),
        py::arg("grab_size"), py::arg("dof"),
        py::arg("backend") = onegrab::Backend::automatic);
  m.def("joint_success_exact", &onegrab::joint_success_exact, py::arg("spec"),
        py::arg("dof"), py::arg("grab_size"),
        py::arg("backend") = onegrab::Backend::automatic);
  m.def("joint_success_bruteforce", &onegrab::joint_success_bruteforce,
        py::arg("spec"), py::arg("dof"), py::arg("grab_size"));

  m.def(
      "find_min_true",
      [](std::int64_t lo, std::int64_t hi,
         const std::function<bool(std::int64_t)>& predicate, bool verify) {
        const onegrab::SearchResult result =
            onegrab::find_min_true(lo, hi, predicate, verify);
        return py::make_tuple(result.value, result.evaluations,
                              result.fallback_used);
      },
      py::arg("lo"), py::arg("hi"), py::arg("predicate"),
      py::arg("verify") = true);
  m.def("min_grab_size", &onegrab::min_grab_size, py::arg("spec"),
        py::arg("req"), py::arg("method"),
        py::arg("variant") = onegrab::BoundVariant{},
        py::arg("mc") = onegrab::McOptions{});

  m.def("derive_stream_seed", &onegrab::derive_stream_seed, py::arg("master"),
        py::arg("stream"));
  m.def("sample_grab", &onegrab::sample_grab, py::arg("total_points"),
        py::arg("grab_size"), py::arg("seed"), py::arg("trial_index"));
  m.def("estimate_success", &onegrab::estimate_success, py::arg("spec"),
        py::arg("dof"), py::arg("grab_size"), py::arg("trials"),
        py::arg("seed"), py::arg("threads") = 0);
  m.def(
      "coverage_time",
      [](const onegrab::PopulationSpec& spec, std::int64_t dof,
         std::uint64_t seed, std::int64_t trial_index) {
        return onegrab::coverage_time(spec, dof, seed, trial_index)
            .coverage_time;
      },
      py::arg("spec"), py::arg("dof"), py::arg("seed"), py::arg("trial_index"));
  m.def("coverage_samples", &onegrab::coverage_samples, py::arg("spec"),
        py::arg("dof"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 0);
  m.def("min_r_from_samples", &onegrab::min_r_from_samples, py::arg("samples"),
        py::arg("req"));
  m.def("estimate_min_r", &onegrab::estimate_min_r, py::arg("spec"),
        py::arg("req"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 0);

  m.def("ransac_iterations", &onegrab::ransac_iterations,
        py::arg("inlier_ratio"), py::arg("dof"), py::arg("confidence"));
  m.def("sequential_total", &onegrab::sequential_total, py::arg("spec"),
        py::arg("dof"), py::arg("confidence"));

  m.def("dof_for", &onegrab::dof_for, py::arg("geometry"));
  m.def("dimension_for", &onegrab::dimension_for, py::arg("geometry"));
  m.def("generate_scene", &onegrab::generate_scene, py::arg("spec"),
        py::arg("geometry"), py::arg("noise_sigma"), py::arg("seed"));
  m.def(
      "fit_minimal",
      [](const std::vector<std::array<double, 3>>& points,
         onegrab::Geometry geometry) {
        return onegrab::fit_minimal(points, geometry);
      },
      py::arg("points"), py::arg("geometry"));
  m.def("residual", &onegrab::residual, py::arg("model"), py::arg("point"));
  m.def("run_demo_trial", &onegrab::run_demo_trial, py::arg("scene"),
        py::arg("grab_size"), py::arg("tau"), py::arg("seed"));
  m.def(
      "scene_to_text",
      [](const onegrab::SyntheticScene& scene) {
        std::ostringstream out;
        onegrab::write_scene(out, scene);
        return out.str();
      },
      py::arg("scene"));
}
