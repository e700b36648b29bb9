#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "dk/config.hpp"
#include "dk/coordinate.hpp"
#include "dk/critical.hpp"
#include "dk/distortion.hpp"
#include "dk/exponent.hpp"
#include "dk/map.hpp"
#include "dk/orbit.hpp"
#include "dk/rng.hpp"
#include "dk/runner.hpp"

namespace py = pybind11;
using namespace dk;

namespace {

ExperimentConfig config_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

} // namespace

PYBIND11_MODULE(_dk1d, mod) {
  mod.doc() = "distortion-bound machinery for one-dimensional maps";

  py::register_exception<Error>(mod, "DkError");

  py::class_<Interval>(mod, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi)
      .def("length", &Interval::length)
      .def("mid", &Interval::mid)
      .def("contains", py::overload_cast<double, double>(&Interval::contains, py::const_),
           py::arg("x"), py::arg("tol") = 0.0)
      .def("__repr__", [](const Interval& iv) {
        return "Interval(" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + ")";
      });

  py::enum_<Side>(mod, "Side")
      .value("LEFT", Side::Left)
      .value("RIGHT", Side::Right)
      .value("TWO_SIDED", Side::TwoSided);

  py::class_<DeclaredCritical>(mod, "DeclaredCritical")
      .def(py::init([](double c, double gm, double gp) {
             return DeclaredCritical{c, gm, gp};
           }),
           py::arg("c"), py::arg("gamma_minus"), py::arg("gamma_plus"))
      .def_readwrite("c", &DeclaredCritical::c)
      .def_readwrite("gamma_minus", &DeclaredCritical::gamma_minus)
      .def_readwrite("gamma_plus", &DeclaredCritical::gamma_plus)
      .def("gamma", &DeclaredCritical::gamma);

  py::class_<MapModel>(mod, "MapModel")
      .def_static("quadratic", &MapModel::quadratic, py::arg("a"),
                  py::arg("domain") = Interval{0.0, 1.0})
      .def_static("tent", &MapModel::tent, py::arg("slope"),
                  py::arg("domain") = Interval{0.0, 1.0})
      .def_static("normal_form", &MapModel::normal_form, py::arg("c"),
                  py::arg("gamma_minus"), py::arg("gamma_plus"), py::arg("sigma"),
                  py::arg("v"), py::arg("form"), py::arg("domain"))
      .def_static("polynomial", &MapModel::polynomial, py::arg("coeffs"),
                  py::arg("domain"),
                  py::arg("criticals") = std::vector<DeclaredCritical>{})
      .def_static("piecewise_polynomial", &MapModel::piecewise_polynomial,
                  py::arg("breaks"), py::arg("pieces"), py::arg("domain"),
                  py::arg("criticals") = std::vector<DeclaredCritical>{})
      .def("eval", &MapModel::eval)
      .def("deriv", &MapModel::deriv, py::arg("x"),
           py::arg("side") = Side::TwoSided)
      .def("domain", &MapModel::domain)
      .def("criticals", &MapModel::criticals)
      .def("is_critical", &MapModel::is_critical, py::arg("x"),
           py::arg("tol") = 1e-12)
      .def("monotone_pieces", &MapModel::monotone_pieces)
      .def("name", &MapModel::name);

  py::class_<BranchTag>(mod, "BranchTag")
      .def_readonly("critical_index", &BranchTag::critical_index)
      .def_readonly("sign", &BranchTag::sign)
      .def("in_critical_set", &BranchTag::in_critical_set)
      .def("__str__", &BranchTag::str);

  py::class_<CriticalStructure>(mod, "CriticalStructure")
      .def_readonly("cp", &CriticalStructure::cp)
      .def_readonly("gamma", &CriticalStructure::gamma)
      .def_readonly("values", &CriticalStructure::values)
      .def_readonly("U", &CriticalStructure::U)
      .def_readonly("radii", &CriticalStructure::radii)
      .def_readonly("shrunk", &CriticalStructure::shrunk)
      .def_readonly("postcritical", &CriticalStructure::postcritical)
      .def_readonly("V_components", &CriticalStructure::V_components)
      .def("region_of",
           [](const CriticalStructure& cs, double x) { return cs.region_of(x); })
      .def("distance_to_postcritical", &CriticalStructure::distance_to_postcritical);

  mod.def("build_critical_structure", &build_critical_structure, py::arg("map"),
          py::arg("radii"), py::arg("postcritical_depth") = 100,
          py::arg("postcritical_start") = 1);

  py::class_<Chart>(mod, "Chart")
      .def_readonly("center", &Chart::center)
      .def_readonly("gamma", &Chart::gamma)
      .def_readonly("tau", &Chart::tau)
      .def_readonly("radius", &Chart::radius)
      .def_readonly("inner", &Chart::inner);

  py::class_<CoordinateChange>(mod, "CoordinateChange")
      .def("charts", &CoordinateChange::charts)
      .def("chart_at", &CoordinateChange::chart_at)
      .def("h", &CoordinateChange::h)
      .def("h_deriv", &CoordinateChange::h_deriv)
      .def("h_inverse", &CoordinateChange::h_inverse)
      .def("h_inverse_deriv", &CoordinateChange::h_inverse_deriv);

  mod.def("build_coordinate_change", &build_coordinate_change, py::arg("structure"),
          py::arg("chart_radii") = std::vector<double>{}, py::arg("collar") = 0.1);

  py::class_<RepresentationDeriv>(mod, "RepresentationDeriv")
      .def_readonly("f_tilde_deriv", &RepresentationDeriv::f_tilde_deriv)
      .def_readonly("h_deriv_x", &RepresentationDeriv::h_deriv_x)
      .def_readonly("h_deriv_fx", &RepresentationDeriv::h_deriv_fx)
      .def_readonly("f_deriv", &RepresentationDeriv::f_deriv);

  mod.def("representation_deriv", &representation_deriv);
  mod.def("representation_deriv_fd", &representation_deriv_fd, py::arg("map"),
          py::arg("coordinate_change"), py::arg("x"), py::arg("step") = 1e-6);

  py::class_<Lemma1Report>(mod, "Lemma1Report")
      .def_readonly("left_limit", &Lemma1Report::left_limit)
      .def_readonly("right_limit", &Lemma1Report::right_limit)
      .def_readonly("left_spread", &Lemma1Report::left_spread)
      .def_readonly("right_spread", &Lemma1Report::right_spread);

  mod.def("lemma1_check", &lemma1_check, py::arg("map"),
          py::arg("coordinate_change"), py::arg("c"), py::arg("h0") = 1e-2,
          py::arg("window") = 20);

  py::class_<ExponentFit>(mod, "ExponentFit")
      .def_readonly("gamma", &ExponentFit::gamma)
      .def_readonly("coefficient", &ExponentFit::coefficient)
      .def_readonly("residual", &ExponentFit::residual);

  py::class_<AsymmetryEstimate>(mod, "AsymmetryEstimate")
      .def_readonly("sigma", &AsymmetryEstimate::sigma)
      .def_readonly("spread", &AsymmetryEstimate::spread);

  py::class_<HolderEstimate>(mod, "HolderEstimate")
      .def_readonly("alpha", &HolderEstimate::alpha)
      .def_readonly("constant", &HolderEstimate::constant)
      .def_readonly("sample_count", &HolderEstimate::sample_count);

  mod.def("estimate_exponent",
          [](const MapModel& m, double c, Side side) {
            return estimate_exponent(m, c, side);
          },
          py::arg("map"), py::arg("c"), py::arg("side"));
  mod.def("estimate_asymmetry",
          [](const MapModel& m, double c) { return estimate_asymmetry(m, c); },
          py::arg("map"), py::arg("c"));
  mod.def("estimate_holder", &estimate_holder, py::arg("deriv"), py::arg("interval"),
          py::arg("alpha"), py::arg("samples"), py::arg("seed") = 0);

  mod.def("forward_orbit", &forward_orbit);
  mod.def("inverse_branch", &inverse_branch);

  py::class_<SuitableSequence>(mod, "SuitableSequence")
      .def_readonly("intervals", &SuitableSequence::intervals)
      .def_readonly("tags", &SuitableSequence::tags)
      .def_readonly("choices", &SuitableSequence::choices)
      .def("length", &SuitableSequence::length)
      .def("tag_string", &SuitableSequence::tag_string)
      .def("pullback", &SuitableSequence::pullback);

  mod.def("build_suitable_sequence", &build_suitable_sequence);
  mod.def("enumerate_suitable", &enumerate_suitable, py::arg("map"),
          py::arg("structure"), py::arg("interval"), py::arg("n_max"));

  py::class_<ExpansionFit>(mod, "ExpansionFit")
      .def_readonly("K", &ExpansionFit::K)
      .def_readonly("nu", &ExpansionFit::nu)
      .def_readonly("orbit_length", &ExpansionFit::orbit_length)
      .def_readonly("products", &ExpansionFit::products)
      .def_readonly("passed", &ExpansionFit::pass);

  mod.def("expansion_check", &expansion_check);

  py::class_<ConstantsReport>(mod, "ConstantsReport")
      .def_readonly("K1", &ConstantsReport::K1)
      .def_readonly("beta1", &ConstantsReport::beta1)
      .def_readonly("K2", &ConstantsReport::K2)
      .def_readonly("beta2", &ConstantsReport::beta2)
      .def_readonly("K3", &ConstantsReport::K3)
      .def_readonly("beta3", &ConstantsReport::beta3)
      .def_readonly("K4", &ConstantsReport::K4)
      .def_readonly("log_K4", &ConstantsReport::log_K4)
      .def_readonly("L", &ConstantsReport::L)
      .def_readonly("tau", &ConstantsReport::tau)
      .def_readonly("A", &ConstantsReport::A)
      .def_readonly("B", &ConstantsReport::B)
      .def_readonly("alpha", &ConstantsReport::alpha)
      .def_readonly("expansion_K", &ConstantsReport::expansion_K)
      .def_readonly("expansion_nu", &ConstantsReport::expansion_nu);

  mod.def(
      "estimate_constants",
      [](const MapModel& m, const CriticalStructure& cs, const CoordinateChange& cc,
         double alpha, long samples, double safety, std::uint64_t seed) {
        ConstantsOptions opt;
        opt.samples = samples;
        opt.safety = safety;
        opt.seed = seed;
        return estimate_constants(m, cs, cc, alpha, opt);
      },
      py::arg("map"), py::arg("structure"), py::arg("coordinate_change"),
      py::arg("alpha"), py::arg("samples") = 2000, py::arg("safety") = 1.5,
      py::arg("seed") = 0);

  py::class_<DistortionReport>(mod, "DistortionReport")
      .def_readonly("ratio", &DistortionReport::ratio)
      .def_readonly("log_ratio", &DistortionReport::log_ratio)
      .def_readonly("holder_sum", &DistortionReport::holder_sum)
      .def_readonly("koebe_term", &DistortionReport::koebe_term)
      .def_readonly("D_xy", &DistortionReport::D_xy)
      .def_readonly("bound", &DistortionReport::bound)
      .def_readonly("log_bound", &DistortionReport::log_bound)
      .def_readonly("margin", &DistortionReport::margin)
      .def_readonly("log_margin", &DistortionReport::log_margin)
      .def_readonly("xs", &DistortionReport::xs)
      .def_readonly("ys", &DistortionReport::ys);

  mod.def("distortion_along", &distortion_along, py::arg("map"), py::arg("sequence"),
          py::arg("x"), py::arg("y"), py::arg("alpha") = 1.0);
  mod.def("apply_bound", &apply_bound);
  mod.def("naive_bound", &naive_bound);
  mod.def("dk_bound", &dk_bound);

  mod.def("run_experiment_json",
          [](const std::string& config_text, int jobs) {
            const ExperimentConfig cfg = config_from_string(config_text);
            return run_experiment(cfg, jobs).report.dump(2);
          },
          py::arg("config_json"), py::arg("jobs") = 1);
  mod.def("constants_json", [](const std::string& config_text) {
    return constants_report_json(config_from_string(config_text)).dump(2);
  });
  mod.def("enumerate_json", [](const std::string& config_text) {
    return enumerate_report(config_from_string(config_text)).dump(2);
  });
  mod.def("config_hash", [](const std::string& config_text) {
    return config_hash(config_from_string(config_text));
  });
}
