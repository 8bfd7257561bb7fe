#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include <json.hpp>

#include "iva/acceptance.hpp"
#include "iva/certificate.hpp"
#include "iva/cp.hpp"
#include "iva/eating.hpp"
#include "iva/json_io.hpp"
#include "iva/lp.hpp"
#include "iva/oracles.hpp"
#include "iva/valuation.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

nlohmann::json py_to_json(const py::object& value) {
  const std::string dumped =
      py::module_::import("json").attr("dumps")(value).cast<std::string>();
  return nlohmann::json::parse(dumped);
}

struct PyInstance {
  iva::Instance instance;
  iva::ShadowOperator shadow;
};

PyInstance make_instance(const std::vector<double>& signals, const py::object& valuation_spec,
                         const py::object& matroid_spec) {
  PyInstance result;
  result.instance.signals = iva::SignalProfile(signals);
  auto [spec, n] = iva::parse_valuation_spec(py_to_json(valuation_spec));
  if (n != static_cast<int>(signals.size())) {
    throw std::invalid_argument("valuation spec n must match the signal count");
  }
  result.instance.valuations = iva::make_family(spec, n);
  result.instance.matroid = matroid_spec.is_none()
                                ? std::make_shared<iva::UniformMatroid>(n, 1)
                                : std::shared_ptr<const iva::Matroid>(
                                      iva::parse_matroid_spec(py_to_json(matroid_spec)));
  return result;
}

}  // namespace

PYBIND11_MODULE(iva_py, m) {
  m.doc() = "truthful interdependent-value auction mechanisms (eating + candidate partitioning)";

  py::class_<iva::EatingResult>(m, "EatingResult")
      .def_property_readonly("stopping_time",
                             [](const iva::EatingResult& r) -> py::object {
                               if (!r.stopping_time) return py::none();
                               return py::float_(*r.stopping_time);
                             })
      .def_readonly("shares", &iva::EatingResult::shares)
      .def_readonly("breakpoints", &iva::EatingResult::breakpoints);

  m.def("eat", &iva::eat, py::arg("weights"),
        "per-bidder shares of the eating process with start times -ln(w)");

  m.def(
      "lp_share", [](const std::vector<double>& w, int i) { return iva::lp_share(w, i); },
      py::arg("weights"), py::arg("bidder"),
      "eat(w)_i recomputed through the simplex oracle on the share LP");

  py::class_<PyInstance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("signals"), py::arg("valuation"),
           py::arg("matroid") = py::none())
      .def_property_readonly("n", [](const PyInstance& inst) { return inst.instance.n(); })
      .def("value",
           [](const PyInstance& inst, int bidder) {
             return inst.instance.valuations.at(static_cast<std::size_t>(bidder))(
                 inst.instance.signals);
           })
      .def("shadow_value",
           [](const PyInstance& inst, int bidder, int zeroed) {
             return iva::shadow_value(
                 inst.instance.valuations.at(static_cast<std::size_t>(bidder)),
                 inst.instance.signals, zeroed, inst.shadow);
           })
      .def("criticality",
           [](const PyInstance& inst, int bidder) {
             return iva::criticality_at(
                 inst.instance.valuations.at(static_cast<std::size_t>(bidder)),
                 inst.instance.signals, inst.shadow);
           })
      .def("brute_force_opt", [](const PyInstance& inst) {
        const auto opt = iva::brute_force_opt(inst.instance.signals, inst.instance.valuations,
                                              *inst.instance.matroid);
        return py::make_tuple(opt.value, opt.optimal_set);
      });

  m.def(
      "run_eating",
      [](const PyInstance& inst, double normalizer) {
        iva::EatingConfig config;
        config.normalizer = normalizer;
        config.shadow = inst.shadow;
        const auto outcome =
            iva::run_eating_mechanism(inst.instance.signals, inst.instance.valuations, config);
        py::dict result;
        result["allocations"] = outcome.allocations;
        result["payments"] = outcome.payments;
        result["total_allocation"] = outcome.total_allocation;
        result["feasible"] = outcome.feasible;
        result["expected_welfare"] =
            outcome.expected_welfare(inst.instance.signals, inst.instance.valuations);
        return result;
      },
      py::arg("instance"), py::arg("normalizer") = 4.0);

  m.def(
      "run_cp",
      [](const PyInstance& inst, int d, std::uint64_t seed) {
        const auto outcome = iva::run_cp(inst.instance.signals, inst.instance.valuations,
                                         *inst.instance.matroid, d, seed, inst.shadow);
        return json_to_py(iva::cp_outcome_to_json(outcome));
      },
      py::arg("instance"), py::arg("d"), py::arg("seed") = 0);

  m.def(
      "run_cp_hetero",
      [](const PyInstance& inst, const std::vector<int>& reports, std::uint64_t seed) {
        const auto outcome =
            iva::run_cp_hetero(inst.instance.signals, inst.instance.valuations,
                               *inst.instance.matroid, iva::HeteroDReport{reports}, seed,
                               inst.shadow);
        return json_to_py(iva::cp_outcome_to_json(outcome));
      },
      py::arg("instance"), py::arg("reports"), py::arg("seed") = 0);

  m.def(
      "dual_certificate",
      [](const PyInstance& inst) {
        return json_to_py(iva::certificate_to_json(
            iva::build_dual_certificate(inst.instance.signals, inst.instance.valuations)));
      },
      py::arg("instance"));

  m.def(
      "check_sos",
      [](const PyInstance& inst, int bidder, const std::vector<double>& axis, double delta) {
        const auto grid = iva::make_uniform_grid(inst.instance.n(), axis);
        const auto result = iva::check_sos(
            inst.instance.valuations.at(static_cast<std::size_t>(bidder)), grid, delta);
        return result.pass;
      },
      py::arg("instance"), py::arg("bidder"), py::arg("axis"), py::arg("delta"));

  m.def(
      "truthfulness_audit",
      [](const PyInstance& inst, const std::string& mechanism, int bidder, int d) {
        iva::MechanismKind kind = iva::MechanismKind::kEating;
        iva::MechanismParams params;
        params.d = d;
        if (mechanism == "cp") {
          kind = iva::MechanismKind::kCp;
        } else if (mechanism == "cp-hetero") {
          kind = iva::MechanismKind::kCpHetero;
          params.reports = iva::HeteroDReport{
              std::vector<int>(static_cast<std::size_t>(inst.instance.n()), d)};
        } else if (mechanism != "eating") {
          throw std::invalid_argument("mechanism must be eating, cp, or cp-hetero");
        }
        const double truth =
            inst.instance.valuations.at(static_cast<std::size_t>(bidder))(inst.instance.signals);
        const auto audit = iva::truthfulness_audit(kind, inst.instance, bidder,
                                                   iva::make_value_grid(truth, 51), params);
        py::dict result;
        result["pass"] = audit.pass;
        result["truth_utility"] = audit.truth_utility;
        result["worst_gain"] = audit.worst_gain;
        return result;
      },
      py::arg("instance"), py::arg("mechanism"), py::arg("bidder"), py::arg("d") = 1);

  m.def("run_acceptance", [](const std::string& suite) {
    py::list results;
    for (const auto& r : iva::run_acceptance(suite)) {
      py::dict row;
      row["id"] = r.id;
      row["name"] = r.name;
      row["pass"] = r.pass;
      row["detail"] = r.detail;
      row["seconds"] = r.seconds;
      results.append(row);
    }
    return results;
  });
}
