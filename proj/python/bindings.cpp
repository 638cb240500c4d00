#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "strongcore/errors.hpp"
#include "strongcore/experiments.hpp"
#include "strongcore/ilp.hpp"
#include "strongcore/io.hpp"
#include "strongcore/oracle.hpp"
#include "strongcore/scfa.hpp"
#include "strongcore/verification.hpp"

namespace py = pybind11;
namespace sc = strongcore;

namespace {

// Documents cross the boundary as JSON text; the Python package decodes them.

std::string solve(const std::string& instance_text, bool trace, bool certify) {
  const sc::Instance instance = sc::parse_instance(instance_text);
  const auto& market = instance.market();
  const sc::SolveResult result = sc::solve_scffa(instance);
  sc::Json doc;
  doc["status"] = result.allocation ? "allocation" : "empty";
  if (result.allocation) doc["allocation"] = sc::allocation_to_json(market, *result.allocation);
  if (trace) doc["trace"] = sc::trace_to_json(market, result.trace);
  if (certify && result.allocation) {
    doc["certificate"] = sc::certificate_to_json(market, sc::price_certificate(market, *result.allocation));
  }
  return sc::dump(doc);
}

std::string check(const std::string& instance_text, const std::string& allocation_text, const std::string& mode) {
  if (mode != "strong-core" && mode != "core") {
    throw sc::Error(sc::ErrorCode::MalformedDocument, "mode must be 'core' or 'strong-core'");
  }
  const sc::Instance instance = sc::parse_instance(instance_text);
  const auto& market = instance.market();
  const sc::Allocation x = sc::parse_allocation(market, allocation_text);
  const bool strong = mode == "strong-core";
  const sc::Certificate cert = strong ? sc::find_weak_blocking_cycle(market, x) : sc::find_strict_blocking_cycle(market, x);
  const bool member = cert.kind == sc::CertificateKind::None;
  sc::Json doc;
  doc["mode"] = mode;
  doc["member"] = member;
  if (!member) doc["certificate"] = sc::certificate_to_json(market, cert);
  if (member && strong) doc["certificate"] = sc::certificate_to_json(market, sc::price_certificate(market, x));
  return sc::dump(doc);
}

std::string enumerate(const std::string& instance_text, const std::string& mode, std::size_t max_n) {
  const sc::Instance instance = sc::parse_instance(instance_text);
  const auto& market = instance.market();
  const std::size_t limit = max_n == 0 ? sc::default_oracle_limit() : max_n;
  std::vector<sc::Allocation> found;
  if (mode == "strong-core") {
    found = sc::strong_core_set(market, instance.forbidden(), limit);
  } else if (mode == "core") {
    found = sc::core_set(market, instance.forbidden(), limit);
  } else if (mode == "scfa") {
    found = sc::enumerate_scfa_outputs(market, instance.forbidden(), limit);
  } else if (mode == "all") {
    found = sc::enumerate_allocations(market, limit);
  } else {
    throw sc::Error(sc::ErrorCode::MalformedDocument, "unknown mode '" + mode + "'");
  }
  sc::Json list = sc::Json::array();
  for (const auto& x : found) list.push_back(sc::allocation_to_json(market, x));
  sc::Json doc;
  doc["mode"] = mode;
  doc["count"] = found.size();
  doc["allocations"] = std::move(list);
  return sc::dump(doc);
}

std::string optional_allocation(const sc::HousingMarket& market, const std::optional<sc::Allocation>& x) {
  sc::Json doc;
  doc["status"] = x ? "allocation" : "empty";
  if (x) doc["allocation"] = sc::allocation_to_json(market, *x);
  return sc::dump(doc);
}

std::string quint_wako(const std::string& instance_text) {
  const sc::Instance instance = sc::parse_instance(instance_text);
  return optional_allocation(instance.market(), sc::quint_wako_weak(instance.market(), instance.forbidden()));
}

std::string ttc(const std::string& instance_text) {
  const sc::Instance instance = sc::parse_instance(instance_text);
  return optional_allocation(instance.market(), sc::ttc_core(instance.market()));
}

std::string generate(const std::string& kind_name, std::size_t n, double density, int levels,
                     std::size_t max_acceptable, std::uint64_t seed) {
  const auto kind = sc::parse_generator_kind(kind_name);
  if (!kind) throw sc::Error(sc::ErrorCode::MalformedDocument, "unknown generator kind '" + kind_name + "'");
  return sc::serialize_instance(sc::Instance(sc::generate({*kind, n, density, levels, max_acceptable, seed})));
}

std::string emit_ilp(const std::string& instance_text) {
  return sc::write_lp(sc::build_ilp(sc::parse_instance(instance_text).market()));
}

std::string improve(const std::string& instance_text, const std::string& steps_text, bool check_ri, std::size_t max_n) {
  const sc::Instance instance = sc::parse_instance(instance_text);
  const auto& market = instance.market();
  const auto steps = sc::parse_improvement_steps(market, steps_text);
  sc::Json doc;
  doc["market"] = sc::Json::parse(sc::serialize_instance(sc::Instance(sc::apply_improvement(market, steps))));
  if (check_ri && !steps.empty()) {
    const std::size_t limit = max_n == 0 ? sc::default_oracle_limit() : max_n;
    doc["ri"] = sc::ri_report_to_json(market, sc::ri_harness(market, steps.front().p, steps, limit));
  }
  return sc::dump(doc);
}

std::string experiment(const std::string& name, std::size_t trials, std::uint64_t seed, std::size_t max_n,
                       std::size_t max_coalition, bool records) {
  if (name != "ri" && name != "gsp") throw sc::Error(sc::ErrorCode::MalformedDocument, "experiment is 'ri' or 'gsp'");
  if (max_n > sc::default_oracle_limit()) {
    throw sc::Error(sc::ErrorCode::InstanceTooLarge, "max_n exceeds the oracle bound");
  }
  const sc::ExperimentConfig config{trials, seed, max_n, max_coalition};
  const auto report = name == "ri" ? sc::run_ri_experiment(config) : sc::run_gsp_experiment(config);
  return sc::dump(sc::report_to_json(report, records));
}

}  // namespace

PYBIND11_MODULE(_strongcore, m) {
  m.doc() = "Strong-core allocations for housing markets with partial-order preferences";

  // Kept alive for the life of the process; instances carry the error code.
  static py::handle error_type = py::exception<sc::Error>(m, "Error", PyExc_ValueError).inc_ref();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sc::Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = std::string(sc::to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("solve", &solve, py::arg("instance"), py::arg("trace") = false, py::arg("certify") = false);
  m.def("check", &check, py::arg("instance"), py::arg("allocation"), py::arg("mode") = "strong-core");
  m.def("enumerate", &enumerate, py::arg("instance"), py::arg("mode") = "strong-core", py::arg("max_n") = 0);
  m.def("quint_wako", &quint_wako, py::arg("instance"));
  m.def("ttc", &ttc, py::arg("instance"));
  m.def("generate", &generate, py::arg("kind"), py::arg("n"), py::arg("density") = 0.5, py::arg("levels") = 3,
        py::arg("max_acceptable") = 0, py::arg("seed") = 1);
  m.def("emit_ilp", &emit_ilp, py::arg("instance"));
  m.def("improve", &improve, py::arg("instance"), py::arg("steps"), py::arg("check_ri") = false,
        py::arg("max_n") = 0);
  m.def("experiment", &experiment, py::arg("name"), py::arg("trials") = 100, py::arg("seed") = 1,
        py::arg("max_n") = 6, py::arg("max_coalition") = 2, py::arg("records") = false);
}
