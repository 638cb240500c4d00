// Command-line front end. Results go to stdout as JSON, diagnostics to stderr.
// Exit codes: 0 found, 2 empty, 3 instance too large, 1 any other error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/experiments.hpp"
#include "strongcore/ilp.hpp"
#include "strongcore/io.hpp"
#include "strongcore/oracle.hpp"
#include "strongcore/scfa.hpp"
#include "strongcore/verification.hpp"

namespace sc = strongcore;

namespace {

constexpr int kFound = 0;
constexpr int kError = 1;
constexpr int kEmpty = 2;
constexpr int kTooLarge = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sc::Error(sc::ErrorCode::IoFailure, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw sc::Error(sc::ErrorCode::IoFailure, "cannot write '" + path + "'");
}

void emit(const sc::Json& doc) { std::cout << sc::dump(doc); }

sc::Json allocation_list(const sc::HousingMarket& market, const std::vector<sc::Allocation>& list) {
  sc::Json out = sc::Json::array();
  for (const auto& x : list) out.push_back(sc::allocation_to_json(market, x));
  return out;
}

struct Options {
  std::string instance;
  std::string second;
  bool trace = false;
  bool certify = false;
  std::string mode = "strong-core";
  std::size_t max_n = 0;
  std::string kind = "strict";
  std::size_t n = 5;
  double density = 0.5;
  int levels = 3;
  std::size_t max_acceptable = 0;
  double forbidden_density = 0.0;
  std::uint64_t seed = 1;
  std::string output;
  std::string experiment;
  std::size_t trials = 100;
  std::size_t max_coalition = 2;
  bool records = false;
  bool check_ri = false;
};

std::size_t oracle_limit(const Options& o) { return o.max_n == 0 ? sc::default_oracle_limit() : o.max_n; }

int cmd_solve(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto& market = instance.market();
  const sc::SolveResult result = sc::solve_scffa(instance);
  sc::Json doc;
  doc["status"] = result.allocation ? "allocation" : "empty";
  if (result.allocation) doc["allocation"] = sc::allocation_to_json(market, *result.allocation);
  if (o.trace) doc["trace"] = sc::trace_to_json(market, result.trace);
  if (o.certify && result.allocation) {
    doc["certificate"] = sc::certificate_to_json(market, sc::price_certificate(market, *result.allocation));
  }
  emit(doc);
  return result.allocation ? kFound : kEmpty;
}

int cmd_check(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto& market = instance.market();
  const sc::Allocation x = sc::parse_allocation(market, read_file(o.second));
  const bool strong = o.mode == "strong-core";
  const sc::Certificate cert = strong ? sc::find_weak_blocking_cycle(market, x)
                                      : sc::find_strict_blocking_cycle(market, x);
  const bool member = cert.kind == sc::CertificateKind::None;
  sc::Json doc;
  doc["mode"] = o.mode;
  doc["member"] = member;
  if (!member) doc["certificate"] = sc::certificate_to_json(market, cert);
  if (member && strong) doc["certificate"] = sc::certificate_to_json(market, sc::price_certificate(market, x));
  emit(doc);
  return member ? kFound : kEmpty;
}

int cmd_enumerate(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto& market = instance.market();
  const std::size_t limit = oracle_limit(o);
  std::vector<sc::Allocation> found;
  if (o.mode == "strong-core") {
    found = sc::strong_core_set(market, instance.forbidden(), limit);
  } else if (o.mode == "core") {
    found = sc::core_set(market, instance.forbidden(), limit);
  } else if (o.mode == "scfa") {
    found = sc::enumerate_scfa_outputs(market, instance.forbidden(), limit);
  } else {
    found = sc::enumerate_allocations(market, limit);
  }
  sc::Json doc;
  doc["mode"] = o.mode;
  doc["count"] = found.size();
  doc["allocations"] = allocation_list(market, found);
  emit(doc);
  return found.empty() ? kEmpty : kFound;
}

int cmd_qw(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto result = sc::quint_wako_weak(instance.market(), instance.forbidden());
  sc::Json doc;
  doc["status"] = result ? "allocation" : "empty";
  if (result) doc["allocation"] = sc::allocation_to_json(instance.market(), *result);
  emit(doc);
  return result ? kFound : kEmpty;
}

int cmd_ttc(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto& market = instance.market();
  const sc::Allocation x = sc::ttc_core(market);
  sc::Json doc;
  doc["status"] = "allocation";
  doc["allocation"] = sc::allocation_to_json(market, x);
  doc["in_core"] = sc::in_core(market, x);
  doc["in_strong_core"] = sc::in_strong_core(market, x);
  emit(doc);
  return kFound;
}

int cmd_emit_ilp(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const sc::IlpModel model = sc::build_ilp(instance.market());
  const std::string lp = sc::write_lp(model);
  sc::Json doc;
  doc["agents"] = model.agent_count;
  doc["binaries"] = model.binaries.size();
  doc["generals"] = model.generals.size();
  doc["rows"] = model.rows.size();
  if (o.output.empty()) {
    doc["lp"] = lp;
  } else {
    write_file(o.output, lp);
    doc["file"] = o.output;
  }
  emit(doc);
  return kFound;
}

int cmd_gen(const Options& o) {
  const auto kind = sc::parse_generator_kind(o.kind);
  if (!kind) throw sc::Error(sc::ErrorCode::MalformedDocument, "unknown generator kind '" + o.kind + "'");
  sc::GeneratorSpec spec{*kind, o.n, o.density, o.levels, o.max_acceptable, o.seed};
  sc::HousingMarket market = sc::generate(spec);
  sc::ArcSet forbidden;
  if (o.forbidden_density > 0) {
    sc::Rng rng(sc::derive_seed(o.seed, 0));
    for (const sc::Arc& arc : sc::underlying_graph(market)) {
      if (rng.chance(o.forbidden_density)) forbidden.push_back(arc);
    }
  }
  std::cout << sc::serialize_instance(sc::Instance(std::move(market), std::move(forbidden)));
  return kFound;
}

int cmd_improve(const Options& o) {
  const sc::Instance instance = sc::parse_instance(read_file(o.instance));
  const auto& market = instance.market();
  const auto steps = sc::parse_improvement_steps(market, read_file(o.second));
  const sc::HousingMarket improved = sc::apply_improvement(market, steps);
  sc::Json doc;
  doc["market"] = sc::Json::parse(sc::serialize_instance(sc::Instance(improved)));
  if (o.check_ri && !steps.empty()) {
    doc["ri"] = sc::ri_report_to_json(market, sc::ri_harness(market, steps.front().p, steps, oracle_limit(o)));
  }
  emit(doc);
  return kFound;
}

int cmd_experiment(const Options& o) {
  sc::ExperimentConfig config;
  config.trials = o.trials;
  config.seed = o.seed;
  config.max_n = o.max_n == 0 ? 6 : o.max_n;
  config.max_coalition = o.max_coalition;
  if (config.max_n > sc::default_oracle_limit()) {
    throw sc::Error(sc::ErrorCode::InstanceTooLarge,
                    "experiments enumerate strong cores; --max-n exceeds the oracle bound");
  }
  const sc::ExperimentReport report =
      o.experiment == "ri" ? sc::run_ri_experiment(config) : sc::run_gsp_experiment(config);
  emit(sc::report_to_json(report, o.records));
  return report.failures == 0 ? kFound : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong-core allocations for housing markets with partial-order preferences"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Find a strong-core allocation respecting forbidden and forced arcs");
  solve->add_option("instance", o.instance, "Instance JSON")->required();
  solve->add_flag("--trace", o.trace, "Include the per-round trace");
  solve->add_flag("--certify", o.certify, "Attach a price certificate");

  auto* check = app.add_subcommand("check", "Test an allocation for (strong) core membership");
  check->add_option("instance", o.instance, "Instance JSON")->required();
  check->add_option("allocation", o.second, "Allocation JSON")->required();
  check->add_option("--mode", o.mode, "core or strong-core")->check(CLI::IsMember({"core", "strong-core"}));

  auto* enumerate = app.add_subcommand("enumerate", "List allocations by brute force");
  enumerate->add_option("instance", o.instance, "Instance JSON")->required();
  enumerate->add_option("--mode", o.mode, "strong-core, core, scfa or all")
      ->check(CLI::IsMember({"strong-core", "core", "scfa", "all"}));
  enumerate->add_option("--max-n", o.max_n, "Largest market to enumerate (default 8 or STRONGCORE_MAX_ORACLE_N)");

  auto* qw = app.add_subcommand("qw", "Absorbing-set algorithm for weak orders");
  qw->add_option("instance", o.instance, "Instance JSON")->required();

  auto* ttc = app.add_subcommand("ttc", "Top trading cycles on undominated arcs (core)");
  ttc->add_option("instance", o.instance, "Instance JSON")->required();

  auto* ilp = app.add_subcommand("emit-ilp", "Write the strong-core feasibility ILP in LP format");
  ilp->add_option("instance", o.instance, "Instance JSON")->required();
  ilp->add_option("-o,--output", o.output, "LP file to write (otherwise embedded in the JSON)");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--kind", o.kind, "strict, weak, partial-dag, semiorder or two-criteria");
  gen->add_option("--n", o.n, "Number of agents")->check(CLI::PositiveNumber);
  gen->add_option("--density", o.density, "Acceptance probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--levels", o.levels, "Tiers, utility spread or grid size")->check(CLI::PositiveNumber);
  gen->add_option("--max-acceptable", o.max_acceptable, "Cap on acceptable houses per agent");
  gen->add_option("--forbidden-density", o.forbidden_density, "Probability of forbidding an arc")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", o.seed, "RNG seed");

  auto* improve = app.add_subcommand("improve", "Apply improvement steps to an instance");
  improve->add_option("instance", o.instance, "Instance JSON")->required();
  improve->add_option("steps", o.second, "Improvement steps JSON")->required();
  improve->add_flag("--check-ri", o.check_ri, "Compare strong cores before and after");
  improve->add_option("--max-n", o.max_n, "Largest market to enumerate");

  auto* experiment = app.add_subcommand("experiment", "Run a seeded property experiment");
  experiment->add_option("name", o.experiment, "ri or gsp")->required()->check(CLI::IsMember({"ri", "gsp"}));
  experiment->add_option("--trials", o.trials, "Number of trials");
  experiment->add_option("--seed", o.seed, "Run seed");
  experiment->add_option("--max-n", o.max_n, "Largest market (default 6)");
  experiment->add_option("--max-coalition", o.max_coalition, "Largest coalition (gsp)")->check(CLI::PositiveNumber);
  experiment->add_flag("--records", o.records, "Include per-trial records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*check) return cmd_check(o);
    if (*enumerate) {
      if (enumerate->count("--mode") == 0) o.mode = "strong-core";
      return cmd_enumerate(o);
    }
    if (*qw) return cmd_qw(o);
    if (*ttc) return cmd_ttc(o);
    if (*ilp) return cmd_emit_ilp(o);
    if (*gen) return cmd_gen(o);
    if (*improve) return cmd_improve(o);
    if (*experiment) return cmd_experiment(o);
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    emit(sc::error_to_json(e));
    return e.code() == sc::ErrorCode::InstanceTooLarge ? kTooLarge : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
