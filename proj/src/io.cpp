#include "strongcore/io.hpp"

namespace strongcore {

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json allocation_to_json(const HousingMarket& market, const Allocation& x) {
  Json doc = Json::object();
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto agent = static_cast<Agent>(a);
    doc[market.name(agent)] = market.name(x[agent]);
  }
  return doc;
}

namespace {

Agent agent_named(const HousingMarket& market, const Json& name) {
  if (!name.is_string()) throw Error(ErrorCode::MalformedDocument, "agent names must be strings");
  const auto found = market.find(name.get<std::string>());
  if (!found) throw Error(ErrorCode::UnknownAgent, "unknown agent '" + name.get<std::string>() + "'");
  return *found;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
  }
}

StrictPair pair_from(const HousingMarket& market, const Json& pair) {
  if (!pair.is_array() || pair.size() != 2) {
    throw Error(ErrorCode::MalformedDocument, "expected a pair [better, worse]");
  }
  return {agent_named(market, pair[0]), agent_named(market, pair[1])};
}

}  // namespace

Allocation parse_allocation(const HousingMarket& market, std::string_view text) {
  Json doc = parse_json(text);
  if (doc.is_object() && doc.contains("allocation")) doc = Json(doc["allocation"]);
  const std::size_t n = market.size();
  std::vector<Agent> targets(n, -1);
  const auto assign = [&](Agent tail, Agent head) {
    if (targets[static_cast<std::size_t>(tail)] != -1) {
      throw Error(ErrorCode::InvalidAllocation, "agent '" + market.name(tail) + "' is assigned twice");
    }
    targets[static_cast<std::size_t>(tail)] = head;
  };
  if (doc.is_object()) {
    for (const auto& [tail, head] : doc.items()) assign(agent_named(market, Json(tail)), agent_named(market, head));
  } else if (doc.is_array()) {
    for (const Json& pair : doc) {
      if (!pair.is_array() || pair.size() != 2) {
        throw Error(ErrorCode::MalformedDocument, "allocation entries must be [tail, head]");
      }
      assign(agent_named(market, pair[0]), agent_named(market, pair[1]));
    }
  } else {
    throw Error(ErrorCode::MalformedDocument, "an allocation is an object or a list of pairs");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (targets[a] == -1) {
      throw Error(ErrorCode::InvalidAllocation, "agent '" + market.name(static_cast<Agent>(a)) + "' has no house");
    }
  }
  Allocation x(std::move(targets));
  validate_allocation(market, x);
  return x;
}

Json arcs_to_json(const HousingMarket& market, const ArcSet& arcs) {
  Json list = Json::array();
  for (const Arc& arc : arcs) list.push_back({market.name(arc.tail), market.name(arc.head)});
  return list;
}

Json agents_to_json(const HousingMarket& market, std::span<const Agent> agents) {
  Json list = Json::array();
  for (Agent a : agents) list.push_back(market.name(a));
  return list;
}

Json certificate_to_json(const HousingMarket& market, const Certificate& cert) {
  Json doc;
  doc["kind"] = std::string(to_string(cert.kind));
  if (cert.kind == CertificateKind::PriceVector) {
    Json prices = Json::object();
    for (std::size_t a = 0; a < cert.prices.size(); ++a) prices[market.name(static_cast<Agent>(a))] = cert.prices[a];
    doc["prices"] = std::move(prices);
  } else if (cert.kind != CertificateKind::None) {
    doc["cycle"] = arcs_to_json(market, cert.cycle);
  }
  return doc;
}

Json trace_to_json(const HousingMarket& market, const SolveTrace& trace) {
  Json rounds = Json::array();
  for (const RoundTrace& round : trace.rounds) {
    Json r;
    r["agents"] = agents_to_json(market, round.agents);
    Json components = Json::array();
    for (const auto& comp : round.components) components.push_back(agents_to_json(market, comp));
    r["components"] = std::move(components);
    r["initial_family"] = round.initial_family;
    Json iterations = Json::array();
    for (const IterationTrace& it : round.iterations) {
      iterations.push_back({{"tstar", agents_to_json(market, it.tstar)}, {"removed", it.removed}});
    }
    r["iterations"] = std::move(iterations);
    r["final_family"] = round.final_family;
    r["tstar"] = agents_to_json(market, round.tstar);
    Json chosen = Json::array();
    for (const ArcSet& arcs : round.chosen) chosen.push_back(arcs_to_json(market, arcs));
    r["chosen"] = std::move(chosen);
    rounds.push_back(std::move(r));
  }
  Json doc;
  doc["rounds"] = std::move(rounds);
  if (!trace.empty_reason.empty()) doc["empty_reason"] = trace.empty_reason;
  return doc;
}

Json ri_report_to_json(const HousingMarket& market, const RiReport& report) {
  const auto allocations = [&](const std::vector<Allocation>& list) {
    Json out = Json::array();
    for (const Allocation& x : list) out.push_back(allocation_to_json(market, x));
    return out;
  };
  Json violations = Json::array();
  for (const RiViolation& v : report.violations) {
    violations.push_back({{"before", allocation_to_json(market, v.before)},
                          {"after", allocation_to_json(market, v.after)}});
  }
  Json doc;
  doc["p"] = market.name(report.p);
  doc["passed"] = report.passed();
  doc["strong_core_before"] = allocations(report.core_before);
  doc["strong_core_after"] = allocations(report.core_after);
  doc["p_strictly_improves"] = report.p_strictly_improves;
  doc["became_empty"] = report.became_empty;
  doc["violations"] = std::move(violations);
  return doc;
}

Json report_to_json(const ExperimentReport& report, bool with_records) {
  Json doc;
  doc["experiment"] = report.experiment;
  doc["seed"] = report.seed;
  doc["trials"] = report.trials;
  doc["failures"] = report.failures;
  if (report.experiment == "ri") doc["p_strictly_improved"] = report.nontrivial;
  if (report.experiment == "gsp") doc["outcome_changed"] = report.nontrivial;
  if (with_records) {
    Json records = Json::array();
    for (const TrialRecord& r : report.records) {
      Json rec;
      rec["index"] = r.index;
      rec["seed"] = r.seed;
      if (!r.generator.empty()) rec["generator"] = r.generator;
      rec["n"] = r.n;
      rec["passed"] = r.passed;
      rec["detail"] = r.detail;
      records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
  }
  return doc;
}

Json error_to_json(const Error& error) {
  Json doc;
  doc["error"] = std::string(to_string(error.code()));
  doc["message"] = error.what();
  return doc;
}

std::vector<ImprovementStep> parse_improvement_steps(const HousingMarket& market, std::string_view text) {
  Json doc = parse_json(text);
  if (doc.is_object() && doc.contains("steps")) doc = Json(doc["steps"]);
  if (!doc.is_array()) throw Error(ErrorCode::MalformedDocument, "improvement steps must be a list");
  std::vector<ImprovementStep> steps;
  for (const Json& entry : doc) {
    if (!entry.is_object() || !entry.contains("p") || !entry.contains("q")) {
      throw Error(ErrorCode::MalformedDocument, "each step needs \"p\" and \"q\"");
    }
    ImprovementStep step;
    step.p = agent_named(market, entry["p"]);
    step.q = agent_named(market, entry["q"]);
    for (const char* key : {"remove", "add"}) {
      if (!entry.contains(key)) continue;
      if (!entry[key].is_array()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be a list");
      auto& target = std::string_view(key) == "remove" ? step.remove : step.add;
      for (const Json& pair : entry[key]) target.push_back(pair_from(market, pair));
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace strongcore
