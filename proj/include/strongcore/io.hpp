#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/experiments.hpp"
#include "strongcore/market.hpp"
#include "strongcore/scfa.hpp"
#include "strongcore/verification.hpp"

namespace strongcore {

/// Key order is insertion order, which keeps every document byte-stable.
using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline.
std::string dump(const Json& doc);

/// {"a": "b", ...} in agent order.
Json allocation_to_json(const HousingMarket& market, const Allocation& x);
/// Accepts the object form above or a list of [tail, head] pairs, optionally
/// wrapped as {"allocation": ...}. Throws InvalidAllocation or UnknownAgent.
Allocation parse_allocation(const HousingMarket& market, std::string_view text);

Json arcs_to_json(const HousingMarket& market, const ArcSet& arcs);
Json agents_to_json(const HousingMarket& market, std::span<const Agent> agents);
Json certificate_to_json(const HousingMarket& market, const Certificate& cert);
Json trace_to_json(const HousingMarket& market, const SolveTrace& trace);
Json ri_report_to_json(const HousingMarket& market, const RiReport& report);
Json report_to_json(const ExperimentReport& report, bool with_records = true);
Json error_to_json(const Error& error);

/// Improvement steps as [{"p": "c", "q": "b", "remove": [["b","c"]], "add": [["c","b"]]}].
std::vector<ImprovementStep> parse_improvement_steps(const HousingMarket& market, std::string_view text);

}  // namespace strongcore
