#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strongcore/market.hpp"

namespace strongcore {

struct LinearTerm {
  std::string variable;
  std::int64_t coefficient = 0;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct IlpRow {
  std::string name;
  std::vector<LinearTerm> terms;  // merged, in order of first appearance
  RowSense sense = RowSense::LessEqual;
  std::int64_t rhs = 0;

  friend bool operator==(const IlpRow&, const IlpRow&) = default;
};

struct VariableBound {
  std::string variable;
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  friend bool operator==(const VariableBound&, const VariableBound&) = default;
};

/// Feasibility program whose solutions are exactly the strong-core
/// allocations with supporting prices: binary y_i_j per arc of E, integer
/// p_i in [1, n], assignment rows per agent and two price rows per arc.
struct IlpModel {
  std::size_t agent_count = 0;
  std::vector<IlpRow> rows;
  std::vector<VariableBound> bounds;
  std::vector<std::string> binaries;
  std::vector<std::string> generals;

  friend bool operator==(const IlpModel&, const IlpModel&) = default;
};

std::string y_variable(Agent i, Agent j);
std::string p_variable(Agent i);

IlpModel build_ilp(const HousingMarket& market);

/// CPLEX-LP text. Throws IoFailure if the stream goes bad.
void write_lp(const IlpModel& model, std::ostream& out);
std::string write_lp(const IlpModel& model);
/// Reads what write_lp produces (a small LP subset). Throws MalformedDocument.
IlpModel read_lp(std::string_view text);

/// Values of y from `x` and of p from `prices` (indexed by agent).
std::map<std::string, std::int64_t> assignment_values(const HousingMarket& market, const Allocation& x,
                                                      std::span<const int> prices);
bool row_satisfied(const IlpRow& row, const std::map<std::string, std::int64_t>& values);
/// Names of violated rows and bounds.
std::vector<std::string> violated_rows(const IlpModel& model,
                                       const std::map<std::string, std::int64_t>& values);

/// For every allocation, decides price feasibility by building prices from
/// the condensation of its weakly-better digraph and checking every row; true
/// iff the price-feasible allocations are exactly the strong core.
bool validate_ilp_feasible_set(const HousingMarket& market, std::size_t max_agents = 6);

}  // namespace strongcore
