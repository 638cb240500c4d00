#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongcore/market.hpp"

namespace strongcore {

/// One pass of the inner loop: the T* snapshot and the components that had
/// no T*-valid allocation under it.
struct IterationTrace {
  std::vector<Agent> tstar;
  std::vector<std::size_t> removed;  // indices into RoundTrace::components
};

/// One recursion level of the solver, over the agents still in the market.
struct RoundTrace {
  std::vector<Agent> agents;
  /// SCCs of the undominated-arc digraph of the current submarket.
  std::vector<std::vector<Agent>> components;
  /// Components admitting an allocation of undominated, non-forbidden arcs.
  std::vector<std::size_t> initial_family;
  std::vector<IterationTrace> iterations;
  /// Surviving family when the loop ended with nothing removed (empty on failure).
  std::vector<std::size_t> final_family;
  std::vector<Agent> tstar;
  /// Allocation stored for each member of final_family, same order.
  std::vector<ArcSet> chosen;
};

struct SolveTrace {
  std::vector<RoundTrace> rounds;
  /// Set when the solver reports that no solution exists.
  std::string empty_reason;
};

struct SolveResult {
  std::optional<Allocation> allocation;
  SolveTrace trace;
};

/// Arcs (a,b) within `component` that are undominated in `market`, not
/// forbidden, and strictly better for a than every arc from a leaving `tstar`.
ArcSet tstar_valid_arcs(const HousingMarket& market, std::span<const Agent> component,
                        std::span<const Agent> tstar, const ArcSet& forbidden);

/// Strong-core allocation avoiding `forbidden`, or nullopt when none exists.
/// The free choice of a valid allocation per component is resolved by taking
/// the lexicographically least one.
SolveResult solve_scfa(const HousingMarket& market, const ArcSet& forbidden);
/// Same, for an instance without forced arcs (throws ConflictingRestriction otherwise).
SolveResult solve_scfa(const Instance& instance);

/// Forbidden arcs equivalent to the instance's forced and forbidden arcs:
/// every other arc leaving the tail of a forced arc becomes forbidden.
ArcSet reduce_forced_arcs(const Instance& instance);

/// Forced and forbidden arcs, via reduce_forced_arcs and solve_scfa.
SolveResult solve_scffa(const Instance& instance);

inline constexpr std::size_t kDefaultEnumerationLimit = 8;

/// Every allocation the solver can return under some choice of stored
/// allocations, sorted. Forced arcs are reduced first. Throws
/// InstanceTooLarge above `max_agents`.
std::vector<Allocation> enumerate_scfa_outputs(const Instance& instance,
                                               std::size_t max_agents = kDefaultEnumerationLimit);
std::vector<Allocation> enumerate_scfa_outputs(const HousingMarket& market, const ArcSet& forbidden,
                                               std::size_t max_agents = kDefaultEnumerationLimit);

}  // namespace strongcore
