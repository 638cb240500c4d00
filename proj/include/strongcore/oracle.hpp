#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "strongcore/market.hpp"

namespace strongcore {

/// Desk-scale bound for exhaustive routines: 8, unless the environment
/// variable STRONGCORE_MAX_ORACLE_N holds a positive integer.
std::size_t default_oracle_limit();

/// Visits every allocation of the market in lexicographic order of the
/// assignment vector. Stops early when `visit` returns false.
void for_each_allocation(const HousingMarket& market,
                         const std::function<bool(const Allocation&)>& visit,
                         std::size_t max_agents = default_oracle_limit());

std::vector<Allocation> enumerate_allocations(const HousingMarket& market,
                                              std::size_t max_agents = default_oracle_limit());

/// Allocations avoiding `forbidden` with no weakly blocking cycle.
std::vector<Allocation> strong_core_set(const HousingMarket& market, const ArcSet& forbidden = {},
                                        std::size_t max_agents = default_oracle_limit());
/// Allocations avoiding `forbidden` with no strictly blocking cycle.
std::vector<Allocation> core_set(const HousingMarket& market, const ArcSet& forbidden = {},
                                 std::size_t max_agents = default_oracle_limit());

/// Incomparability of the relation is transitive.
bool is_weak_order(const PreferenceRelation& relation);

/// Recursive absorbing-set algorithm for weak-order markets. Takes the
/// lowest-index absorbing set each time. Throws NotAWeakOrder.
std::optional<Allocation> quint_wako_weak(const HousingMarket& market, const ArcSet& forbidden = {});

/// Top trading cycles on undominated arcs: in each round the lexicographically
/// least simple cycle of the undominated-arc digraph of the remaining agents
/// trades and leaves. The result is in the core.
Allocation ttc_core(const HousingMarket& market);

}  // namespace strongcore
