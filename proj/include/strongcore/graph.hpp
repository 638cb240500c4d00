#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "strongcore/market.hpp"

namespace strongcore {

/// Immutable digraph in CSR form. Parallel arcs are merged, loops are kept.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t vertex_count, std::span<const Arc> arcs);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t arc_count() const { return heads_.size(); }
  /// Successors of v in increasing order.
  std::span<const Agent> successors(Agent v) const;
  bool has_arc(Arc arc) const;
  ArcSet arcs() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Agent> heads_;
};

struct SccDecomposition {
  std::vector<std::size_t> component_of;
  /// Members of each component, sorted.
  std::vector<std::vector<Agent>> components;
  /// Arcs between distinct components. Components are indexed in reverse
  /// topological order: every arc goes from a higher to a lower index.
  Digraph condensation;
};

SccDecomposition scc(const Digraph& g);

/// SCCs that no arc leaves, in component-index order.
std::vector<std::vector<Agent>> absorbing_sets(const Digraph& g);
std::vector<std::vector<Agent>> absorbing_sets(const SccDecomposition& d);

/// A directed cycle as its arcs in traversal order.
using Cycle = std::vector<Arc>;

/// Shortest simple cycle starting with `arc` (BFS, successors in index order),
/// or nullopt if arc.head cannot reach arc.tail.
std::optional<Cycle> cycle_through(const Digraph& g, Arc arc);

/// Whether the agents admit an allocation using only `allowed` arcs
/// (perfect matching between tails and heads).
bool has_perfect_matching(std::span<const Agent> agents, std::span<const Arc> allowed);

/// Allocation on `agents` inside `allowed`, or nullopt. Among all such
/// allocations, the lexicographically least under (tail, head) order is returned.
/// Arcs with an endpoint outside `agents` are ignored.
std::optional<ArcSet> perfect_matching_allocation(std::span<const Agent> agents,
                                                  std::span<const Arc> allowed);

/// Calls `visit` for every allocation on `agents` inside `allowed`, in
/// lexicographic order. Stops early when `visit` returns false.
void for_each_perfect_matching(std::span<const Agent> agents, std::span<const Arc> allowed,
                               const std::function<bool(const ArcSet&)>& visit);

}  // namespace strongcore
