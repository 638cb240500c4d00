#pragma once

#include <optional>
#include <span>
#include <vector>

#include "strongcore/graph.hpp"
#include "strongcore/market.hpp"

namespace strongcore {

/// Arcs of E split by how their tail compares them with its assigned house.
struct PreferenceSplitGraphs {
  ArcSet indifferent;    // b ~_a X(a)
  ArcSet better;         // b >_a X(a)
  ArcSet weakly_better;  // union of the two
};

PreferenceSplitGraphs split_graphs(const HousingMarket& market, const Allocation& x);

enum class CertificateKind { None, WeakBlockingCycle, StrictBlockingCycle, PriceVector };

std::string_view to_string(CertificateKind kind);

struct Certificate {
  CertificateKind kind = CertificateKind::None;
  /// Blocking cycle in traversal order, starting at its smallest tail.
  Cycle cycle;
  /// Price per agent, values in 1..n.
  std::vector<int> prices;
};

/// A cycle in which every agent weakly improves and one strictly improves,
/// or kind None iff `x` is in the strong core. Among candidates the cycle runs
/// through the lexicographically least strictly-improving arc.
Certificate find_weak_blocking_cycle(const HousingMarket& market, const Allocation& x);
/// A cycle in which every agent strictly improves, or None iff `x` is in the core.
Certificate find_strict_blocking_cycle(const HousingMarket& market, const Allocation& x);

bool in_strong_core(const HousingMarket& market, const Allocation& x);
bool in_core(const HousingMarket& market, const Allocation& x);

/// Absorbing sets of the weakly-better digraph of `x`.
std::vector<std::vector<Agent>> peak_sets(const HousingMarket& market, const Allocation& x);

struct PeakSetWitness {
  std::vector<Agent> peak_set;
  ArcSet inside;   // x restricted to the peak set
  ArcSet outside;  // the rest of x
};

/// Tests the peak-set characterization of strong-core membership: some peak
/// set S has x inside S made of undominated arcs, every arc of E leaving S
/// dominated by x, and x outside S in the strong core of the remaining
/// submarket. Returns the first such S.
std::optional<PeakSetWitness> check_peakset_characterization(const HousingMarket& market,
                                                             const Allocation& x);

/// Prices from the condensation of the weakly-better digraph. Throws
/// NotInStrongCore if a weakly blocking cycle exists.
Certificate price_certificate(const HousingMarket& market, const Allocation& x);

/// Checks p_i < p_j on strictly-better arcs, p_i <= p_j on weakly-better
/// arcs, and 1 <= p_i <= n.
bool prices_certify(const HousingMarket& market, const Allocation& x, std::span<const int> prices);

/// Every agent finds every pair of listed allocations incomparable (or gets
/// the same house in both).
bool incomparability_audit(const HousingMarket& market, std::span<const Allocation> allocations);

}  // namespace strongcore
