#include "strongcore/verification.hpp"

#include <algorithm>

#include "strongcore/errors.hpp"

namespace strongcore {

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::None: return "None";
    case CertificateKind::WeakBlockingCycle: return "WeakBlockingCycle";
    case CertificateKind::StrictBlockingCycle: return "StrictBlockingCycle";
    case CertificateKind::PriceVector: return "PriceVector";
  }
  return "None";
}

PreferenceSplitGraphs split_graphs(const HousingMarket& market, const Allocation& x) {
  validate_allocation(market, x);
  PreferenceSplitGraphs out;
  for (std::size_t i = 0; i < market.size(); ++i) {
    const auto a = static_cast<Agent>(i);
    for (Agent b : market.acceptable(a)) {
      if (market.prefers(a, b, x[a])) {
        out.better.push_back({a, b});
        out.weakly_better.push_back({a, b});
      } else if (!market.prefers(a, x[a], b)) {
        out.indifferent.push_back({a, b});
        out.weakly_better.push_back({a, b});
      }
    }
  }
  return out;
}

namespace {

Cycle rotate_to_smallest_tail(Cycle cycle) {
  const auto first = std::min_element(cycle.begin(), cycle.end(),
                                      [](const Arc& l, const Arc& r) { return l.tail < r.tail; });
  std::rotate(cycle.begin(), first, cycle.end());
  return cycle;
}

/// First arc of `candidates` (sorted) closing a cycle in `graph`.
Certificate cycle_certificate(std::size_t n, const ArcSet& graph_arcs, const ArcSet& candidates,
                              CertificateKind kind) {
  const Digraph graph(n, graph_arcs);
  const SccDecomposition d = scc(graph);
  for (const Arc& arc : candidates) {
    if (d.component_of[static_cast<std::size_t>(arc.tail)] !=
        d.component_of[static_cast<std::size_t>(arc.head)]) {
      continue;
    }
    Certificate cert;
    cert.kind = kind;
    cert.cycle = rotate_to_smallest_tail(*cycle_through(graph, arc));
    return cert;
  }
  return {};
}

}  // namespace

Certificate find_weak_blocking_cycle(const HousingMarket& market, const Allocation& x) {
  const PreferenceSplitGraphs split = split_graphs(market, x);
  return cycle_certificate(market.size(), split.weakly_better, split.better,
                           CertificateKind::WeakBlockingCycle);
}

Certificate find_strict_blocking_cycle(const HousingMarket& market, const Allocation& x) {
  const PreferenceSplitGraphs split = split_graphs(market, x);
  return cycle_certificate(market.size(), split.better, split.better,
                           CertificateKind::StrictBlockingCycle);
}

bool in_strong_core(const HousingMarket& market, const Allocation& x) {
  return find_weak_blocking_cycle(market, x).kind == CertificateKind::None;
}

bool in_core(const HousingMarket& market, const Allocation& x) {
  return find_strict_blocking_cycle(market, x).kind == CertificateKind::None;
}

std::vector<std::vector<Agent>> peak_sets(const HousingMarket& market, const Allocation& x) {
  const PreferenceSplitGraphs split = split_graphs(market, x);
  return absorbing_sets(Digraph(market.size(), split.weakly_better));
}

std::optional<PeakSetWitness> check_peakset_characterization(const HousingMarket& market,
                                                             const Allocation& x) {
  const std::size_t n = market.size();
  for (const auto& peak : peak_sets(market, x)) {
    std::vector<bool> inside(n, false);
    for (Agent a : peak) inside[static_cast<std::size_t>(a)] = true;

    PeakSetWitness witness;
    witness.peak_set = peak;
    bool ok = true;
    for (Agent a : peak) {
      const Agent target = x[a];
      // Inside part: an allocation on S made of undominated arcs.
      if (!inside[static_cast<std::size_t>(target)] || !is_undominated(market, a, target)) {
        ok = false;
        break;
      }
      witness.inside.push_back({a, target});
      // Every arc of E leaving S is dominated by the arc of x at its tail.
      for (Agent b : market.acceptable(a)) {
        if (!inside[static_cast<std::size_t>(b)] && !market.prefers(a, target, b)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;

    std::vector<Agent> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (!inside[i]) rest.push_back(static_cast<Agent>(i));
    }
    if (!rest.empty()) {
      // rest is sorted, so local index i of the submarket is rest[i].
      const HousingMarket sub = restrict(market, rest);
      std::vector<Agent> local(n, -1);
      for (std::size_t i = 0; i < rest.size(); ++i) local[static_cast<std::size_t>(rest[i])] = static_cast<Agent>(i);
      std::vector<Agent> targets;
      for (Agent a : rest) targets.push_back(local[static_cast<std::size_t>(x[a])]);
      if (!in_strong_core(sub, Allocation(std::move(targets)))) continue;
      for (Agent a : rest) witness.outside.push_back({a, x[a]});
    }
    return witness;
  }
  return std::nullopt;
}

Certificate price_certificate(const HousingMarket& market, const Allocation& x) {
  const PreferenceSplitGraphs split = split_graphs(market, x);
  const SccDecomposition d = scc(Digraph(market.size(), split.weakly_better));
  for (const Arc& arc : split.better) {
    if (d.component_of[static_cast<std::size_t>(arc.tail)] ==
        d.component_of[static_cast<std::size_t>(arc.head)]) {
      throw Error(ErrorCode::NotInStrongCore,
                  "arc (" + market.name(arc.tail) + "," + market.name(arc.head) +
                      ") lies on a weakly blocking cycle; no prices exist");
    }
  }
  // Components come in reverse topological order, so counting down from the
  // component count gives strictly larger prices along every inter-component arc.
  Certificate cert;
  cert.kind = CertificateKind::PriceVector;
  const auto count = static_cast<int>(d.components.size());
  cert.prices.resize(market.size());
  for (std::size_t a = 0; a < market.size(); ++a) {
    cert.prices[a] = count - static_cast<int>(d.component_of[a]);
  }
  return cert;
}

bool prices_certify(const HousingMarket& market, const Allocation& x, std::span<const int> prices) {
  const auto n = static_cast<int>(market.size());
  if (prices.size() != market.size()) return false;
  if (std::any_of(prices.begin(), prices.end(), [n](int p) { return p < 1 || p > n; })) return false;
  const PreferenceSplitGraphs split = split_graphs(market, x);
  const auto price = [&](Agent a) { return prices[static_cast<std::size_t>(a)]; };
  for (const Arc& arc : split.better) {
    if (!(price(arc.tail) < price(arc.head))) return false;
  }
  for (const Arc& arc : split.weakly_better) {
    if (!(price(arc.tail) <= price(arc.head))) return false;
  }
  return true;
}

bool incomparability_audit(const HousingMarket& market, std::span<const Allocation> allocations) {
  for (std::size_t i = 0; i < allocations.size(); ++i) {
    for (std::size_t j = i + 1; j < allocations.size(); ++j) {
      for (std::size_t a = 0; a < market.size(); ++a) {
        const auto agent = static_cast<Agent>(a);
        const Agent left = allocations[i][agent];
        const Agent right = allocations[j][agent];
        if (left != right && !market.indifferent(agent, left, right)) return false;
      }
    }
  }
  return true;
}

}  // namespace strongcore
