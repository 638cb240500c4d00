#include "strongcore/scfa.hpp"

#include <algorithm>

#include "strongcore/errors.hpp"
#include "strongcore/graph.hpp"

namespace strongcore {

namespace {

class ForbiddenIndex {
 public:
  ForbiddenIndex(std::size_t n, const ArcSet& forbidden) : heads_(n) {
    for (const Arc& arc : forbidden) {
      if (arc.tail < 0 || static_cast<std::size_t>(arc.tail) >= n) continue;
      heads_[static_cast<std::size_t>(arc.tail)].push_back(arc.head);
    }
    for (auto& list : heads_) std::sort(list.begin(), list.end());
  }

  bool contains(Agent tail, Agent head) const {
    const auto& list = heads_[static_cast<std::size_t>(tail)];
    return std::binary_search(list.begin(), list.end(), head);
  }

 private:
  std::vector<std::vector<Agent>> heads_;
};

/// The market restricted to the agents flagged in `active`, without copying
/// the preference relations.
class Submarket {
 public:
  Submarket(const HousingMarket& market, std::vector<Agent> agents)
      : market_(market), agents_(std::move(agents)), active_(market.size(), false) {
    for (Agent a : agents_) active_[static_cast<std::size_t>(a)] = true;
  }

  const HousingMarket& market() const { return market_; }
  const std::vector<Agent>& agents() const { return agents_; }
  bool active(Agent a) const { return active_[static_cast<std::size_t>(a)]; }

  bool undominated(Agent a, Agent b) const {
    for (Agent other : market_.acceptable(a)) {
      if (active(other) && market_.prefers(a, other, b)) return false;
    }
    return true;
  }

  /// Undominated heads of a inside the submarket, sorted.
  std::vector<Agent> undominated_heads(Agent a) const {
    std::vector<Agent> out;
    for (Agent b : market_.acceptable(a)) {
      if (active(b) && undominated(a, b)) out.push_back(b);
    }
    return out;
  }

 private:
  const HousingMarket& market_;
  std::vector<Agent> agents_;
  std::vector<bool> active_;
};

/// E_{S,T}: undominated non-forbidden arcs inside `component` that beat every
/// arc from their tail leaving the T* set flagged in `in_tstar`.
ArcSet valid_arcs(const Submarket& sub, const std::vector<std::vector<Agent>>& undominated,
                  std::span<const Agent> component, const std::vector<bool>& in_component,
                  const std::vector<bool>& in_tstar, const ForbiddenIndex& forbidden) {
  const HousingMarket& market = sub.market();
  ArcSet out;
  std::vector<Agent> leaving;
  for (Agent a : component) {
    leaving.clear();
    for (Agent b : market.acceptable(a)) {
      if (sub.active(b) && !in_tstar[static_cast<std::size_t>(b)]) leaving.push_back(b);
    }
    for (Agent b : undominated[static_cast<std::size_t>(a)]) {
      if (!in_component[static_cast<std::size_t>(b)] || forbidden.contains(a, b)) continue;
      const bool beats_all = std::all_of(leaving.begin(), leaving.end(),
                                         [&](Agent other) { return market.prefers(a, b, other); });
      if (beats_all) out.push_back({a, b});
    }
  }
  return out;
}

struct RoundOutcome {
  RoundTrace trace;
  /// E_{S,T} for each member of trace.final_family, same order.
  std::vector<ArcSet> valid;
  bool success = false;
};

/// Runs one recursion level on `agents`. `store` selects whether the
/// lexicographically least allocation is stored per surviving component.
RoundOutcome run_round(const HousingMarket& market, std::vector<Agent> agents,
                       const ForbiddenIndex& forbidden, bool store) {
  RoundOutcome out;
  out.trace.agents = agents;

  if (agents.size() == 1) {
    const Agent a = agents.front();
    out.trace.components = {{a}};
    if (!forbidden.contains(a, a)) {
      out.trace.initial_family = {0};
      out.trace.final_family = {0};
      out.trace.tstar = {a};
      out.valid = {{{a, a}}};
      if (store) out.trace.chosen = out.valid;
      out.success = true;
    }
    return out;
  }

  const Submarket sub(market, std::move(agents));
  const std::size_t n = market.size();
  const auto& members = sub.agents();

  std::vector<Agent> local(n, -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[static_cast<std::size_t>(members[i])] = static_cast<Agent>(i);
  }
  std::vector<std::vector<Agent>> undominated(n);
  ArcSet local_arcs;
  for (Agent a : members) {
    auto heads = sub.undominated_heads(a);
    for (Agent b : heads) {
      local_arcs.push_back({local[static_cast<std::size_t>(a)], local[static_cast<std::size_t>(b)]});
    }
    undominated[static_cast<std::size_t>(a)] = std::move(heads);
  }

  const SccDecomposition d = scc(Digraph(members.size(), local_arcs));
  auto& components = out.trace.components;
  components.reserve(d.components.size());
  for (const auto& comp : d.components) {
    std::vector<Agent> global;
    global.reserve(comp.size());
    for (Agent v : comp) global.push_back(members[static_cast<std::size_t>(v)]);
    components.push_back(std::move(global));  // stays sorted: local order is global order
  }

  std::vector<bool> in_component(n, false);
  const auto mark = [&](std::size_t c, bool value) {
    for (Agent a : components[c]) in_component[static_cast<std::size_t>(a)] = value;
  };

  std::vector<bool> all(n, true);
  std::vector<std::size_t> family;
  for (std::size_t c = 0; c < components.size(); ++c) {
    mark(c, true);
    // With T* = N no arc leaves, so E_{S,T} degenerates to E_S.
    const ArcSet e_s = valid_arcs(sub, undominated, components[c], in_component, all, forbidden);
    mark(c, false);
    if (has_perfect_matching(components[c], e_s)) family.push_back(c);
  }
  out.trace.initial_family = family;

  // E_{S,T} only shrinks as T* shrinks; a repeat of the previous arc set can
  // reuse the previous matching verdict.
  std::vector<ArcSet> cached(components.size());
  std::vector<int> cached_ok(components.size(), -1);
  std::vector<bool> in_tstar(n, false);

  while (!family.empty()) {
    std::fill(in_tstar.begin(), in_tstar.end(), false);
    IterationTrace iteration;
    for (std::size_t c : family) {
      for (Agent a : components[c]) {
        in_tstar[static_cast<std::size_t>(a)] = true;
        iteration.tstar.push_back(a);
      }
    }
    std::sort(iteration.tstar.begin(), iteration.tstar.end());

    std::vector<ArcSet> valid;
    valid.reserve(family.size());
    for (std::size_t c : family) {
      mark(c, true);
      ArcSet e_st = valid_arcs(sub, undominated, components[c], in_component, in_tstar, forbidden);
      mark(c, false);
      if (cached_ok[c] < 0 || e_st != cached[c]) {
        cached_ok[c] = has_perfect_matching(components[c], e_st) ? 1 : 0;
        cached[c] = e_st;
      }
      if (cached_ok[c] == 0) iteration.removed.push_back(c);
      valid.push_back(std::move(e_st));
    }

    const bool none_removed = iteration.removed.empty();
    const std::vector<std::size_t> removed = iteration.removed;
    out.trace.tstar = iteration.tstar;
    out.trace.iterations.push_back(std::move(iteration));
    if (none_removed) {
      out.trace.final_family = family;
      if (store) {
        for (std::size_t i = 0; i < family.size(); ++i) {
          out.trace.chosen.push_back(*perfect_matching_allocation(components[family[i]], valid[i]));
        }
      }
      out.valid = std::move(valid);
      out.success = true;
      return out;
    }
    std::erase_if(family, [&](std::size_t c) {
      return std::find(removed.begin(), removed.end(), c) != removed.end();
    });
  }
  out.trace.tstar.clear();
  return out;
}

std::vector<Agent> remaining_after(const std::vector<Agent>& agents, const std::vector<Agent>& tstar) {
  std::vector<Agent> rest;
  std::set_difference(agents.begin(), agents.end(), tstar.begin(), tstar.end(),
                      std::back_inserter(rest));
  return rest;
}

std::vector<Agent> all_agents(std::size_t n) {
  std::vector<Agent> agents(n);
  for (std::size_t i = 0; i < n; ++i) agents[i] = static_cast<Agent>(i);
  return agents;
}

}  // namespace

ArcSet tstar_valid_arcs(const HousingMarket& market, std::span<const Agent> component,
                        std::span<const Agent> tstar, const ArcSet& forbidden) {
  const std::size_t n = market.size();
  const Submarket sub(market, all_agents(n));
  std::vector<std::vector<Agent>> undominated(n);
  std::vector<bool> in_component(n, false);
  std::vector<bool> in_tstar(n, false);
  std::vector<Agent> comp(component.begin(), component.end());
  std::sort(comp.begin(), comp.end());
  for (Agent a : comp) {
    in_component[static_cast<std::size_t>(a)] = true;
    undominated[static_cast<std::size_t>(a)] = sub.undominated_heads(a);
  }
  for (Agent a : tstar) in_tstar[static_cast<std::size_t>(a)] = true;
  return valid_arcs(sub, undominated, comp, in_component, in_tstar, ForbiddenIndex(n, forbidden));
}

SolveResult solve_scfa(const HousingMarket& market, const ArcSet& forbidden) {
  SolveResult result;
  const std::size_t n = market.size();
  const ForbiddenIndex index(n, forbidden);
  std::vector<Agent> targets(n, -1);
  std::vector<Agent> agents = all_agents(n);

  while (!agents.empty()) {
    RoundOutcome round = run_round(market, agents, index, /*store=*/true);
    const std::size_t number = result.trace.rounds.size() + 1;
    if (!round.success) {
      result.trace.empty_reason =
          agents.size() == 1
              ? "round " + std::to_string(number) + ": the loop of the only remaining agent is forbidden"
              : "round " + std::to_string(number) + ": no component admits a T*-valid allocation";
      result.trace.rounds.push_back(std::move(round.trace));
      return result;
    }
    for (const ArcSet& part : round.trace.chosen) {
      for (const Arc& arc : part) targets[static_cast<std::size_t>(arc.tail)] = arc.head;
    }
    agents = remaining_after(agents, round.trace.tstar);
    result.trace.rounds.push_back(std::move(round.trace));
  }
  result.allocation = Allocation(std::move(targets));
  return result;
}

SolveResult solve_scfa(const Instance& instance) {
  if (!instance.forced().empty()) {
    throw Error(ErrorCode::ConflictingRestriction,
                "instance has forced arcs; use solve_scffa");
  }
  return solve_scfa(instance.market(), instance.forbidden());
}

ArcSet reduce_forced_arcs(const Instance& instance) {
  ArcSet forbidden = instance.forbidden();
  for (const Arc& forced : instance.forced()) {
    for (Agent b : instance.market().acceptable(forced.tail)) {
      if (b != forced.head) forbidden.push_back({forced.tail, b});
    }
  }
  normalize(forbidden);
  return forbidden;
}

SolveResult solve_scffa(const Instance& instance) {
  return solve_scfa(instance.market(), reduce_forced_arcs(instance));
}

std::vector<Allocation> enumerate_scfa_outputs(const HousingMarket& market, const ArcSet& forbidden,
                                               std::size_t max_agents) {
  const std::size_t n = market.size();
  if (n > max_agents) {
    throw Error(ErrorCode::InstanceTooLarge, "enumeration is limited to " +
                                                 std::to_string(max_agents) + " agents, got " +
                                                 std::to_string(n));
  }
  const ForbiddenIndex index(n, forbidden);
  // The agent sets removed per round do not depend on which allocations were
  // stored, so the outputs are the product of the per-component choices.
  std::vector<std::vector<ArcSet>> choices;
  std::vector<Agent> agents = all_agents(n);
  while (!agents.empty()) {
    RoundOutcome round = run_round(market, agents, index, /*store=*/false);
    if (!round.success) return {};
    for (std::size_t i = 0; i < round.trace.final_family.size(); ++i) {
      std::vector<ArcSet> options;
      for_each_perfect_matching(round.trace.components[round.trace.final_family[i]], round.valid[i],
                                [&](const ArcSet& m) {
                                  options.push_back(m);
                                  return true;
                                });
      choices.push_back(std::move(options));
    }
    agents = remaining_after(agents, round.trace.tstar);
  }

  std::vector<Allocation> outputs;
  std::vector<std::size_t> pick(choices.size(), 0);
  std::vector<Agent> targets(n, -1);
  while (true) {
    for (std::size_t i = 0; i < choices.size(); ++i) {
      for (const Arc& arc : choices[i][pick[i]]) targets[static_cast<std::size_t>(arc.tail)] = arc.head;
    }
    outputs.emplace_back(targets);
    std::size_t i = 0;
    while (i < choices.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == choices.size()) break;
  }
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  return outputs;
}

std::vector<Allocation> enumerate_scfa_outputs(const Instance& instance, std::size_t max_agents) {
  return enumerate_scfa_outputs(instance.market(), reduce_forced_arcs(instance), max_agents);
}

}  // namespace strongcore
