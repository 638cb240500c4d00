#include "strongcore/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "strongcore/errors.hpp"
#include "strongcore/graph.hpp"
#include "strongcore/verification.hpp"

namespace strongcore {

std::size_t default_oracle_limit() {
  constexpr std::size_t kDefault = 8;
  const char* env = std::getenv("STRONGCORE_MAX_ORACLE_N");
  if (env == nullptr) return kDefault;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
  if (ec != std::errc() || value == 0) return kDefault;
  return value;
}

void for_each_allocation(const HousingMarket& market,
                         const std::function<bool(const Allocation&)>& visit,
                         std::size_t max_agents) {
  const std::size_t n = market.size();
  if (n > max_agents) {
    throw Error(ErrorCode::InstanceTooLarge, "exhaustive enumeration is limited to " +
                                                 std::to_string(max_agents) + " agents, got " +
                                                 std::to_string(n));
  }
  std::vector<Agent> targets(n, -1);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> cursor(n, 0);
  std::size_t a = 0;
  const auto undo = [&](std::size_t agent) {
    taken[static_cast<std::size_t>(targets[agent])] = false;
    targets[agent] = -1;
    ++cursor[agent];
  };
  while (true) {
    if (a == n) {
      if (!visit(Allocation(targets))) return;
      --a;
      undo(a);
      continue;
    }
    const auto options = market.acceptable(static_cast<Agent>(a));
    while (cursor[a] < options.size() && taken[static_cast<std::size_t>(options[cursor[a]])]) {
      ++cursor[a];
    }
    if (cursor[a] == options.size()) {
      cursor[a] = 0;
      if (a == 0) return;
      --a;
      undo(a);
      continue;
    }
    targets[a] = options[cursor[a]];
    taken[static_cast<std::size_t>(targets[a])] = true;
    ++a;
  }
}

std::vector<Allocation> enumerate_allocations(const HousingMarket& market, std::size_t max_agents) {
  std::vector<Allocation> out;
  for_each_allocation(market, [&](const Allocation& x) {
    out.push_back(x);
    return true;
  }, max_agents);
  return out;
}

namespace {

bool avoids(const Allocation& x, const ArcSet& forbidden) {
  return std::none_of(forbidden.begin(), forbidden.end(),
                      [&](const Arc& arc) { return x[arc.tail] == arc.head; });
}

std::vector<Allocation> filter(const HousingMarket& market, const ArcSet& forbidden,
                               std::size_t max_agents,
                               bool (*keep)(const HousingMarket&, const Allocation&)) {
  std::vector<Allocation> out;
  for_each_allocation(market, [&](const Allocation& x) {
    if (avoids(x, forbidden) && keep(market, x)) out.push_back(x);
    return true;
  }, max_agents);
  return out;
}

}  // namespace

std::vector<Allocation> strong_core_set(const HousingMarket& market, const ArcSet& forbidden,
                                        std::size_t max_agents) {
  return filter(market, forbidden, max_agents, &in_strong_core);
}

std::vector<Allocation> core_set(const HousingMarket& market, const ArcSet& forbidden,
                                 std::size_t max_agents) {
  return filter(market, forbidden, max_agents, &in_core);
}

bool is_weak_order(const PreferenceRelation& relation) {
  // Negative transitivity: b > c implies b > d or d > c for every d.
  const auto n = static_cast<Agent>(relation.agent_count());
  for (const StrictPair& p : relation.pairs()) {
    for (Agent d = 0; d < n; ++d) {
      if (!relation.prefers(p.better, d) && !relation.prefers(d, p.worse)) return false;
    }
  }
  return true;
}

std::optional<Allocation> quint_wako_weak(const HousingMarket& market, const ArcSet& forbidden) {
  const std::size_t n = market.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!is_weak_order(market.preferences(static_cast<Agent>(a)))) {
      throw Error(ErrorCode::NotAWeakOrder,
                  "preferences of '" + market.name(static_cast<Agent>(a)) + "' are not a weak order");
    }
  }
  std::vector<bool> remaining(n, true);
  std::vector<Agent> targets(n, -1);
  std::size_t left = n;
  while (left > 0) {
    std::vector<Agent> agents;
    std::vector<Agent> local(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
      if (remaining[a]) {
        local[a] = static_cast<Agent>(agents.size());
        agents.push_back(static_cast<Agent>(a));
      }
    }
    // Undominated arcs of the remaining submarket.
    ArcSet undominated_local;
    ArcSet allowed;
    for (Agent a : agents) {
      for (Agent b : market.acceptable(a)) {
        if (!remaining[static_cast<std::size_t>(b)]) continue;
        bool dominated = false;
        for (Agent other : market.acceptable(a)) {
          if (remaining[static_cast<std::size_t>(other)] && market.prefers(a, other, b)) {
            dominated = true;
            break;
          }
        }
        if (dominated) continue;
        undominated_local.push_back({local[static_cast<std::size_t>(a)], local[static_cast<std::size_t>(b)]});
        if (!contains(forbidden, {a, b})) allowed.push_back({a, b});
      }
    }
    const auto absorbing = absorbing_sets(Digraph(agents.size(), undominated_local));
    std::vector<Agent> chosen;
    for (Agent v : absorbing.front()) chosen.push_back(agents[static_cast<std::size_t>(v)]);
    const auto matching = perfect_matching_allocation(chosen, allowed);
    if (!matching) return std::nullopt;
    for (const Arc& arc : *matching) targets[static_cast<std::size_t>(arc.tail)] = arc.head;
    for (Agent a : chosen) remaining[static_cast<std::size_t>(a)] = false;
    left -= chosen.size();
  }
  return Allocation(std::move(targets));
}

namespace {

/// Can `target` be reached from `from` without entering a blocked vertex?
bool reaches(const std::vector<std::vector<Agent>>& succ, Agent from, Agent target,
             const std::vector<bool>& blocked) {
  std::vector<bool> seen(succ.size(), false);
  std::vector<Agent> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!stack.empty()) {
    const Agent v = stack.back();
    stack.pop_back();
    if (v == target) return true;
    for (Agent w : succ[static_cast<std::size_t>(v)]) {
      if (w == target) return true;
      if (!seen[static_cast<std::size_t>(w)] && !blocked[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

/// Lexicographically least simple cycle, as an arc sequence starting at its
/// smallest agent. Every vertex has an out-arc, so one exists.
std::vector<Arc> least_simple_cycle(const std::vector<std::vector<Agent>>& succ,
                                    const std::vector<bool>& remaining) {
  const std::size_t n = succ.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (!remaining[s]) continue;
    const auto start = static_cast<Agent>(s);
    // Vertices below the start cannot appear on a cycle rotated to start here.
    std::vector<bool> blocked(n, false);
    for (std::size_t v = 0; v < s; ++v) blocked[v] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!remaining[v]) blocked[v] = true;
    }
    std::vector<Arc> cycle;
    Agent v = start;
    bool closed = false;
    while (!closed) {
      if (v != start) blocked[static_cast<std::size_t>(v)] = true;
      bool moved = false;
      for (Agent w : succ[static_cast<std::size_t>(v)]) {
        if (w == start) {
          cycle.push_back({v, w});
          closed = true;
          moved = true;
          break;
        }
        if (blocked[static_cast<std::size_t>(w)] || w < start) continue;
        std::vector<bool> after = blocked;
        after[static_cast<std::size_t>(w)] = true;
        if (!reaches(succ, w, start, after)) continue;
        cycle.push_back({v, w});
        v = w;
        moved = true;
        break;
      }
      if (!moved) break;  // only possible on the very first step
    }
    if (closed) return cycle;
  }
  return {};
}

}  // namespace

Allocation ttc_core(const HousingMarket& market) {
  const std::size_t n = market.size();
  std::vector<bool> remaining(n, true);
  std::vector<Agent> targets(n, -1);
  std::size_t left = n;
  while (left > 0) {
    std::vector<std::vector<Agent>> succ(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!remaining[i]) continue;
      const auto a = static_cast<Agent>(i);
      const auto options = market.acceptable(a);
      for (Agent b : options) {
        if (!remaining[static_cast<std::size_t>(b)]) continue;
        const bool dominated = std::any_of(options.begin(), options.end(), [&](Agent other) {
          return remaining[static_cast<std::size_t>(other)] && market.prefers(a, other, b);
        });
        if (!dominated) succ[i].push_back(b);
      }
    }
    const auto cycle = least_simple_cycle(succ, remaining);
    if (cycle.empty()) throw std::logic_error("ttc_core: no cycle among remaining agents");
    for (const Arc& arc : cycle) {
      targets[static_cast<std::size_t>(arc.tail)] = arc.head;
      remaining[static_cast<std::size_t>(arc.tail)] = false;
      --left;
    }
  }
  return Allocation(std::move(targets));
}

}  // namespace strongcore
