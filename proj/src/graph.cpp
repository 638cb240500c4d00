#include "strongcore/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace strongcore {

Digraph::Digraph(std::size_t vertex_count, std::span<const Arc> arcs) {
  ArcSet sorted(arcs.begin(), arcs.end());
  normalize(sorted);
  offsets_.assign(vertex_count + 1, 0);
  heads_.reserve(sorted.size());
  for (const Arc& arc : sorted) {
    ++offsets_[static_cast<std::size_t>(arc.tail) + 1];
    heads_.push_back(arc.head);
  }
  for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] += offsets_[v];
}

std::span<const Agent> Digraph::successors(Agent v) const {
  const auto i = static_cast<std::size_t>(v);
  return {heads_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Digraph::has_arc(Arc arc) const {
  const auto succ = successors(arc.tail);
  return std::binary_search(succ.begin(), succ.end(), arc.head);
}

ArcSet Digraph::arcs() const {
  ArcSet out;
  out.reserve(heads_.size());
  for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) {
    for (Agent w : successors(static_cast<Agent>(v))) out.push_back({static_cast<Agent>(v), w});
  }
  return out;
}

// Iterative Tarjan. Roots and successors are visited in index order, so the
// emission order (sinks first) is reproducible.
SccDecomposition scc(const Digraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Agent> stack;
  std::vector<std::pair<Agent, std::size_t>> call;  // vertex, next successor
  std::size_t counter = 0;

  SccDecomposition out;
  out.component_of.assign(n, 0);

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(static_cast<Agent>(root), 0);
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<Agent>(root));
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto vi = static_cast<std::size_t>(v);
      const auto succ = g.successors(v);
      if (next < succ.size()) {
        const Agent w = succ[next++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] == kUnvisited) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[wi]) {
          low[vi] = std::min(low[vi], index[wi]);
        }
        continue;
      }
      if (low[vi] == index[vi]) {
        std::vector<Agent> members;
        Agent w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          out.component_of[static_cast<std::size_t>(w)] = out.components.size();
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        out.components.push_back(std::move(members));
      }
      const std::size_t finished_low = low[vi];
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().first);
        low[parent] = std::min(low[parent], finished_low);
      }
    }
  }

  ArcSet between;
  for (std::size_t v = 0; v < n; ++v) {
    for (Agent w : g.successors(static_cast<Agent>(v))) {
      const std::size_t cv = out.component_of[v];
      const std::size_t cw = out.component_of[static_cast<std::size_t>(w)];
      if (cv != cw) between.push_back({static_cast<Agent>(cv), static_cast<Agent>(cw)});
    }
  }
  out.condensation = Digraph(out.components.size(), between);
  return out;
}

std::vector<std::vector<Agent>> absorbing_sets(const SccDecomposition& d) {
  std::vector<std::vector<Agent>> out;
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    if (d.condensation.successors(static_cast<Agent>(c)).empty()) out.push_back(d.components[c]);
  }
  return out;
}

std::vector<std::vector<Agent>> absorbing_sets(const Digraph& g) { return absorbing_sets(scc(g)); }

std::optional<Cycle> cycle_through(const Digraph& g, Arc arc) {
  if (arc.tail == arc.head) return Cycle{arc};
  const std::size_t n = g.vertex_count();
  std::vector<Agent> parent(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<Agent> queue{arc.head};
  seen[static_cast<std::size_t>(arc.head)] = true;
  while (!queue.empty() && !seen[static_cast<std::size_t>(arc.tail)]) {
    const Agent v = queue.front();
    queue.pop_front();
    for (Agent w : g.successors(v)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      parent[static_cast<std::size_t>(w)] = v;
      queue.push_back(w);
    }
  }
  if (!seen[static_cast<std::size_t>(arc.tail)]) return std::nullopt;
  Cycle path;
  for (Agent v = arc.tail; v != arc.head; v = parent[static_cast<std::size_t>(v)]) {
    path.push_back({parent[static_cast<std::size_t>(v)], v});
  }
  path.push_back(arc);
  std::reverse(path.begin(), path.end());
  // path is now (tail,head), (head,..), ..., (.., tail)
  return path;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

/// Tails and heads are both the agents of a set, indexed locally in sorted order.
struct LocalBipartite {
  std::vector<Agent> agents;
  std::vector<std::vector<int>> adj;       // tail -> sorted heads
  std::vector<std::vector<int>> incoming;  // head -> sorted tails

  LocalBipartite(std::span<const Agent> members, std::span<const Arc> allowed)
      : agents(members.begin(), members.end()) {
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    adj.resize(agents.size());
    incoming.resize(agents.size());
    for (const Arc& arc : allowed) {
      const int t = local(arc.tail);
      const int h = local(arc.head);
      if (t < 0 || h < 0) continue;
      adj[static_cast<std::size_t>(t)].push_back(h);
    }
    for (std::size_t t = 0; t < adj.size(); ++t) {
      auto& list = adj[t];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      for (int h : list) incoming[static_cast<std::size_t>(h)].push_back(static_cast<int>(t));
    }
  }

  int local(Agent a) const {
    const auto it = std::lower_bound(agents.begin(), agents.end(), a);
    if (it == agents.end() || *it != a) return -1;
    return static_cast<int>(it - agents.begin());
  }

  std::size_t size() const { return agents.size(); }

  ArcSet to_arcs(const std::vector<int>& tail_to_head) const {
    ArcSet out;
    out.reserve(agents.size());
    for (std::size_t t = 0; t < agents.size(); ++t) {
      out.push_back({agents[t], agents[static_cast<std::size_t>(tail_to_head[t])]});
    }
    return out;
  }
};

struct Matching {
  std::vector<int> head_of;  // tail -> head or -1
  std::vector<int> tail_of;  // head -> tail or -1
  std::size_t size = 0;
};

Matching hopcroft_karp(const LocalBipartite& g) {
  const std::size_t k = g.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  Matching m{std::vector<int>(k, -1), std::vector<int>(k, -1), 0};
  std::vector<int> dist(k);
  std::vector<std::size_t> it(k);
  std::vector<int> queue;
  std::vector<int> stack;
  queue.reserve(k);

  while (true) {
    queue.clear();
    for (std::size_t u = 0; u < k; ++u) {
      if (m.head_of[u] == -1) {
        dist[u] = 0;
        queue.push_back(static_cast<int>(u));
      } else {
        dist[u] = kInf;
      }
    }
    bool reachable_free = false;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int u = queue[qi];
      for (int h : g.adj[static_cast<std::size_t>(u)]) {
        const int w = m.tail_of[static_cast<std::size_t>(h)];
        if (w == -1) {
          reachable_free = true;
        } else if (dist[static_cast<std::size_t>(w)] == kInf) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    if (!reachable_free) break;

    std::fill(it.begin(), it.end(), 0);
    for (std::size_t root = 0; root < k; ++root) {
      if (m.head_of[root] != -1) continue;
      stack.assign(1, static_cast<int>(root));
      while (!stack.empty()) {
        const auto x = static_cast<std::size_t>(stack.back());
        const auto& out = g.adj[x];
        if (it[x] == out.size()) {
          dist[x] = kInf;
          stack.pop_back();
          if (!stack.empty()) ++it[static_cast<std::size_t>(stack.back())];
          continue;
        }
        const int h = out[it[x]];
        const int w = m.tail_of[static_cast<std::size_t>(h)];
        if (w == -1) {
          for (int v : stack) {
            const auto vi = static_cast<std::size_t>(v);
            const int hv = g.adj[vi][it[vi]];
            m.head_of[vi] = hv;
            m.tail_of[static_cast<std::size_t>(hv)] = v;
          }
          ++m.size;
          break;
        }
        if (dist[static_cast<std::size_t>(w)] == dist[x] + 1) {
          stack.push_back(w);
        } else {
          ++it[x];
        }
      }
    }
  }
  return m;
}

// Turns a perfect matching into the lexicographically least one. Tail t may
// switch to head h iff h's current owner can reach t in the exchange graph
// over unfixed tails (x -> z when x may take z's head); tails are fixed in order.
void make_lexicographically_least(const LocalBipartite& g, Matching& m) {
  const std::size_t k = g.size();
  std::vector<int> next_hop(k);
  std::vector<int> mark(k, -1);
  std::vector<int> queue;
  queue.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    const int current = m.head_of[t];
    if (g.adj[t].front() == current) continue;

    // Reverse BFS from t: which unfixed tails can hand their head down a chain ending at t.
    queue.assign(1, static_cast<int>(t));
    mark[t] = static_cast<int>(t);
    next_hop[t] = -1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int z = queue[qi];
      const int z_head = m.head_of[static_cast<std::size_t>(z)];
      for (int x : g.incoming[static_cast<std::size_t>(z_head)]) {
        const auto xi = static_cast<std::size_t>(x);
        if (xi < t || mark[xi] == static_cast<int>(t)) continue;
        mark[xi] = static_cast<int>(t);
        next_hop[xi] = z;
        queue.push_back(x);
      }
    }

    for (int h : g.adj[t]) {
      if (h == current) break;
      const int owner = m.tail_of[static_cast<std::size_t>(h)];
      if (static_cast<std::size_t>(owner) < t || mark[static_cast<std::size_t>(owner)] != static_cast<int>(t)) {
        continue;
      }
      // Rotate: t takes h, every x on owner -> ... -> t takes its successor's head.
      std::vector<std::pair<int, int>> moves{{static_cast<int>(t), h}};
      for (int x = owner; x != static_cast<int>(t); x = next_hop[static_cast<std::size_t>(x)]) {
        moves.emplace_back(x, m.head_of[static_cast<std::size_t>(next_hop[static_cast<std::size_t>(x)])]);
      }
      for (const auto& [x, head] : moves) {
        m.head_of[static_cast<std::size_t>(x)] = head;
        m.tail_of[static_cast<std::size_t>(head)] = x;
      }
      break;
    }
  }
}

}  // namespace

bool has_perfect_matching(std::span<const Agent> agents, std::span<const Arc> allowed) {
  const LocalBipartite g(agents, allowed);
  return hopcroft_karp(g).size == g.size();
}

std::optional<ArcSet> perfect_matching_allocation(std::span<const Agent> agents,
                                                  std::span<const Arc> allowed) {
  const LocalBipartite g(agents, allowed);
  Matching m = hopcroft_karp(g);
  if (m.size != g.size()) return std::nullopt;
  make_lexicographically_least(g, m);
  return g.to_arcs(m.head_of);
}

void for_each_perfect_matching(std::span<const Agent> agents, std::span<const Arc> allowed,
                               const std::function<bool(const ArcSet&)>& visit) {
  const LocalBipartite g(agents, allowed);
  const std::size_t k = g.size();
  if (hopcroft_karp(g).size != k) return;
  std::vector<int> head_of(k, -1);
  std::vector<bool> used(k, false);
  std::vector<std::size_t> cursor(k, 0);
  std::size_t t = 0;
  // Explicit backtracking over tails in index order.
  while (true) {
    if (t == k) {
      if (!visit(g.to_arcs(head_of))) return;
      if (k == 0) return;
      --t;
      used[static_cast<std::size_t>(head_of[t])] = false;
      head_of[t] = -1;
      ++cursor[t];
      continue;
    }
    const auto& out = g.adj[t];
    while (cursor[t] < out.size() && used[static_cast<std::size_t>(out[cursor[t]])]) ++cursor[t];
    if (cursor[t] == out.size()) {
      cursor[t] = 0;
      if (t == 0) return;
      --t;
      used[static_cast<std::size_t>(head_of[t])] = false;
      head_of[t] = -1;
      ++cursor[t];
      continue;
    }
    head_of[t] = out[cursor[t]];
    used[static_cast<std::size_t>(head_of[t])] = true;
    ++t;
  }
}

}  // namespace strongcore
