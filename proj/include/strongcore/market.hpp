#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace strongcore {

/// Dense agent index, 0..n-1 within one market.
using Agent = std::int32_t;

/// Directed arc (tail gets the house of head).
struct Arc {
  Agent tail = 0;
  Agent head = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Sorted, duplicate-free arc list used wherever an arc *set* is meant.
using ArcSet = std::vector<Arc>;

void normalize(ArcSet& arcs);
bool contains(const ArcSet& arcs, Arc arc);

/// One ordered pair of a strict preference: `better` is strictly preferred to `worse`.
struct StrictPair {
  Agent better = 0;
  Agent worse = 0;

  friend auto operator<=>(const StrictPair&, const StrictPair&) = default;
};

/// A strict partial order over the agents of a market, kept transitively closed.
///
/// Only agents that are strictly preferred to somebody own a bit row, so the
/// footprint is proportional to (#non-minimal agents) * n bits. Sparse markets
/// with long unacceptability lists stay cheap.
class PreferenceRelation {
 public:
  PreferenceRelation() = default;
  explicit PreferenceRelation(std::size_t agent_count);

  /// Builds the transitive closure of `pairs`. Throws CycleInStrictRelation when
  /// the closure is not irreflexive (which also covers antisymmetry).
  static PreferenceRelation from_pairs(std::size_t agent_count,
                                       std::span<const StrictPair> pairs);

  std::size_t agent_count() const { return agent_count_; }

  bool prefers(Agent better, Agent worse) const;
  bool weakly_prefers(Agent b, Agent c) const { return !prefers(c, b); }
  /// Neither b over c nor c over b. Note `indifferent(b, b)` is true.
  bool indifferent(Agent b, Agent c) const { return !prefers(b, c) && !prefers(c, b); }

  /// All pairs of the closed relation, sorted.
  std::vector<StrictPair> pairs() const;
  /// The covering pairs (transitive reduction); their closure is this relation.
  std::vector<StrictPair> covering_pairs() const;
  std::size_t pair_count() const;

  friend bool operator==(const PreferenceRelation& lhs, const PreferenceRelation& rhs);

 private:
  using Row = std::vector<std::uint64_t>;

  const Row* row(Agent better) const;

  std::size_t agent_count_ = 0;
  std::vector<std::int32_t> row_of_;
  std::vector<Row> rows_;
};

/// Agents with one strict partial order each. Acceptability sets and the
/// underlying digraph are derived from the relations at construction.
class HousingMarket {
 public:
  HousingMarket(std::vector<std::string> names, std::vector<PreferenceRelation> prefs);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Agent a) const { return names_[static_cast<std::size_t>(a)]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Agent> find(std::string_view name) const;

  const PreferenceRelation& preferences(Agent a) const {
    return prefs_[static_cast<std::size_t>(a)];
  }

  /// b is strictly preferred to c by a.
  bool prefers(Agent a, Agent b, Agent c) const { return preferences(a).prefers(b, c); }
  bool weakly_prefers(Agent a, Agent b, Agent c) const {
    return preferences(a).weakly_prefers(b, c);
  }
  bool indifferent(Agent a, Agent b, Agent c) const { return preferences(a).indifferent(b, c); }

  /// b is in A(a), i.e. a does not strictly prefer its own house to b.
  bool accepts(Agent a, Agent b) const { return !prefers(a, a, b); }
  /// A(a) in increasing index order; always contains a.
  std::span<const Agent> acceptable(Agent a) const {
    return acceptable_[static_cast<std::size_t>(a)];
  }
  std::size_t arc_count() const;

  friend bool operator==(const HousingMarket& lhs, const HousingMarket& rhs);

 private:
  std::vector<std::string> names_;
  std::vector<PreferenceRelation> prefs_;
  std::vector<std::vector<Agent>> acceptable_;
  std::unordered_map<std::string, Agent> index_;
};

/// Permutation of the agents. Entry a is the agent whose house a receives.
class Allocation {
 public:
  Allocation() = default;
  /// Throws InvalidAllocation unless `targets` is a permutation of 0..n-1.
  explicit Allocation(std::vector<Agent> targets);
  static Allocation from_arcs(std::size_t agent_count, std::span<const Arc> arcs);
  static Allocation identity(std::size_t agent_count);

  std::size_t size() const { return targets_.size(); }
  Agent operator[](Agent a) const { return targets_[static_cast<std::size_t>(a)]; }
  const std::vector<Agent>& targets() const { return targets_; }
  ArcSet arcs() const;

  friend auto operator<=>(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Agent> targets_;
};

/// True iff `x` is a permutation over the market's agents using only arcs of E.
bool is_allocation_of(const HousingMarket& market, const Allocation& x);
/// Throws InvalidAllocation describing the first violation.
void validate_allocation(const HousingMarket& market, const Allocation& x);

/// A market with forbidden and forced arc sets.
class Instance {
 public:
  /// Validates the restrictions (endpoints, membership in E, conflicts).
  Instance(HousingMarket market, ArcSet forbidden = {}, ArcSet forced = {});

  // Rvalue overloads return by value so `const auto& m = load().market()` is safe.
  const HousingMarket& market() const& { return market_; }
  HousingMarket market() && { return std::move(market_); }
  const ArcSet& forbidden() const& { return forbidden_; }
  ArcSet forbidden() && { return std::move(forbidden_); }
  const ArcSet& forced() const& { return forced_; }
  ArcSet forced() && { return std::move(forced_); }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  HousingMarket market_;
  ArcSet forbidden_;
  ArcSet forced_;
};

/// E, including the loop at every agent.
ArcSet underlying_graph(const HousingMarket& market);

/// True iff b is maximal for a among A(a).
bool is_undominated(const HousingMarket& market, Agent a, Agent b);
ArcSet undominated_arcs(const HousingMarket& market);

/// The submarket on `subset`. Agent i of the result is the i-th smallest
/// member of `subset`; names are carried over. Throws EmptySubset.
HousingMarket restrict(const HousingMarket& market, std::span<const Agent> subset);

/// JSON instance document <-> Instance.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& instance);

/// Convenience for building markets in code: per agent, its acceptable agents
/// other than itself are all strictly preferred to it, everyone else is
/// unacceptable, plus any extra pairs.
HousingMarket market_from_acceptability(
    std::vector<std::string> names, const std::vector<std::vector<Agent>>& acceptable,
    const std::vector<std::vector<StrictPair>>& extra = {});

}  // namespace strongcore
