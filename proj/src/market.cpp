#include "strongcore/market.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "json.hpp"
#include "strongcore/errors.hpp"

namespace strongcore {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::CycleInStrictRelation: return "CycleInStrictRelation";
    case ErrorCode::ConflictingRestriction: return "ConflictingRestriction";
    case ErrorCode::NonEdgeRestriction: return "NonEdgeRestriction";
    case ErrorCode::InvalidAllocation: return "InvalidAllocation";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::NotAWeakOrder: return "NotAWeakOrder";
    case ErrorCode::NotInStrongCore: return "NotInStrongCore";
    case ErrorCode::NotAnImprovement: return "NotAnImprovement";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

void normalize(ArcSet& arcs) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
}

bool contains(const ArcSet& arcs, Arc arc) {
  return std::binary_search(arcs.begin(), arcs.end(), arc);
}

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

bool test_bit(const std::vector<std::uint64_t>& row, std::size_t i) {
  return (row[i / 64] >> (i % 64)) & 1U;
}

void set_bit(std::vector<std::uint64_t>& row, std::size_t i) {
  row[i / 64] |= std::uint64_t{1} << (i % 64);
}

template <typename F>
void for_each_bit(const std::vector<std::uint64_t>& row, F&& f) {
  for (std::size_t w = 0; w < row.size(); ++w) {
    std::uint64_t word = row[w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      f(static_cast<Agent>(w * 64 + static_cast<std::size_t>(bit)));
      word &= word - 1;
    }
  }
}

void check_agent(std::size_t n, Agent a, std::string_view what) {
  if (a < 0 || static_cast<std::size_t>(a) >= n) {
    std::ostringstream msg;
    msg << what << ": agent index " << a << " out of range for " << n << " agents";
    throw Error(ErrorCode::UnknownAgent, msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PreferenceRelation

PreferenceRelation::PreferenceRelation(std::size_t agent_count)
    : agent_count_(agent_count), row_of_(agent_count, -1) {}

PreferenceRelation PreferenceRelation::from_pairs(std::size_t agent_count,
                                                  std::span<const StrictPair> pairs) {
  PreferenceRelation rel(agent_count);
  std::vector<std::vector<Agent>> succ(agent_count);
  for (const StrictPair& p : pairs) {
    check_agent(agent_count, p.better, "strict pair");
    check_agent(agent_count, p.worse, "strict pair");
    if (p.better == p.worse) {
      throw Error(ErrorCode::CycleInStrictRelation,
                  "strict pair (" + std::to_string(p.better) + "," + std::to_string(p.worse) +
                      ") is reflexive");
    }
    succ[static_cast<std::size_t>(p.better)].push_back(p.worse);
  }

  // Closure by DFS post-order: a vertex's row is final once all successors are.
  enum : std::uint8_t { kNew, kActive, kDone };
  std::vector<std::uint8_t> state(agent_count, kNew);
  const std::size_t words = word_count(agent_count);
  for (std::size_t root = 0; root < agent_count; ++root) {
    if (state[root] != kNew || succ[root].empty()) continue;
    std::vector<std::pair<Agent, std::size_t>> stack{{static_cast<Agent>(root), 0}};
    state[root] = kActive;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& out = succ[static_cast<std::size_t>(v)];
      if (next < out.size()) {
        const Agent w = out[next++];
        const auto ws = static_cast<std::size_t>(w);
        if (state[ws] == kActive) {
          throw Error(ErrorCode::CycleInStrictRelation,
                      "strict relation contains a cycle through agent " + std::to_string(w));
        }
        if (state[ws] == kNew) {
          state[ws] = kActive;
          stack.emplace_back(w, 0);
        }
        continue;
      }
      if (out.empty()) {
        state[static_cast<std::size_t>(v)] = kDone;
        stack.pop_back();
        continue;
      }
      Row row(words, 0);
      for (Agent w : out) {
        set_bit(row, static_cast<std::size_t>(w));
        if (const Row* sub = rel.row(w)) {
          for (std::size_t i = 0; i < words; ++i) row[i] |= (*sub)[i];
        }
      }
      rel.row_of_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(rel.rows_.size());
      rel.rows_.push_back(std::move(row));
      state[static_cast<std::size_t>(v)] = kDone;
      stack.pop_back();
    }
  }
  return rel;
}

const PreferenceRelation::Row* PreferenceRelation::row(Agent better) const {
  const std::int32_t idx = row_of_[static_cast<std::size_t>(better)];
  return idx < 0 ? nullptr : &rows_[static_cast<std::size_t>(idx)];
}

bool PreferenceRelation::prefers(Agent better, Agent worse) const {
  const Row* r = row(better);
  return r != nullptr && test_bit(*r, static_cast<std::size_t>(worse));
}

std::vector<StrictPair> PreferenceRelation::pairs() const {
  std::vector<StrictPair> out;
  for (std::size_t b = 0; b < agent_count_; ++b) {
    if (const Row* r = row(static_cast<Agent>(b))) {
      for_each_bit(*r, [&](Agent c) { out.push_back({static_cast<Agent>(b), c}); });
    }
  }
  return out;
}

std::vector<StrictPair> PreferenceRelation::covering_pairs() const {
  std::vector<StrictPair> out;
  const std::size_t words = word_count(agent_count_);
  for (std::size_t b = 0; b < agent_count_; ++b) {
    const Row* r = row(static_cast<Agent>(b));
    if (r == nullptr) continue;
    Row implied(words, 0);
    for_each_bit(*r, [&](Agent c) {
      if (const Row* sub = row(c)) {
        for (std::size_t i = 0; i < words; ++i) implied[i] |= (*sub)[i];
      }
    });
    for_each_bit(*r, [&](Agent c) {
      if (!test_bit(implied, static_cast<std::size_t>(c))) {
        out.push_back({static_cast<Agent>(b), c});
      }
    });
  }
  return out;
}

std::size_t PreferenceRelation::pair_count() const {
  std::size_t count = 0;
  for (const Row& r : rows_) {
    for (std::uint64_t w : r) count += static_cast<std::size_t>(std::popcount(w));
  }
  return count;
}

bool operator==(const PreferenceRelation& lhs, const PreferenceRelation& rhs) {
  if (lhs.agent_count_ != rhs.agent_count_) return false;
  for (std::size_t b = 0; b < lhs.agent_count_; ++b) {
    const auto* l = lhs.row(static_cast<Agent>(b));
    const auto* r = rhs.row(static_cast<Agent>(b));
    const auto empty = [](const PreferenceRelation::Row* row) {
      return row == nullptr ||
             std::all_of(row->begin(), row->end(), [](std::uint64_t w) { return w == 0; });
    };
    if (l == nullptr || r == nullptr) {
      if (!empty(l) || !empty(r)) return false;
    } else if (*l != *r) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// HousingMarket

HousingMarket::HousingMarket(std::vector<std::string> names, std::vector<PreferenceRelation> prefs)
    : names_(std::move(names)), prefs_(std::move(prefs)) {
  if (names_.size() != prefs_.size()) {
    throw Error(ErrorCode::MalformedDocument, "one preference relation per agent is required");
  }
  const std::size_t n = names_.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (prefs_[a].agent_count() != n) {
      throw Error(ErrorCode::MalformedDocument,
                  "preference relation of agent '" + names_[a] + "' has the wrong size");
    }
    if (!index_.emplace(names_[a], static_cast<Agent>(a)).second) {
      throw Error(ErrorCode::MalformedDocument, "duplicate agent name '" + names_[a] + "'");
    }
  }
  acceptable_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!prefs_[a].prefers(static_cast<Agent>(a), static_cast<Agent>(b))) {
        acceptable_[a].push_back(static_cast<Agent>(b));
      }
    }
  }
}

std::optional<Agent> HousingMarket::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t HousingMarket::arc_count() const {
  std::size_t m = 0;
  for (const auto& list : acceptable_) m += list.size();
  return m;
}

bool operator==(const HousingMarket& lhs, const HousingMarket& rhs) {
  return lhs.names_ == rhs.names_ && lhs.prefs_ == rhs.prefs_;
}

// ---------------------------------------------------------------------------
// Allocation

Allocation::Allocation(std::vector<Agent> targets) : targets_(std::move(targets)) {
  std::vector<bool> seen(targets_.size(), false);
  for (std::size_t a = 0; a < targets_.size(); ++a) {
    const Agent t = targets_[a];
    if (t < 0 || static_cast<std::size_t>(t) >= targets_.size() ||
        seen[static_cast<std::size_t>(t)]) {
      throw Error(ErrorCode::InvalidAllocation,
                  "assignment is not a permutation (agent " + std::to_string(a) + ")");
    }
    seen[static_cast<std::size_t>(t)] = true;
  }
}

Allocation Allocation::from_arcs(std::size_t agent_count, std::span<const Arc> arcs) {
  std::vector<Agent> targets(agent_count, -1);
  for (const Arc& arc : arcs) {
    if (arc.tail < 0 || static_cast<std::size_t>(arc.tail) >= agent_count) {
      throw Error(ErrorCode::InvalidAllocation, "arc tail out of range");
    }
    auto& slot = targets[static_cast<std::size_t>(arc.tail)];
    if (slot != -1) {
      throw Error(ErrorCode::InvalidAllocation,
                  "agent " + std::to_string(arc.tail) + " has two outgoing arcs");
    }
    slot = arc.head;
  }
  if (std::find(targets.begin(), targets.end(), -1) != targets.end()) {
    throw Error(ErrorCode::InvalidAllocation, "some agent has no outgoing arc");
  }
  return Allocation(std::move(targets));
}

Allocation Allocation::identity(std::size_t agent_count) {
  std::vector<Agent> targets(agent_count);
  for (std::size_t a = 0; a < agent_count; ++a) targets[a] = static_cast<Agent>(a);
  return Allocation(std::move(targets));
}

ArcSet Allocation::arcs() const {
  ArcSet out;
  out.reserve(targets_.size());
  for (std::size_t a = 0; a < targets_.size(); ++a) {
    out.push_back({static_cast<Agent>(a), targets_[a]});
  }
  return out;
}

bool is_allocation_of(const HousingMarket& market, const Allocation& x) {
  if (x.size() != market.size()) return false;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (!market.accepts(static_cast<Agent>(a), x[static_cast<Agent>(a)])) return false;
  }
  return true;
}

void validate_allocation(const HousingMarket& market, const Allocation& x) {
  if (x.size() != market.size()) {
    throw Error(ErrorCode::InvalidAllocation, "allocation covers " + std::to_string(x.size()) +
                                                  " agents, market has " +
                                                  std::to_string(market.size()));
  }
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto agent = static_cast<Agent>(a);
    if (!market.accepts(agent, x[agent])) {
      throw Error(ErrorCode::InvalidAllocation, "arc (" + market.name(agent) + "," +
                                                    market.name(x[agent]) +
                                                    ") is not in the underlying graph");
    }
  }
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(HousingMarket market, ArcSet forbidden, ArcSet forced)
    : market_(std::move(market)), forbidden_(std::move(forbidden)), forced_(std::move(forced)) {
  normalize(forbidden_);
  normalize(forced_);
  const std::size_t n = market_.size();
  const auto check = [&](const ArcSet& arcs, std::string_view what) {
    for (const Arc& arc : arcs) {
      check_agent(n, arc.tail, what);
      check_agent(n, arc.head, what);
      if (!market_.accepts(arc.tail, arc.head)) {
        throw Error(ErrorCode::NonEdgeRestriction,
                    std::string(what) + " arc (" + market_.name(arc.tail) + "," +
                        market_.name(arc.head) + ") is not in the underlying graph");
      }
    }
  };
  check(forbidden_, "forbidden");
  check(forced_, "forced");
  for (std::size_t i = 0; i < forced_.size(); ++i) {
    const Arc& arc = forced_[i];
    if (contains(forbidden_, arc)) {
      throw Error(ErrorCode::ConflictingRestriction,
                  "arc (" + market_.name(arc.tail) + "," + market_.name(arc.head) +
                      ") is both forced and forbidden");
    }
    if (i > 0 && forced_[i - 1].tail == arc.tail) {
      throw Error(ErrorCode::ConflictingRestriction,
                  "two forced arcs leave agent " + market_.name(arc.tail));
    }
  }
}

// ---------------------------------------------------------------------------
// Derived graphs

ArcSet underlying_graph(const HousingMarket& market) {
  ArcSet arcs;
  arcs.reserve(market.arc_count());
  for (std::size_t a = 0; a < market.size(); ++a) {
    for (Agent b : market.acceptable(static_cast<Agent>(a))) {
      arcs.push_back({static_cast<Agent>(a), b});
    }
  }
  return arcs;
}

bool is_undominated(const HousingMarket& market, Agent a, Agent b) {
  // Anything preferred to an acceptable b is itself acceptable, so the check
  // only needs to range over A(a).
  for (Agent other : market.acceptable(a)) {
    if (market.prefers(a, other, b)) return false;
  }
  return true;
}

ArcSet undominated_arcs(const HousingMarket& market) {
  ArcSet arcs;
  for (std::size_t a = 0; a < market.size(); ++a) {
    const auto agent = static_cast<Agent>(a);
    for (Agent b : market.acceptable(agent)) {
      if (is_undominated(market, agent, b)) arcs.push_back({agent, b});
    }
  }
  return arcs;
}

HousingMarket restrict(const HousingMarket& market, std::span<const Agent> subset) {
  std::vector<Agent> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw Error(ErrorCode::EmptySubset, "cannot restrict to an empty subset");
  for (Agent a : members) check_agent(market.size(), a, "restrict");

  std::vector<Agent> local(market.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[static_cast<std::size_t>(members[i])] = static_cast<Agent>(i);
  }
  std::vector<std::string> names;
  std::vector<PreferenceRelation> prefs;
  names.reserve(members.size());
  prefs.reserve(members.size());
  for (Agent a : members) {
    names.push_back(market.name(a));
    std::vector<StrictPair> pairs;
    for (const StrictPair& p : market.preferences(a).pairs()) {
      const Agent b = local[static_cast<std::size_t>(p.better)];
      const Agent c = local[static_cast<std::size_t>(p.worse)];
      if (b >= 0 && c >= 0) pairs.push_back({b, c});
    }
    prefs.push_back(PreferenceRelation::from_pairs(members.size(), pairs));
  }
  return HousingMarket(std::move(names), std::move(prefs));
}

HousingMarket market_from_acceptability(std::vector<std::string> names,
                                        const std::vector<std::vector<Agent>>& acceptable,
                                        const std::vector<std::vector<StrictPair>>& extra) {
  const std::size_t n = names.size();
  std::vector<PreferenceRelation> prefs;
  prefs.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto agent = static_cast<Agent>(a);
    std::vector<bool> ok(n, false);
    ok[a] = true;
    for (Agent b : acceptable[a]) ok[static_cast<std::size_t>(b)] = true;
    std::vector<StrictPair> pairs;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      if (ok[b]) {
        pairs.push_back({static_cast<Agent>(b), agent});
      } else {
        pairs.push_back({agent, static_cast<Agent>(b)});
      }
    }
    if (a < extra.size()) pairs.insert(pairs.end(), extra[a].begin(), extra[a].end());
    prefs.push_back(PreferenceRelation::from_pairs(n, pairs));
  }
  return HousingMarket(std::move(names), std::move(prefs));
}

// ---------------------------------------------------------------------------
// JSON instance documents

namespace {

using nlohmann::json;

Agent lookup(const std::unordered_map<std::string, Agent>& index, const json& name) {
  if (!name.is_string()) throw Error(ErrorCode::MalformedDocument, "agent names must be strings");
  const auto it = index.find(name.get<std::string>());
  if (it == index.end()) {
    throw Error(ErrorCode::UnknownAgent, "unknown agent '" + name.get<std::string>() + "'");
  }
  return it->second;
}

ArcSet read_arcs(const json& doc, const char* key,
                 const std::unordered_map<std::string, Agent>& index) {
  ArcSet arcs;
  if (!doc.contains(key)) return arcs;
  const json& list = doc.at(key);
  if (!list.is_array()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be a list");
  for (const json& pair : list) {
    if (!pair.is_array() || pair.size() != 2) {
      throw Error(ErrorCode::MalformedDocument, std::string(key) + " entries must be [tail, head]");
    }
    arcs.push_back({lookup(index, pair[0]), lookup(index, pair[1])});
  }
  return arcs;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("agents") || !doc["agents"].is_array()) {
    throw Error(ErrorCode::MalformedDocument, "document must be an object with an \"agents\" list");
  }
  std::vector<std::string> names;
  std::unordered_map<std::string, Agent> index;
  for (const json& name : doc["agents"]) {
    if (!name.is_string()) throw Error(ErrorCode::MalformedDocument, "agent names must be strings");
    const auto agent = static_cast<Agent>(names.size());
    if (!index.emplace(name.get<std::string>(), agent).second) {
      throw Error(ErrorCode::MalformedDocument, "duplicate agent '" + name.get<std::string>() + "'");
    }
    names.push_back(name.get<std::string>());
  }
  const std::size_t n = names.size();
  if (n == 0) throw Error(ErrorCode::MalformedDocument, "a market needs at least one agent");

  std::vector<std::vector<StrictPair>> pairs(n);
  if (doc.contains("preferences")) {
    const json& prefs = doc["preferences"];
    if (!prefs.is_object()) throw Error(ErrorCode::MalformedDocument, "preferences must be an object");
    for (const auto& [owner_name, spec] : prefs.items()) {
      const Agent owner = lookup(index, json(owner_name));
      if (!spec.is_object()) {
        throw Error(ErrorCode::MalformedDocument, "preferences of '" + owner_name + "' must be an object");
      }
      auto& list = pairs[static_cast<std::size_t>(owner)];
      if (spec.contains("unacceptable")) {
        if (!spec["unacceptable"].is_array()) {
          throw Error(ErrorCode::MalformedDocument, "unacceptable must be a list");
        }
        for (const json& u : spec["unacceptable"]) list.push_back({owner, lookup(index, u)});
      }
      if (spec.contains("strict")) {
        if (!spec["strict"].is_array()) throw Error(ErrorCode::MalformedDocument, "strict must be a list");
        for (const json& p : spec["strict"]) {
          if (!p.is_array() || p.size() != 2) {
            throw Error(ErrorCode::MalformedDocument, "strict entries must be [better, worse]");
          }
          list.push_back({lookup(index, p[0]), lookup(index, p[1])});
        }
      }
    }
  }

  std::vector<PreferenceRelation> relations;
  relations.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    try {
      relations.push_back(PreferenceRelation::from_pairs(n, pairs[a]));
    } catch (const Error& e) {
      throw Error(e.code(), "preferences of '" + names[a] + "': " + e.what());
    }
  }
  ArcSet forbidden = read_arcs(doc, "forbidden", index);
  ArcSet forced = read_arcs(doc, "forced", index);
  return Instance(HousingMarket(std::move(names), std::move(relations)), std::move(forbidden),
                  std::move(forced));
}

std::string serialize_instance(const Instance& instance) {
  using ojson = nlohmann::ordered_json;
  const HousingMarket& market = instance.market();
  ojson doc;
  doc["agents"] = market.names();
  ojson prefs = ojson::object();
  for (std::size_t a = 0; a < market.size(); ++a) {
    ojson strict = ojson::array();
    for (const StrictPair& p : market.preferences(static_cast<Agent>(a)).covering_pairs()) {
      strict.push_back({market.name(p.better), market.name(p.worse)});
    }
    prefs[market.name(static_cast<Agent>(a))] = ojson{{"strict", std::move(strict)}};
  }
  doc["preferences"] = std::move(prefs);
  const auto arcs = [&](const ArcSet& set) {
    ojson list = ojson::array();
    for (const Arc& arc : set) list.push_back({market.name(arc.tail), market.name(arc.head)});
    return list;
  };
  doc["forbidden"] = arcs(instance.forbidden());
  doc["forced"] = arcs(instance.forced());
  return doc.dump(2) + "\n";
}

}  // namespace strongcore
