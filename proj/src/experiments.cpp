#include "strongcore/experiments.hpp"

#include <algorithm>

#include "strongcore/errors.hpp"
#include "strongcore/oracle.hpp"
#include "strongcore/scfa.hpp"

namespace strongcore {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Strict: return "strict";
    case GeneratorKind::Weak: return "weak";
    case GeneratorKind::PartialDag: return "partial-dag";
    case GeneratorKind::Semiorder: return "semiorder";
    case GeneratorKind::TwoCriteria: return "two-criteria";
  }
  return "strict";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view text) {
  for (GeneratorKind kind : kAllGeneratorKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

PreferenceRelation semiorder_relation(std::span<const double> utilities, double threshold) {
  std::vector<StrictPair> pairs;
  const auto n = static_cast<Agent>(utilities.size());
  for (Agent b = 0; b < n; ++b) {
    for (Agent c = 0; c < n; ++c) {
      if (utilities[static_cast<std::size_t>(b)] > utilities[static_cast<std::size_t>(c)] + threshold) {
        pairs.push_back({b, c});
      }
    }
  }
  return PreferenceRelation::from_pairs(utilities.size(), pairs);
}

PreferenceRelation two_criteria_relation(std::span<const std::pair<int, int>> scores) {
  std::vector<StrictPair> pairs;
  const auto n = static_cast<Agent>(scores.size());
  for (Agent b = 0; b < n; ++b) {
    for (Agent c = 0; c < n; ++c) {
      const auto& sb = scores[static_cast<std::size_t>(b)];
      const auto& sc = scores[static_cast<std::size_t>(c)];
      if (sb.first >= sc.first && sb.second >= sc.second && sb != sc) pairs.push_back({b, c});
    }
  }
  return PreferenceRelation::from_pairs(scores.size(), pairs);
}

namespace {

/// Other agents in random order, split into acceptable and unacceptable.
std::pair<std::vector<Agent>, std::vector<Agent>> split_acceptable(std::size_t n, Agent owner,
                                                                   double density,
                                                                   std::size_t max_acceptable,
                                                                   Rng& rng) {
  std::vector<Agent> yes;
  std::vector<Agent> no;
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = static_cast<Agent>(i);
    if (b == owner) continue;
    const bool room = max_acceptable == 0 || yes.size() < max_acceptable;
    (room && rng.chance(density) ? yes : no).push_back(b);
  }
  rng.shuffle(yes);
  return {yes, no};
}

/// Random DAG over the acceptable agents, most of them strictly above the
/// owner, the owner above every unacceptable agent.
PreferenceRelation random_partial_relation(std::size_t n, Agent owner, double density,
                                           std::size_t max_acceptable, Rng& rng) {
  auto [yes, no] = split_acceptable(n, owner, density, max_acceptable, rng);
  std::vector<StrictPair> pairs;
  for (std::size_t i = 0; i < yes.size(); ++i) {
    for (std::size_t j = i + 1; j < yes.size(); ++j) {
      if (rng.chance(0.4)) pairs.push_back({yes[i], yes[j]});
    }
    if (rng.chance(0.75)) pairs.push_back({yes[i], owner});
  }
  for (Agent u : no) pairs.push_back({owner, u});
  return PreferenceRelation::from_pairs(n, pairs);
}

PreferenceRelation random_strict_relation(std::size_t n, Agent owner, double density,
                                          std::size_t max_acceptable, Rng& rng) {
  auto [yes, no] = split_acceptable(n, owner, density, max_acceptable, rng);
  rng.shuffle(no);
  std::vector<Agent> order = yes;
  order.push_back(owner);
  order.insert(order.end(), no.begin(), no.end());
  std::vector<StrictPair> pairs;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) pairs.push_back({order[i], order[i + 1]});
  return PreferenceRelation::from_pairs(n, pairs);
}

PreferenceRelation random_weak_relation(std::size_t n, Agent owner, double density, int levels,
                                        std::size_t max_acceptable, Rng& rng) {
  auto [yes, no] = split_acceptable(n, owner, density, max_acceptable, rng);
  const auto tiers = static_cast<std::size_t>(std::max(levels, 1));
  // Tiers 0..tiers-1 hold acceptable houses, the owner sits in the last one or
  // just below it, unacceptable houses share the bottom tier.
  std::vector<std::vector<Agent>> tier(tiers + 2);
  for (Agent b : yes) tier[rng.below(tiers)].push_back(b);
  tier[rng.chance(0.5) ? tiers - 1 : tiers].push_back(owner);
  tier[tiers + 1] = no;
  std::vector<StrictPair> pairs;
  std::vector<Agent> previous;
  for (const auto& t : tier) {
    if (t.empty()) continue;
    for (Agent b : previous) {
      for (Agent c : t) pairs.push_back({b, c});
    }
    previous = t;
  }
  return PreferenceRelation::from_pairs(n, pairs);
}

std::vector<std::string> index_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

}  // namespace

HousingMarket generate(const GeneratorSpec& spec) {
  const std::size_t n = std::max<std::size_t>(spec.n, 1);
  Rng rng(spec.seed);
  std::vector<PreferenceRelation> prefs;
  prefs.reserve(n);
  switch (spec.kind) {
    case GeneratorKind::Strict:
      for (std::size_t a = 0; a < n; ++a) {
        prefs.push_back(random_strict_relation(n, static_cast<Agent>(a), spec.density, spec.max_acceptable, rng));
      }
      break;
    case GeneratorKind::Weak:
      for (std::size_t a = 0; a < n; ++a) {
        prefs.push_back(random_weak_relation(n, static_cast<Agent>(a), spec.density, spec.levels,
                                             spec.max_acceptable, rng));
      }
      break;
    case GeneratorKind::PartialDag:
      for (std::size_t a = 0; a < n; ++a) {
        prefs.push_back(random_partial_relation(n, static_cast<Agent>(a), spec.density, spec.max_acceptable, rng));
      }
      break;
    case GeneratorKind::Semiorder: {
      const double spread = std::max(spec.levels, 1);
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<double> u(n);
        for (double& value : u) value = rng.real() * spread;
        prefs.push_back(semiorder_relation(u, 1.0));
      }
      break;
    }
    case GeneratorKind::TwoCriteria: {
      const auto grid = static_cast<std::uint64_t>(std::max(spec.levels, 1));
      // Donor age is a property of the house; compatibility depends on the pair.
      std::vector<int> age(n);
      for (int& value : age) value = static_cast<int>(rng.below(grid));
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::pair<int, int>> scores(n);
        for (std::size_t b = 0; b < n; ++b) scores[b] = {age[b], static_cast<int>(rng.below(grid))};
        prefs.push_back(two_criteria_relation(scores));
      }
      break;
    }
  }
  return HousingMarket(index_names(n), std::move(prefs));
}

std::string_view to_string(PreferenceClass c) {
  switch (c) {
    case PreferenceClass::Strict: return "strict";
    case PreferenceClass::Weak: return "weak";
    case PreferenceClass::Partial: return "partial";
  }
  return "partial";
}

PreferenceClass classify(const PreferenceRelation& relation) {
  const std::size_t n = relation.agent_count();
  if (relation.pair_count() == n * (n - 1) / 2) return PreferenceClass::Strict;
  if (is_weak_order(relation)) return PreferenceClass::Weak;
  return PreferenceClass::Partial;
}

std::vector<PreferenceClass> classify_preferences(const HousingMarket& market) {
  std::vector<PreferenceClass> out;
  for (std::size_t a = 0; a < market.size(); ++a) {
    out.push_back(classify(market.preferences(static_cast<Agent>(a))));
  }
  return out;
}

int improvement_violation(const HousingMarket& before, const HousingMarket& after, Agent p, Agent q) {
  const std::size_t n = before.size();
  if (after.size() != n) return 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<Agent>(i);
    if (a != q && !(before.preferences(a) == after.preferences(a))) return 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<Agent>(i);
    if (a == p) continue;
    if (before.prefers(q, p, a) && !after.prefers(q, p, a)) return 2;
    if (!before.prefers(q, a, p) && after.prefers(q, a, p)) return 2;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = static_cast<Agent>(i);
      const auto b = static_cast<Agent>(j);
      if (a == p || b == p) continue;
      if (before.prefers(q, a, b) != after.prefers(q, a, b)) return 3;
    }
  }
  return 0;
}

HousingMarket apply_improvement(const HousingMarket& market, std::span<const ImprovementStep> steps) {
  HousingMarket current = market;
  const auto n = static_cast<Agent>(market.size());
  for (const ImprovementStep& step : steps) {
    if (step.p != steps.front().p) {
      throw Error(ErrorCode::NotAnImprovement, "all steps must improve the same agent");
    }
    if (step.p < 0 || step.p >= n || step.q < 0 || step.q >= n) {
      throw Error(ErrorCode::UnknownAgent, "improvement step refers to an unknown agent");
    }
    std::vector<StrictPair> pairs = current.preferences(step.q).pairs();
    std::erase_if(pairs, [&](const StrictPair& pair) {
      return std::find(step.remove.begin(), step.remove.end(), pair) != step.remove.end();
    });
    pairs.insert(pairs.end(), step.add.begin(), step.add.end());
    std::vector<PreferenceRelation> prefs;
    for (Agent a = 0; a < n; ++a) prefs.push_back(current.preferences(a));
    try {
      prefs[static_cast<std::size_t>(step.q)] = PreferenceRelation::from_pairs(market.size(), pairs);
    } catch (const Error&) {
      throw Error(ErrorCode::NotAnImprovement,
                  "edits at '" + market.name(step.q) + "' do not give a partial order");
    }
    HousingMarket next(current.names(), std::move(prefs));
    if (const int violated = improvement_violation(current, next, step.p, step.q); violated != 0) {
      throw Error(ErrorCode::NotAnImprovement,
                  "condition " + std::to_string(violated) + " violated for p='" + market.name(step.p) +
                      "', q='" + market.name(step.q) + "'");
    }
    current = std::move(next);
  }
  return current;
}

std::optional<ImprovementStep> random_improvement_step(const HousingMarket& market, Agent p, Agent q,
                                                       Rng& rng) {
  const auto n = static_cast<Agent>(market.size());
  std::vector<Agent> above;  // agents q strictly prefers to p
  for (Agent y = 0; y < n; ++y) {
    if (market.prefers(q, y, p)) above.push_back(y);
  }
  for (int attempt = 0; attempt < 8; ++attempt) {
    // Released agents must be closed downward inside `above`, otherwise the
    // closure would restore the pair.
    std::vector<bool> released(market.size(), false);
    for (Agent y : above) released[static_cast<std::size_t>(y)] = rng.chance(0.5);
    for (Agent y : above) {
      if (!released[static_cast<std::size_t>(y)]) continue;
      for (Agent z : above) {
        if (market.prefers(q, y, z)) released[static_cast<std::size_t>(z)] = true;
      }
    }
    ImprovementStep step{p, q, {}, {}};
    std::vector<Agent> kept;
    for (Agent y : above) {
      if (released[static_cast<std::size_t>(y)]) {
        step.remove.push_back({y, p});
      } else {
        kept.push_back(y);
      }
    }
    // p may overtake x only if everything still above p is already above x.
    for (Agent x = 0; x < n; ++x) {
      if (x == p || market.prefers(q, p, x)) continue;
      if (market.prefers(q, x, p) && !released[static_cast<std::size_t>(x)]) continue;
      const bool fits = std::all_of(kept.begin(), kept.end(), [&](Agent y) { return market.prefers(q, y, x); });
      if (fits && rng.chance(0.5)) step.add.push_back({p, x});
    }
    if (step.remove.empty() && step.add.empty()) continue;
    return step;
  }
  return std::nullopt;
}

RiReport ri_harness(const HousingMarket& market, Agent p, std::span<const ImprovementStep> steps,
                    std::size_t max_agents) {
  RiReport report;
  report.p = p;
  const HousingMarket improved = apply_improvement(market, steps);
  report.core_before = strong_core_set(market, {}, max_agents);
  report.core_after = strong_core_set(improved, {}, max_agents);
  for (const Allocation& x : report.core_before) {
    for (const Allocation& y : report.core_after) {
      if (market.prefers(p, x[p], y[p])) report.violations.push_back({x, y});
      if (market.prefers(p, y[p], x[p])) report.p_strictly_improves = true;
    }
  }
  report.became_empty = !report.core_before.empty() && report.core_after.empty();
  return report;
}

HousingMarket apply_deviation(const HousingMarket& market, const Deviation& deviation) {
  std::vector<PreferenceRelation> prefs;
  for (std::size_t a = 0; a < market.size(); ++a) prefs.push_back(market.preferences(static_cast<Agent>(a)));
  for (std::size_t i = 0; i < deviation.coalition.size(); ++i) {
    prefs[static_cast<std::size_t>(deviation.coalition[i])] = deviation.relations[i];
  }
  return HousingMarket(market.names(), std::move(prefs));
}

Deviation random_deviation(const HousingMarket& market, std::size_t max_coalition, Rng& rng) {
  const std::size_t n = market.size();
  std::vector<Agent> agents(n);
  for (std::size_t i = 0; i < n; ++i) agents[i] = static_cast<Agent>(i);
  rng.shuffle(agents);
  const std::size_t size = 1 + rng.below(std::min(max_coalition, n));
  Deviation deviation;
  deviation.coalition.assign(agents.begin(), agents.begin() + static_cast<std::ptrdiff_t>(size));
  std::sort(deviation.coalition.begin(), deviation.coalition.end());
  for (Agent c : deviation.coalition) {
    switch (rng.below(3)) {
      case 0:
        deviation.relations.push_back(random_strict_relation(n, c, rng.real(), 0, rng));
        break;
      case 1: {
        // Report a single acceptable house.
        const auto target = static_cast<Agent>(rng.below(n));
        std::vector<StrictPair> pairs;
        if (target != c) pairs.push_back({target, c});
        for (std::size_t i = 0; i < n; ++i) {
          const auto u = static_cast<Agent>(i);
          if (u != c && u != target) pairs.push_back({c, u});
        }
        deviation.relations.push_back(PreferenceRelation::from_pairs(n, pairs));
        break;
      }
      default:
        deviation.relations.push_back(random_partial_relation(n, c, rng.real(), 0, rng));
        break;
    }
  }
  return deviation;
}

std::optional<GspCounterexample> gsp_check(const HousingMarket& market, const ArcSet& forbidden,
                                           const Deviation& deviation, std::size_t max_agents,
                                           bool* outcome_changed) {
  if (outcome_changed) *outcome_changed = false;
  if (deviation.coalition.empty()) return std::nullopt;
  const HousingMarket deviated = apply_deviation(market, deviation);
  // Forbidden arcs stay as they are; those outside the new E are inert.
  ArcSet still_edges;
  for (const Arc& arc : forbidden) {
    if (deviated.accepts(arc.tail, arc.head)) still_edges.push_back(arc);
  }
  const auto truthful = enumerate_scfa_outputs(market, forbidden, max_agents);
  const auto deviating = enumerate_scfa_outputs(deviated, still_edges, max_agents);
  if (outcome_changed) *outcome_changed = truthful != deviating;
  for (const Allocation& x : truthful) {
    for (const Allocation& y : deviating) {
      const bool all_better = std::all_of(deviation.coalition.begin(), deviation.coalition.end(),
                                          [&](Agent c) { return market.prefers(c, y[c], x[c]); });
      if (all_better) return GspCounterexample{deviation, x, y};
    }
  }
  return std::nullopt;
}

namespace {

HousingMarket random_market(Rng& rng, std::size_t min_n, std::size_t max_n,
                            std::string* kind_name = nullptr) {
  GeneratorSpec spec;
  spec.kind = kAllGeneratorKinds[rng.below(std::size(kAllGeneratorKinds))];
  spec.n = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_n), static_cast<std::int64_t>(max_n)));
  spec.density = 0.2 + 0.7 * rng.real();
  spec.levels = static_cast<int>(rng.between(2, 4));
  spec.seed = rng.next();
  if (kind_name != nullptr) *kind_name = to_string(spec.kind);
  return generate(spec);
}

ArcSet random_forbidden(const HousingMarket& market, double max_density, Rng& rng) {
  const double density = rng.real() * max_density;
  ArcSet out;
  for (const Arc& arc : underlying_graph(market)) {
    if (rng.chance(density)) out.push_back(arc);
  }
  return out;
}

}  // namespace

Instance random_instance(std::uint64_t seed, std::size_t max_n, double max_forbidden_density) {
  Rng rng(seed);
  HousingMarket market = random_market(rng, 1, max_n);
  ArcSet forbidden = random_forbidden(market, max_forbidden_density, rng);
  return Instance(std::move(market), std::move(forbidden));
}

Instance random_instance_with_forced(std::uint64_t seed, std::size_t max_n, std::size_t max_forced,
                                     double max_forbidden_density) {
  Rng rng(seed);
  HousingMarket market = random_market(rng, 1, max_n);
  ArcSet forbidden = random_forbidden(market, max_forbidden_density, rng);
  ArcSet candidates;
  for (const Arc& arc : underlying_graph(market)) {
    if (!contains(forbidden, arc)) candidates.push_back(arc);
  }
  rng.shuffle(candidates);
  const std::size_t want = rng.below(max_forced + 1);
  ArcSet forced;
  for (const Arc& arc : candidates) {
    if (forced.size() == want) break;
    const bool tail_free = std::none_of(forced.begin(), forced.end(),
                                        [&](const Arc& f) { return f.tail == arc.tail; });
    if (tail_free) forced.push_back(arc);
  }
  return Instance(std::move(market), std::move(forbidden), std::move(forced));
}

ExperimentReport run_ri_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.experiment = "ri";
  report.seed = config.seed;
  report.trials = config.trials;
  for (std::size_t i = 0; i < config.trials; ++i) {
    TrialRecord record;
    record.index = i;
    record.seed = derive_seed(config.seed, i);
    Rng rng(record.seed);
    const HousingMarket market = random_market(rng, 2, std::max<std::size_t>(config.max_n, 2), &record.generator);
    record.n = market.size();
    const auto p = static_cast<Agent>(rng.below(market.size()));
    std::vector<ImprovementStep> steps;
    HousingMarket current = market;
    const std::size_t count = 1 + rng.below(2);
    for (std::size_t s = 0; s < count; ++s) {
      auto q = static_cast<Agent>(rng.below(market.size() - 1));
      if (q >= p) ++q;
      if (auto step = random_improvement_step(current, p, q, rng)) {
        steps.push_back(*step);
        current = apply_improvement(current, std::span(&steps.back(), 1));
      }
    }
    const RiReport ri = ri_harness(market, p, steps, config.max_n);
    record.passed = ri.passed();
    record.detail = "p=" + market.name(p) + " steps=" + std::to_string(steps.size()) +
                    " core " + std::to_string(ri.core_before.size()) + "->" +
                    std::to_string(ri.core_after.size()) + (ri.p_strictly_improves ? " improves" : "");
    if (ri.p_strictly_improves) ++report.nontrivial;
    if (!record.passed) ++report.failures;
    report.records.push_back(std::move(record));
  }
  return report;
}

ExperimentReport run_gsp_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.experiment = "gsp";
  report.seed = config.seed;
  report.trials = config.trials;
  for (std::size_t i = 0; i < config.trials; ++i) {
    TrialRecord record;
    record.index = i;
    record.seed = derive_seed(config.seed, i);
    Rng rng(record.seed);
    const Instance instance = random_instance(rng.next(), config.max_n);
    record.n = instance.market().size();
    const Deviation deviation = random_deviation(instance.market(), config.max_coalition, rng);
    bool changed = false;
    const auto found = gsp_check(instance.market(), instance.forbidden(), deviation, config.max_n, &changed);
    record.passed = !found.has_value();
    if (changed) ++report.nontrivial;
    std::string members;
    for (Agent c : deviation.coalition) members += (members.empty() ? "" : ",") + instance.market().name(c);
    record.detail = "coalition={" + members + "}";
    if (found) {
      record.detail += " counterexample";
      ++report.failures;
    }
    report.records.push_back(std::move(record));
  }
  return report;
}

}  // namespace strongcore
