#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strongcore/market.hpp"

namespace strongcore {

/// Seeded mt19937_64 with its own bounded draws. The standard distributions
/// are implementation-defined, so they would break reproducibility across
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1) with 53 random bits.
  double real();
  bool chance(double p) { return real() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent per-trial seed from a run seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class GeneratorKind { Strict, Weak, PartialDag, Semiorder, TwoCriteria };

std::string_view to_string(GeneratorKind kind);
/// Accepts strict, weak, partial-dag, semiorder, two-criteria.
std::optional<GeneratorKind> parse_generator_kind(std::string_view text);
inline constexpr GeneratorKind kAllGeneratorKinds[] = {
    GeneratorKind::Strict, GeneratorKind::Weak, GeneratorKind::PartialDag,
    GeneratorKind::Semiorder, GeneratorKind::TwoCriteria};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Strict;
  std::size_t n = 1;
  /// Probability that another agent is acceptable (strict, weak, partial-dag).
  double density = 0.5;
  /// Tiers (weak), utility spread (semiorder) or grid size (two-criteria).
  int levels = 3;
  /// Upper bound on acceptable houses besides the own one; 0 means none.
  std::size_t max_acceptable = 0;
  std::uint64_t seed = 0;
};

/// Random market of the given kind; agent names are "0", "1", ...
HousingMarket generate(const GeneratorSpec& spec);

/// b over c iff b clears c by more than `threshold`.
PreferenceRelation semiorder_relation(std::span<const double> utilities, double threshold = 1.0);
/// Componentwise dominance: at least as good in both criteria, better in one.
PreferenceRelation two_criteria_relation(std::span<const std::pair<int, int>> scores);

enum class PreferenceClass { Strict, Weak, Partial };

std::string_view to_string(PreferenceClass c);
PreferenceClass classify(const PreferenceRelation& relation);
std::vector<PreferenceClass> classify_preferences(const HousingMarket& market);

/// Edits to the preferences of agent q that move agent p upward. Removals
/// apply to the closed relation, additions follow, then the result is closed
/// again and checked against the three improvement conditions.
struct ImprovementStep {
  Agent p = 0;
  Agent q = 0;
  std::vector<StrictPair> remove;
  std::vector<StrictPair> add;
};

/// 0 if `after` is a (p,q)-improvement of `before`, else the index (1..3) of
/// the first violated condition.
int improvement_violation(const HousingMarket& before, const HousingMarket& after, Agent p, Agent q);

/// Throws NotAnImprovement naming the violated condition. All steps must
/// share the same p.
HousingMarket apply_improvement(const HousingMarket& market, std::span<const ImprovementStep> steps);

/// A random valid (p,q)-improvement step; nullopt if p cannot move up at q.
std::optional<ImprovementStep> random_improvement_step(const HousingMarket& market, Agent p, Agent q,
                                                       Rng& rng);

struct RiViolation {
  Allocation before;
  Allocation after;
};

struct RiReport {
  Agent p = 0;
  std::vector<Allocation> core_before;
  std::vector<Allocation> core_after;
  std::vector<RiViolation> violations;
  /// Some X' gives p a house it strictly prefers to what some X gives it.
  bool p_strictly_improves = false;
  bool became_empty = false;
  bool passed() const { return violations.empty(); }
};

/// Enumerates the strong core before and after the improvement and checks
/// X' weakly preferred to X by p (under p's original preferences) for all pairs.
RiReport ri_harness(const HousingMarket& market, Agent p, std::span<const ImprovementStep> steps,
                    std::size_t max_agents = 8);

/// A C-deviation: new relations for the coalition members.
struct Deviation {
  std::vector<Agent> coalition;
  std::vector<PreferenceRelation> relations;  // parallel to coalition
};

HousingMarket apply_deviation(const HousingMarket& market, const Deviation& deviation);

/// Random coalition of 1..max_coalition agents with random misreports.
Deviation random_deviation(const HousingMarket& market, std::size_t max_coalition, Rng& rng);

struct GspCounterexample {
  Deviation deviation;
  Allocation truthful;
  Allocation deviating;
};

/// Looks for X among SCFA outputs on the true market and X' among SCFA
/// outputs on the deviated market with every coalition member strictly
/// better off in X' under its true preferences.
std::optional<GspCounterexample> gsp_check(const HousingMarket& market, const ArcSet& forbidden,
                                           const Deviation& deviation, std::size_t max_agents = 8,
                                           bool* outcome_changed = nullptr);

/// Random desk-scale instance for cross-checks: random kind, 1..max_n
/// agents, forbidden arcs drawn from E with a random density up to
/// `max_forbidden_density`.
Instance random_instance(std::uint64_t seed, std::size_t max_n, double max_forbidden_density = 0.3);
/// As random_instance, plus up to `max_forced` forced arcs with distinct tails.
Instance random_instance_with_forced(std::uint64_t seed, std::size_t max_n, std::size_t max_forced = 2,
                                     double max_forbidden_density = 0.3);

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::size_t n = 0;
  bool passed = true;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;  // "ri" or "gsp"
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t nontrivial = 0;  // RI: p strictly improved; GSP: the output set changed
  std::vector<TrialRecord> records;
};

struct ExperimentConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t max_n = 6;
  std::size_t max_coalition = 2;
};

/// Random markets with random p-improvements (1..2 steps, q != p).
ExperimentReport run_ri_experiment(const ExperimentConfig& config);
/// Random instances with random coalition deviations.
ExperimentReport run_gsp_experiment(const ExperimentConfig& config);

}  // namespace strongcore
