#include "doctest.h"

#include "fixtures.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/experiments.hpp"
#include "strongcore/io.hpp"

using namespace strongcore;

TEST_CASE("rng is reproducible and bounded") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.below(13);
    CHECK(x == b.below(13));
    CHECK(x < 13);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}

TEST_CASE("two criteria dominance") {
  const std::vector<std::pair<int, int>> ordered{{1, 1}, {2, 2}};
  CHECK(two_criteria_relation(ordered).prefers(1, 0));
  const std::vector<std::pair<int, int>> crossed{{1, 2}, {2, 1}};
  const auto r = two_criteria_relation(crossed);
  CHECK(r.indifferent(0, 1));
}

TEST_CASE("semiorder threshold") {
  const std::vector<double> u{0.0, 0.6, 1.2};
  const auto r = semiorder_relation(u);
  CHECK(r.indifferent(0, 1));
  CHECK(r.indifferent(1, 2));
  CHECK(r.prefers(2, 0));
  CHECK(classify(r) == PreferenceClass::Partial);
}

TEST_CASE("classification") {
  // s > q with r incomparable to both
  const std::vector<StrictPair> pairs{{0, 2}};
  CHECK(classify(PreferenceRelation::from_pairs(3, pairs)) == PreferenceClass::Partial);
  CHECK(classify(PreferenceRelation(3)) == PreferenceClass::Weak);
  const std::vector<StrictPair> chain{{0, 1}, {1, 2}};
  CHECK(classify(PreferenceRelation::from_pairs(3, chain)) == PreferenceClass::Strict);
  const auto& h1 = fixtures::load("h1.json").market();
  CHECK(classify_preferences(h1)[0] == PreferenceClass::Partial);
}

TEST_CASE("generators") {
  for (GeneratorKind kind : kAllGeneratorKinds) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const GeneratorSpec spec{kind, 1 + seed % 7, 0.5, 3, 0, seed};
      const HousingMarket m = generate(spec);
      CHECK(m == generate(spec));
      CHECK(m.size() == spec.n);
      for (PreferenceClass c : classify_preferences(m)) {
        if (kind == GeneratorKind::Strict) CHECK(c == PreferenceClass::Strict);
        if (kind == GeneratorKind::Weak) CHECK(c != PreferenceClass::Partial);
      }
    }
  }
  CHECK(parse_generator_kind("two-criteria") == GeneratorKind::TwoCriteria);
  CHECK_FALSE(parse_generator_kind("lexicographic").has_value());
}

TEST_CASE("sparse generation honours the acceptability cap") {
  const HousingMarket m = generate({GeneratorKind::PartialDag, 300, 0.05, 3, 6, 11});
  for (Agent a = 0; a < 300; ++a) CHECK(m.acceptable(a).size() <= 7);
}

TEST_CASE("H3 improves to H4 and H5") {
  const auto& h3 = fixtures::load("h3.json").market();
  const Agent a = 0, b = 1, c = 2;

  const std::vector<ImprovementStep> to_h4{{c, b, {{b, c}, {a, c}}, {{c, b}}}};
  CHECK(apply_improvement(h3, to_h4) == fixtures::load("h4.json").market());
  const RiReport r4 = ri_harness(h3, c, to_h4);
  CHECK(r4.passed());
  CHECK(r4.p_strictly_improves);
  CHECK(r4.core_after.size() == 1);

  const std::vector<ImprovementStep> to_h5{{c, a, {{a, c}, {b, c}}, {{c, a}}}};
  CHECK(apply_improvement(h3, to_h5) == fixtures::load("h5.json").market());
  const RiReport r5 = ri_harness(h3, c, to_h5);
  CHECK(r5.passed());
  CHECK(r5.became_empty);

  const RiReport same = ri_harness(h3, c, {});
  CHECK(same.passed());
  CHECK(same.core_before == same.core_after);
  CHECK(apply_improvement(h3, {}) == h3);
}

TEST_CASE("invalid improvements are rejected") {
  const auto& h3 = fixtures::load("h3.json").market();
  const Agent a = 0, b = 1, c = 2, d = 3;
  const auto violated = [&](const std::vector<ImprovementStep>& steps) -> std::string {
    try {
      apply_improvement(h3, steps);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAnImprovement);
      return e.what();
    }
    return "";
  };
  // c drops a below d: p = a loses ground at q = c.
  CHECK(violated({{a, c, {{a, d}}, {}}}).find("condition 2") != std::string::npos);
  // Re-adding a pair that already holds changes nothing.
  CHECK(violated({{a, c, {}, {{d, b}}}}).empty());
  // Dropping a comparison between two other agents at q.
  CHECK(violated({{b, c, {{d, c}}, {}}}).find("condition 3") != std::string::npos);
  // Mixed p.
  CHECK_FALSE(violated({{a, c, {}, {}}, {b, c, {}, {}}}).empty());
}

TEST_CASE("random improvement steps are valid") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const HousingMarket m = generate({kAllGeneratorKinds[seed % 5], 2 + seed % 5, 0.6, 3, 0, seed});
    const auto p = static_cast<Agent>(rng.below(m.size()));
    const auto q = static_cast<Agent>((p + 1) % static_cast<Agent>(m.size()));
    if (auto step = random_improvement_step(m, p, q, rng)) {
      const std::vector<ImprovementStep> steps{*step};
      CHECK_NOTHROW(apply_improvement(m, steps));
    }
  }
}

TEST_CASE("deviations") {
  const Instance h2 = fixtures::load("h2.json");
  CHECK_FALSE(gsp_check(h2.market(), h2.forbidden(), Deviation{}).has_value());
  const Deviation truthful{{0}, {h2.market().preferences(0)}};
  CHECK(apply_deviation(h2.market(), truthful) == h2.market());
  CHECK_FALSE(gsp_check(h2.market(), h2.forbidden(), truthful).has_value());
}

TEST_CASE("experiments are reproducible") {
  const ExperimentConfig config{40, 99, 5, 2};
  const auto ri1 = run_ri_experiment(config);
  const auto ri2 = run_ri_experiment(config);
  CHECK(ri1.failures == 0);
  CHECK(dump(report_to_json(ri1)) == dump(report_to_json(ri2)));
  const auto gsp = run_gsp_experiment(config);
  CHECK(gsp.failures == 0);
  CHECK(gsp.records.size() == 40);
}
