// Randomized cross-checks against the brute-force reference in support/.

#include "doctest.h"

#include <algorithm>

#include "brute_force.hpp"
#include "strongcore/experiments.hpp"
#include "strongcore/graph.hpp"
#include "strongcore/oracle.hpp"
#include "strongcore/scfa.hpp"
#include "strongcore/verification.hpp"

using namespace strongcore;

namespace {

constexpr std::uint64_t kSeeds = 400;

bool member(const std::vector<std::vector<Agent>>& set, const Allocation& x) {
  return std::find(set.begin(), set.end(), x.targets()) != set.end();
}

void check_cycle(const HousingMarket& m, const Allocation& x, const Cycle& cycle, bool weak) {
  REQUIRE_FALSE(cycle.empty());
  std::vector<Agent> tails;
  bool strict_seen = false;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Arc& arc = cycle[i];
    CHECK(arc.head == cycle[(i + 1) % cycle.size()].tail);
    CHECK(m.accepts(arc.tail, arc.head));
    const bool better = m.prefers(arc.tail, arc.head, x[arc.tail]);
    strict_seen = strict_seen || better;
    if (weak) {
      CHECK_FALSE(m.prefers(arc.tail, x[arc.tail], arc.head));
    } else {
      CHECK(better);
    }
    tails.push_back(arc.tail);
  }
  CHECK(strict_seen);
  std::sort(tails.begin(), tails.end());
  CHECK(std::adjacent_find(tails.begin(), tails.end()) == tails.end());
}

}  // namespace

TEST_CASE("blocking-cycle detection matches simple-cycle enumeration") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const Instance inst = random_instance(seed, 6);
    const auto& m = inst.market();
    CAPTURE(seed);
    for (const auto& targets : brute::allocations(m)) {
      const Allocation x(targets);
      const Certificate weak = find_weak_blocking_cycle(m, x);
      const Certificate strict = find_strict_blocking_cycle(m, x);
      CHECK((weak.kind == CertificateKind::None) == !brute::blocked(m, targets, true));
      CHECK((strict.kind == CertificateKind::None) == !brute::blocked(m, targets, false));
      if (weak.kind != CertificateKind::None) check_cycle(m, x, weak.cycle, true);
      if (strict.kind != CertificateKind::None) check_cycle(m, x, strict.cycle, false);
      if (weak.kind == CertificateKind::None) CHECK(strict.kind == CertificateKind::None);
    }
  }
}

TEST_CASE("undominated arcs match the definition") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto& m = random_instance(seed, 7).market();
    CHECK(undominated_arcs(m) == brute::undominated(m));
  }
}

TEST_CASE("solver agrees with the brute-force strong core") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const Instance inst = random_instance(seed, 6);
    const auto& m = inst.market();
    const auto sc = brute::strong_core(m, inst.forbidden());
    const auto result = solve_scfa(inst);
    CAPTURE(seed);
    CHECK(result.allocation.has_value() == !sc.empty());
    if (result.allocation) CHECK(member(sc, *result.allocation));
    CHECK(strong_core_set(m, inst.forbidden()).size() == sc.size());
    for (const Allocation& x : enumerate_scfa_outputs(inst)) CHECK(member(sc, x));
  }
}

TEST_CASE("forced arcs agree with filtering") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const Instance inst = random_instance_with_forced(seed, 6);
    const auto sc = brute::strong_core(inst.market(), inst.forbidden(), inst.forced());
    const auto result = solve_scffa(inst);
    CAPTURE(seed);
    CHECK(result.allocation.has_value() == !sc.empty());
    if (result.allocation) CHECK(member(sc, *result.allocation));
  }
}

TEST_CASE("structural facts about strong-core allocations") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto& m = random_instance(seed, 6).market();
    const ArcSet u = undominated_arcs(m);
    const auto absorbing = absorbing_sets(Digraph(m.size(), u));
    const auto sc = brute::strong_core(m);
    CAPTURE(seed);
    std::vector<Allocation> core;
    for (const auto& targets : sc) core.emplace_back(targets);
    CHECK(incomparability_audit(m, core));
    for (const Allocation& x : core) {
      // Every absorbing set of the undominated digraph is served internally by undominated arcs.
      for (const auto& s : absorbing) {
        for (Agent a : s) {
          CHECK(std::binary_search(s.begin(), s.end(), x[a]));
          CHECK(contains(u, {a, x[a]}));
        }
      }
      // Arcs leaving a peak set are dominated by the allocation.
      for (const auto& s : peak_sets(m, x)) {
        for (Agent a : s) {
          for (Agent b : m.acceptable(a)) {
            if (!std::binary_search(s.begin(), s.end(), b)) CHECK(m.prefers(a, x[a], b));
          }
        }
      }
      const Certificate prices = price_certificate(m, x);
      CHECK(prices_certify(m, x, prices.prices));
    }
    for (const auto& targets : brute::allocations(m)) {
      const Allocation x(targets);
      CHECK(check_peakset_characterization(m, x).has_value() == member(sc, x));
    }
  }
}

TEST_CASE("weak orders: the solver reaches the whole strong core") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; checked < 150; ++seed) {
    Rng rng(seed);
    const GeneratorKind kind = seed % 2 == 0 ? GeneratorKind::Weak : GeneratorKind::Strict;
    const HousingMarket m = generate({kind, 1 + rng.below(6), 0.3 + 0.6 * rng.real(), 3, 0, rng.next()});
    ++checked;
    const auto sc = brute::strong_core(m);
    const auto outputs = enumerate_scfa_outputs(m, ArcSet{});
    CAPTURE(seed);
    CHECK(outputs.size() == sc.size());
    for (const Allocation& x : outputs) CHECK(member(sc, x));
    const auto qw = quint_wako_weak(m);
    CHECK(qw.has_value() == !sc.empty());
    if (qw) CHECK(member(sc, *qw));
  }
}

TEST_CASE("TTC output is in the core") {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto& m = random_instance(seed, 7).market();
    const Allocation x = ttc_core(m);
    CHECK(is_allocation_of(m, x));
    CHECK_FALSE(brute::blocked(m, x.targets(), false));
  }
}
