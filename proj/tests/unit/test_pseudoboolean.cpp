#include <limits>
#include <set>

#include "doctest.h"
#include "mpmo/error.hpp"
#include "mpmo/pseudoboolean.hpp"
#include "stats.hpp"

using namespace mpmo;

namespace {

BitString bits(const char* s) { return BitString::parse(s); }

EvaluatedPoint point(const char* s, const MpjcgInstance& inst) {
  const BitString x = bits(s);
  return {x, eval_mpjcg(x, inst)};
}

std::vector<ObjectiveVector> parties(const EvaluatedPoint& p) {
  return {p.eval.party1_vector(), p.eval.party2_vector()};
}

void check_archive_invariants(const CommonArchive& archive) {
  std::set<BitString> seen;
  const auto& entries = archive.entries();
  for (const auto& e : entries) {
    REQUIRE(seen.insert(e.bits).second);
    for (const auto& other : entries) {
      REQUIRE(multi_party_dominates(parties(other), parties(e)) != DominanceOutcome::Dominates);
    }
  }
}

}  // namespace

TEST_CASE("one-point crossover") {
  CHECK(one_point_crossover(bits("11111110"), bits("00000000"), 5) == bits("11111000"));
  for (std::size_t c = 1; c < 8; ++c) {
    CHECK(one_point_crossover(bits("10101010"), bits("10101010"), c) == bits("10101010"));
  }
  CHECK(one_point_crossover(bits("10000000"), bits("01111111"), 1) == bits("11111111"));
  CHECK_THROWS_AS(one_point_crossover(bits("1010"), bits("0101"), 0), ContractViolation);
  CHECK_THROWS_AS(one_point_crossover(bits("1010"), bits("0101"), 4), ContractViolation);
  CHECK_THROWS_AS(one_point_crossover(bits("1010"), bits("010"), 2), ContractViolation);
}

TEST_CASE("standard bit mutation") {
  Rng rng(1);
  const BitString x = bits("1100101001");
  CHECK(standard_bit_mutation(x, 0.0, rng) == x);
  CHECK(standard_bit_mutation(x, 1.0, rng) == bits("0011010110"));
  CHECK_THROWS_AS(standard_bit_mutation(x, 1.5, rng), ContractViolation);

  const std::size_t n = 20;
  const BitString z = BitString::zeros(n);
  std::uint64_t flips = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) flips += standard_bit_mutation(z, 1.0 / n, rng).count_ones();
  CHECK(static_cast<double>(flips) / trials == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("common archive") {
  const auto inst = MpjcgInstance::make(8, 3);
  CommonArchive archive;
  archive.insert(point("11111000", inst));
  archive.insert(point("11111000", inst));
  CHECK(archive.size() == 1);

  archive.insert(point("11111111", inst));
  CHECK(archive.size() == 2);

  const auto strong = point("11111000", inst);
  const auto weak = point("00001001", inst);
  REQUIRE(multi_party_dominates(parties(strong), parties(weak)) == DominanceOutcome::Dominates);
  archive.insert(weak);
  CHECK_FALSE(archive.contains(weak.bits));

  CommonArchive reverse;
  reverse.insert(weak);
  CHECK(reverse.contains(weak.bits));
  const std::vector<EvaluatedPoint> batch{strong};
  const CommonArchive updated = update_common_archive(reverse, batch);
  CHECK_FALSE(updated.contains(weak.bits));
  CHECK(updated.contains(strong.bits));
  CHECK(reverse.contains(weak.bits));
}

TEST_CASE("archive invariants under random interleavings") {
  const auto inst = MpjcgInstance::make(8, 3);
  const auto optima = common_optima(inst);
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    CommonArchive archive;
    bool optimum_seen[2] = {false, false};
    for (int step = 0; step < 40; ++step) {
      std::vector<EvaluatedPoint> batch;
      const std::size_t size = 1 + rng.index(6);
      for (std::size_t i = 0; i < size; ++i) {
        BitString x = rng.bernoulli(0.1) ? optima[rng.index(2)] : BitString::uniform(8, rng);
        if (rng.bernoulli(0.2) && !archive.entries().empty()) {
          x = archive.entries()[rng.index(archive.size())].bits;
        }
        batch.push_back({x, eval_mpjcg(x, inst)});
      }
      archive.update(batch);
      check_archive_invariants(archive);
      for (int t = 0; t < 2; ++t) {
        if (archive.contains(optima[t])) optimum_seen[t] = true;
        if (optimum_seen[t]) REQUIRE(archive.contains(optima[t]));
      }
    }
  }
}

TEST_CASE("rank binary tournament") {
  Rng rng(4);
  const std::vector<int> single{3};
  CHECK(rank_binary_tournament(single, rng) == 0);

  // Index 1 wins only when drawn twice.
  const std::vector<int> two{1, 2};
  int rank1_wins = 0;
  for (int t = 0; t < 4000; ++t) rank1_wins += rank_binary_tournament(two, rng) == 0;
  CHECK(rank1_wins / 4000.0 == doctest::Approx(0.75).epsilon(0.05));

  const std::vector<int> flat(5, 1);
  std::vector<std::size_t> counts(5, 0);
  for (int t = 0; t < 10000; ++t) ++counts[rank_binary_tournament(flat, rng)];
  CHECK(testing_stats::uniform_chi_square_passes(counts));

  const auto inst = MpjcgInstance::make(8, 3);
  const std::vector<EvaluatedPoint> pool{point("00000000", inst), point("11111111", inst)};
  CHECK(party_ranks(pool, 2) == std::vector<int>{2, 1});
}

TEST_CASE("CPR configuration checks") {
  const auto inst = MpjcgInstance::make(8, 3);
  CprConfig cfg;
  cfg.population_size = 3;
  CHECK_THROWS_AS(cfg.validate(inst), ContractViolation);
  cfg.population_size = 4;
  CHECK_NOTHROW(cfg.validate(inst));
  cfg.p_g = 0.0;
  CHECK_THROWS_AS(cfg.validate(inst), ContractViolation);
  cfg.p_g = 0.5;
  cfg.p_c = 1.0;
  CHECK_THROWS_AS(cfg.validate(inst), ContractViolation);
}

TEST_CASE("CPR run accounting and invariants") {
  const auto inst = MpjcgInstance::make(8, 3);
  CprConfig cfg;
  cfg.population_size = 4;
  cfg.fe_budget = 100000;
  const std::uint64_t N = cfg.population_size;

  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::uint64_t last_generation = 0;
    const auto result = run_cpr_nsga2_mpjcg(inst, cfg, seed, [&](const CprGenerationView& view) {
      REQUIRE(view.fitness_evals == 2 * N + (2 * N + 2) * view.generation);
      last_generation = view.generation;
      for (int party = 1; party <= 2; ++party) {
        const auto& pop = party == 1 ? view.party1 : view.party2;
        REQUIRE(pop.size() <= N);
        std::set<std::array<std::int64_t, 2>> vectors;
        for (const auto& p : pop) REQUIRE(vectors.insert(party == 1 ? p.eval.party1 : p.eval.party2).second);
      }
      std::set<std::array<std::int64_t, 2>> front_reps;
      const auto ranks = party_ranks(view.party2, 2);
      for (std::size_t i = 0; i < view.party2.size(); ++i) {
        if (ranks[i] == 1 && !in_gap(view.party2[i].bits, inst)) front_reps.insert(view.party2[i].eval.party2);
      }
      REQUIRE(front_reps.size() <= static_cast<std::size_t>(inst.k + 1));
      check_archive_invariants(view.archive);
    });
    CHECK(result.hit_fe.has_value() == result.success);
    CHECK(result.fitness_evals <= cfg.fe_budget);
    if (result.success) {
      ++successes;
      CHECK(result.generations == last_generation);
      CHECK(result.fitness_evals == 2 * N + (2 * N + 2) * result.generations);
      CHECK(*result.hit_fe <= result.fitness_evals);
    }
  }
  CHECK(successes >= 9);
}

TEST_CASE("CPR budget semantics and determinism") {
  const auto inst = MpjcgInstance::make(10, 3);
  CprConfig cfg;
  cfg.population_size = 5;
  cfg.fe_budget = 0;
  auto r = run_cpr_nsga2_mpjcg(inst, cfg, 17);
  CHECK(r.fitness_evals == 10);
  CHECK(r.generations == 0);

  cfg.fe_budget = 25;
  r = run_cpr_nsga2_mpjcg(inst, cfg, 17);
  if (!r.success) {
    CHECK(r.fitness_evals == 25);
    CHECK(r.generations == 1);
  }

  cfg.fe_budget = 5000;
  const auto a = run_cpr_nsga2_mpjcg(inst, cfg, 123);
  const auto b = run_cpr_nsga2_mpjcg(inst, cfg, 123);
  CHECK(a.fitness_evals == b.fitness_evals);
  CHECK(a.hit_fe == b.hit_fe);
  CHECK(a.generations == b.generations);
  REQUIRE(a.final_archive.size() == b.final_archive.size());
  for (std::size_t i = 0; i < a.final_archive.size(); ++i) {
    CHECK(a.final_archive[i].bits == b.final_archive[i].bits);
  }
}

TEST_CASE("payoff baseline") {
  const auto inst = MpjcgInstance::make(8, 3);
  auto r = run_payoff_baseline(inst, 1000, 1, BitString::ones(8));
  CHECK(r.success);
  CHECK(r.hit_fe == std::optional<std::uint64_t>(0));
  CHECK(r.fitness_evals == 0);

  // From b=2 the one-bit move to b=1 raises the potential and is never taken.
  const BitString to = bits("11111110");
  CHECK(payoff_potential(to, inst) > payoff_potential(bits("11111100"), inst));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int previous = std::numeric_limits<int>::max();
    std::vector<BitString> states;
    r = run_payoff_baseline(inst, 100000, seed, bits("11111100"), [&](const BitString& x, int psi) {
      REQUIRE(psi < previous);
      previous = psi;
      states.push_back(x);
    });
    REQUIRE(r.success);
    for (const auto& s : states) REQUIRE(s != to);
    CHECK(r.fitness_evals == *r.hit_fe);
  }

  r = run_payoff_baseline(inst, 0, 3, bits("00000000"));
  CHECK_FALSE(r.success);
  CHECK(r.fitness_evals == 0);
}

TEST_CASE("flattened NSGA-II") {
  const auto small = MpjcgInstance::make(8, 3);
  CHECK(closed_form_pareto(small).pf_flat.size() == 7);
  CHECK(flattened_population_size(small, 2.0) == 18);
  CHECK_THROWS_AS(flattened_population_size(small, 1.0), ContractViolation);

  const auto inst = MpjcgInstance::make(12, 2);
  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::size_t previous = 0;
    const auto r = run_flattened_nsga2(inst, 2.0, 10'000'000, seed, [&](std::uint64_t, std::size_t covered) {
      REQUIRE(covered >= previous);
      previous = covered;
    });
    CHECK(r.hit_fe.has_value() == r.success);
    successes += r.success;
  }
  CHECK(successes >= 8);
}
