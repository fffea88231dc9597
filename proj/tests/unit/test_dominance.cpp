#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "mpmo/dominance.hpp"
#include "mpmo/error.hpp"
#include "stats.hpp"

using namespace mpmo;

namespace {

ObjectiveVector maxv(std::initializer_list<std::int64_t> v) { return ObjectiveVector(v, Sense::Maximize); }

ObjectiveVector random_vector(Rng& rng, std::size_t arity, std::int64_t range) {
  std::vector<std::int64_t> values(arity);
  for (auto& x : values) x = static_cast<std::int64_t>(rng.below(range));
  return ObjectiveVector(values, Sense::Maximize);
}

}  // namespace

TEST_CASE("pairwise dominance outcomes") {
  CHECK(dominates(maxv({4, 5}), maxv({3, 5})) == DominanceOutcome::Dominates);
  CHECK(dominates(maxv({3, 5}), maxv({3, 5})) == DominanceOutcome::Equal);
  CHECK(dominates(maxv({4, 3}), maxv({3, 5})) == DominanceOutcome::Incomparable);
  CHECK(dominates(maxv({3, 5}), maxv({4, 5})) == DominanceOutcome::DominatedBy);

  const ObjectiveVector a({1, 1}, Sense::Minimize);
  const ObjectiveVector b({2, 1}, Sense::Minimize);
  CHECK(dominates(a, b) == DominanceOutcome::Dominates);
}

TEST_CASE("dominance rejects shape mismatches") {
  CHECK_THROWS_AS(dominates(maxv({1, 2}), maxv({1, 2, 3})), ContractViolation);
  CHECK_THROWS_AS(dominates(maxv({1, 2}), ObjectiveVector({1, 2}, Sense::Minimize)), ContractViolation);
}

TEST_CASE("multi-party dominance") {
  const std::vector<ObjectiveVector> x{maxv({2, 2}), maxv({2, 2})};
  const std::vector<ObjectiveVector> y{maxv({1, 1}), maxv({1, 1})};
  CHECK(multi_party_dominates(x, y) == DominanceOutcome::Dominates);
  CHECK(multi_party_dominates(y, x) == DominanceOutcome::DominatedBy);
  CHECK(multi_party_dominates(x, x) == DominanceOutcome::Equal);

  const std::vector<ObjectiveVector> p{maxv({2, 1}), maxv({1, 1})};
  const std::vector<ObjectiveVector> q{maxv({1, 2}), maxv({2, 2})};
  CHECK(multi_party_dominates(p, q) == DominanceOutcome::Incomparable);

  // Weakly better in one party, equal in the other.
  const std::vector<ObjectiveVector> r{maxv({2, 2}), maxv({1, 1})};
  CHECK(multi_party_dominates(r, y) == DominanceOutcome::Dominates);

  const std::vector<ObjectiveVector> one{maxv({1, 1})};
  CHECK_THROWS_AS(multi_party_dominates(one, y), ContractViolation);
}

TEST_CASE("antisymmetry and transitivity on random triples") {
  Rng rng(7);
  for (int t = 0; t < 20000; ++t) {
    const auto u = random_vector(rng, 3, 4);
    const auto v = random_vector(rng, 3, 4);
    const auto w = random_vector(rng, 3, 4);
    const auto uv = dominates(u, v);
    REQUIRE(dominates(v, u) == flip(uv));
    if (uv == DominanceOutcome::Dominates && dominates(v, w) == DominanceOutcome::Dominates) {
      REQUIRE(dominates(u, w) == DominanceOutcome::Dominates);
    }
  }
}

TEST_CASE("nondominated sort examples") {
  CHECK(non_dominated_sort(std::vector<ObjectiveVector>{}).fronts.empty());

  const std::vector<ObjectiveVector> single{maxv({2, 2})};
  CHECK(non_dominated_sort(single).fronts == std::vector<std::vector<std::size_t>>{{0}});

  const std::vector<ObjectiveVector> chain{maxv({2, 2}), maxv({1, 1})};
  CHECK(non_dominated_sort(chain).fronts == std::vector<std::vector<std::size_t>>{{0}, {1}});

  const std::vector<ObjectiveVector> three{maxv({2, 1}), maxv({1, 2}), maxv({1, 1})};
  CHECK(non_dominated_sort(three).fronts == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

  const std::vector<ObjectiveVector> reordered{maxv({1, 1}), maxv({1, 2}), maxv({2, 1})};
  CHECK(non_dominated_sort(reordered).fronts == std::vector<std::vector<std::size_t>>{{1, 2}, {0}});
}

TEST_CASE("nondominated sort matches pairwise brute force") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t size = 1 + rng.index(200);
    std::vector<ObjectiveVector> points;
    for (std::size_t i = 0; i < size; ++i) points.push_back(random_vector(rng, 1 + rng.index(4), 6));
    // Uniform arity per trial.
    const std::size_t arity = points[0].arity();
    for (auto& p : points) p = random_vector(rng, arity, 6);

    const FrontPartition partition = non_dominated_sort(points);
    std::vector<int> seen(size, 0);
    for (const auto& front : partition.fronts) {
      for (auto i : front) ++seen[i];
    }
    for (int s : seen) REQUIRE(s == 1);

    std::set<std::size_t> brute_front;
    for (std::size_t i = 0; i < size; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < size && !dominated; ++j) {
        dominated = dominates(points[j], points[i]) == DominanceOutcome::Dominates;
      }
      if (!dominated) brute_front.insert(i);
    }
    const auto& f1 = partition.fronts.front();
    CHECK(std::set<std::size_t>(f1.begin(), f1.end()) == brute_front);

    for (std::size_t r = 0; r < partition.fronts.size(); ++r) {
      for (std::size_t later = r; later < partition.fronts.size(); ++later) {
        for (auto i : partition.fronts[r]) {
          for (auto j : partition.fronts[later]) {
            REQUIRE(dominates(points[j], points[i]) != DominanceOutcome::Dominates);
          }
        }
      }
      if (r + 1 < partition.fronts.size()) {
        for (auto j : partition.fronts[r + 1]) {
          bool covered = false;
          for (auto i : partition.fronts[r]) {
            covered = covered || dominates(points[i], points[j]) == DominanceOutcome::Dominates;
          }
          REQUIRE(covered);
        }
      }
    }
  }
}

TEST_CASE("crowding distance") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(crowding_distance(std::vector<ObjectiveVector>{maxv({1, 1})}) == std::vector<double>{inf});
  CHECK(crowding_distance(std::vector<ObjectiveVector>{maxv({1, 2}), maxv({2, 1})}) ==
        std::vector<double>{inf, inf});

  const auto d = crowding_distance(std::vector<ObjectiveVector>{maxv({0, 4}), maxv({1, 3}), maxv({2, 2})});
  CHECK(std::isinf(d[0]));
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(std::isinf(d[2]));

  // Second objective has zero range and contributes nothing.
  const auto flat = crowding_distance(
      std::vector<ObjectiveVector>{maxv({0, 5}), maxv({1, 5}), maxv({3, 5}), maxv({4, 5})});
  CHECK(std::isinf(flat[0]));
  CHECK(flat[1] == doctest::Approx(0.75));
  CHECK(flat[2] == doctest::Approx(0.75));
  CHECK(std::isinf(flat[3]));
}

TEST_CASE("population update") {
  Rng rng(3);
  const std::vector<ObjectiveVector> small{maxv({1, 1}), maxv({2, 2})};
  CHECK(population_update(small, 5, TieRule::UniformTruncation, rng) == std::vector<std::size_t>{0, 1});

  // Front 1 = {0,1,2}, front 2 = {3,4,5}.
  const std::vector<ObjectiveVector> two_fronts{maxv({10, 12}), maxv({11, 11}), maxv({12, 10}),
                                                maxv({0, 4}),   maxv({1, 3}),   maxv({2, 2})};
  const auto crowd = population_update(two_fronts, 4, TieRule::Crowding, rng);
  REQUIRE(crowd.size() == 4);
  CHECK(crowd[0] == 0);
  CHECK(crowd[1] == 1);
  CHECK(crowd[2] == 2);
  CHECK((crowd[3] == 3 || crowd[3] == 5));

  const auto uniform = population_update(two_fronts, 4, TieRule::UniformTruncation, rng);
  REQUIRE(uniform.size() == 4);
  CHECK(uniform[2] == 2);
  CHECK(uniform[3] >= 3);

  CHECK_THROWS_AS(population_update(two_fronts, 0, TieRule::Crowding, rng), ContractViolation);
}

TEST_CASE("population update keeps every fitting front") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ObjectiveVector> q;
    const std::size_t size = 2 + rng.index(40);
    for (std::size_t i = 0; i < size; ++i) q.push_back(random_vector(rng, 2, 8));
    const std::size_t cap = 1 + rng.index(size);
    const auto rule = trial % 2 ? TieRule::Crowding : TieRule::UniformTruncation;
    const auto kept = population_update(q, cap, rule, rng);
    REQUIRE(kept.size() == std::min(size, cap));
    const std::set<std::size_t> kept_set(kept.begin(), kept.end());
    std::size_t admitted = 0;
    for (const auto& front : non_dominated_sort(q).fronts) {
      if (admitted + front.size() > cap) break;
      for (auto i : front) REQUIRE(kept_set.count(i) == 1);
      admitted += front.size();
    }
  }
}

TEST_CASE("uniform truncation is uniform over the overflow front") {
  const std::vector<ObjectiveVector> q{maxv({10, 12}), maxv({11, 11}), maxv({12, 10}),
                                       maxv({0, 4}),   maxv({1, 3}),   maxv({2, 2})};
  Rng rng(2024);
  std::vector<std::size_t> counts(3, 0);
  for (int t = 0; t < 30000; ++t) {
    const auto kept = population_update(q, 4, TieRule::UniformTruncation, rng);
    ++counts[kept[3] - 3];
  }
  CHECK(testing_stats::uniform_chi_square_passes(counts));
}
