#include <set>

#include "doctest.h"
#include "mpmo/bpbomst.hpp"
#include "mpmo/error.hpp"
#include "mpmo/instances.hpp"

using namespace mpmo;

namespace {

EvaluatedTree eval_ids(std::vector<EdgeId> ids, const MultiWeightedGraph& g) {
  return evaluate_tree(SpanningTree(std::move(ids)), g);
}

template <std::size_t D>
void check_mutually_nondominated(const std::map<std::array<std::int64_t, D>, SpanningTree>& entries) {
  for (const auto& [a, ta] : entries) {
    for (const auto& [b, tb] : entries) {
      REQUIRE_FALSE(strictly_dominates(a, b, Sense::Minimize));
    }
  }
}

MultiWeightedGraph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, {1 + i % 3, 2, 3, 1 + i % 2}});
  return MultiWeightedGraph(n, std::move(edges), 5);
}

}  // namespace

TEST_CASE("representative pool updates") {
  // Square 0-1-2-3-0 plus diagonal 0-2.
  const MultiWeightedGraph g(4,
                             {{0, 1, {1, 5, 1, 1}},
                              {1, 2, {1, 5, 1, 1}},
                              {2, 3, {5, 1, 1, 1}},
                              {3, 0, {5, 1, 1, 1}},
                              {0, 2, {3, 3, 1, 1}}},
                             5);
  RepresentativePool pool(1);
  const auto t1 = eval_ids({0, 1, 2}, g);  // (7, 11)
  const auto t2 = eval_ids({1, 2, 3}, g);  // (11, 7)
  pool.insert(t1);
  pool.insert(t2);
  CHECK(pool.size() == 2);

  const auto worse = eval_ids({0, 2, 4}, g);  // (9, 9): incomparable
  pool = partywise_pool_update(pool, std::vector<EvaluatedTree>{worse}, g);
  CHECK(pool.size() == 3);

  const MultiWeightedGraph h(4,
                             {{0, 1, {1, 1, 1, 1}},
                              {1, 2, {1, 1, 1, 1}},
                              {2, 3, {2, 2, 1, 1}},
                              {3, 0, {2, 2, 1, 1}},
                              {0, 2, {3, 3, 1, 1}}},
                             5);
  RepresentativePool p(1);
  p.insert(eval_ids({0, 2, 4}, h));  // (6, 6)
  p.insert(eval_ids({2, 3, 4}, h));  // (7, 7)
  CHECK(p.size() == 1);
  p.insert(eval_ids({1, 2, 3}, h));  // (5, 5) dominates
  CHECK(p.size() == 1);
  CHECK(p.entries().begin()->first == PartyVector{5, 5});

  // Two separate keys, both dominated by one newcomer.
  RepresentativePool q(1);
  q.insert(eval_ids({0, 2, 4}, g));
  q.insert(eval_ids({0, 1, 2}, g));
  const std::size_t before = q.size();
  q.insert(eval_ids({0, 1, 2}, h));
  CHECK(q.size() <= before);

  // Equal key: the lexicographically smaller edge list wins.
  RepresentativePool r(2);
  r.insert(eval_ids({1, 2, 3}, h));
  r.insert(eval_ids({0, 1, 2}, h));
  REQUIRE(r.size() == 1);
  CHECK(r.entries().begin()->second == SpanningTree({0, 1, 2}));
  r.insert(eval_ids({0, 1, 3}, h));
  CHECK(r.entries().begin()->second == SpanningTree({0, 1, 2}));
}

TEST_CASE("joint archive updates") {
  const MultiWeightedGraph h(4,
                             {{0, 1, {1, 1, 1, 1}},
                              {1, 2, {1, 1, 1, 1}},
                              {2, 3, {2, 2, 1, 1}},
                              {3, 0, {2, 2, 1, 1}},
                              {0, 2, {3, 3, 1, 1}}},
                             5);
  JointArchive a;
  a.insert(eval_ids({0, 2, 4}, h));
  CHECK(a.size() == 1);
  a = joint_archive_update(a, std::vector<EvaluatedTree>{eval_ids({1, 2, 3}, h)}, h);
  CHECK(a.size() == 1);
  CHECK(a.entries().begin()->first == JointVector{5, 5, 3, 3});
  a.insert(eval_ids({2, 3, 4}, h));  // (7, 7, 3, 3)
  CHECK(a.size() == 1);
  CHECK(a.covers({5, 5, 3, 3}));
  CHECK(a.covers({6, 5, 3, 3}));
  CHECK_FALSE(a.covers({4, 9, 9, 9}));

  // {0,1,3} and {0,1,2} both map to (4, 4, 3, 3).
  a.insert(eval_ids({0, 1, 3}, h));
  REQUIRE(a.size() == 1);
  CHECK(a.entries().begin()->second == SpanningTree({0, 1, 3}));
  a.insert(eval_ids({0, 1, 2}, h));
  CHECK(a.entries().begin()->first == JointVector{4, 4, 3, 3});
  CHECK(a.entries().begin()->second == SpanningTree({0, 1, 2}));
}

TEST_CASE("alpha parsing and cover checks") {
  CHECK(Alpha::parse("2") == Alpha{2, 1});
  CHECK(Alpha::parse("3/2") == Alpha{3, 2});
  CHECK(Alpha::parse("1.25") == Alpha{5, 4});
  CHECK(Alpha::parse("4/2").to_string() == "2");
  CHECK_THROWS_AS(Alpha::parse("x"), ContractViolation);
  CHECK_THROWS_AS(Alpha::parse("1/0"), ContractViolation);

  const std::vector<JointVector> front{{4, 4, 4, 4}, {3, 5, 5, 3}};
  CHECK(check_common_cover(front, front, Alpha{1, 1}).covered);
  CHECK_FALSE(check_common_cover(std::vector<JointVector>{}, front, Alpha{1, 1}).covered);
  const std::vector<JointVector> near{{8, 8, 8, 9}};
  const std::vector<JointVector> single{{4, 4, 4, 4}};
  CHECK_FALSE(check_common_cover(near, single, Alpha{2, 1}).covered);
  CHECK(check_common_cover(near, single, Alpha{9, 4}).covered);
  CHECK_THROWS_AS(check_common_cover(near, std::vector<JointVector>{}, Alpha{2, 1}), ContractViolation);
  CHECK_THROWS_AS(check_common_cover(near, single, Alpha{1, 2}), ContractViolation);
}

TEST_CASE("brute force common Pareto oracle") {
  const MultiWeightedGraph two(2, {{0, 1, {1, 2, 3, 4}}}, 5);
  auto r = brute_common_pareto(two, 10);
  CHECK(r.ps_com == std::vector<SpanningTree>{SpanningTree({0})});
  CHECK(r.pf_com == std::set<JointVector>{{1, 2, 3, 4}});

  const auto p = path_graph(6);
  r = brute_common_pareto(p, 10);
  CHECK(r.ps_com.size() == 1);

  const InstanceFile shortcut = shortcut_example_instance();
  r = brute_common_pareto(shortcut.graph, 1000);
  CHECK(std::find(r.ps_com.begin(), r.ps_com.end(), SpanningTree({0, 1, 2, 3})) != r.ps_com.end());
  // Some party-wise optimal trees keep only one party's cheap edges.
  bool party1_only = false;
  for (const auto& t : r.party_sets[0]) {
    const std::set<EdgeId> ids(t.edge_ids.begin(), t.edge_ids.end());
    party1_only = party1_only || (ids.count(0) && ids.count(2) && !(ids.count(1) && ids.count(3)));
  }
  CHECK(party1_only);

  CHECK_THROWS_AS(brute_common_pareto(shortcut.graph, 3), RefusalError);
}

TEST_CASE("unique-tree graphs are covered at initialization") {
  const auto g = path_graph(6);
  const auto pf = brute_common_pareto(g, 10).pf_com;
  const std::vector<JointVector> front(pf.begin(), pf.end());
  BpbomstConfig cfg;
  cfg.alpha_targets = {{1, 1}};
  cfg.fe_budget = 100;
  const auto cpr = run_cpr_nsga2_bpbomst(g, front, cfg, 1);
  CHECK(cpr.success);
  CHECK(cpr.cover.hit_fe[0] == std::optional<std::uint64_t>(1));
  CHECK(cpr.iterations == 0);
  const auto base = run_partywise_baseline(g, front, cfg, 1);
  CHECK(base.success);
  CHECK(base.cover.hit_fe[0] == std::optional<std::uint64_t>(1));
}

TEST_CASE("CPR run on a planted instance") {
  const InstanceFile inst = generate_bpbomst_instance(6, 7);
  REQUIRE(inst.verified == std::optional<bool>(true));
  BpbomstConfig cfg;
  cfg.alpha_targets = {{2, 1}, {3, 1}, {4, 1}};
  cfg.fe_budget = 20000 * 6;

  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::uint64_t last_iteration = 0;
    std::vector<bool> was_covered(3, false);
    const auto r = run_cpr_nsga2_bpbomst(inst.graph, inst.pf_com, cfg, seed, [&](const BpbomstIterationView& v) {
      REQUIRE(v.fitness_evals == 2 + 3 * v.iteration);
      last_iteration = v.iteration;
      check_mutually_nondominated(v.pool1.entries());
      check_mutually_nondominated(v.pool2.entries());
      check_mutually_nondominated(v.archive.entries());
      REQUIRE(v.pool1.size() <= static_cast<std::size_t>(inst.graph.weight_bound() + 1));
      for (std::size_t a = 0; a < 3; ++a) {
        if (was_covered[a]) REQUIRE(v.cover.covered(a));
        was_covered[a] = v.cover.covered(a);
      }
    });
    CHECK(r.iterations == last_iteration);
    if (r.cover.covered(0)) {
      ++covered;
      CHECK(*r.cover.hit_fe[2] <= *r.cover.hit_fe[1]);
      CHECK(*r.cover.hit_fe[1] <= *r.cover.hit_fe[0]);
      for (const auto& p : r.cover.points[0]) {
        REQUIRE(p.witness);
        CHECK(cfg.alpha_targets[0].within(p.witness->y, p.y));
      }
    }
  }
  CHECK(covered >= 4);
}

TEST_CASE("party-wise baseline never recombines") {
  const InstanceFile inst = generate_bpbomst_instance(7, 3);
  BpbomstConfig cfg;
  cfg.fe_budget = 4000;
  const std::uint64_t before = edge_union_calls();
  const auto r = run_partywise_baseline(inst.graph, inst.pf_com, cfg, 5, [&](const BpbomstIterationView& v) {
    REQUIRE(v.fitness_evals == 2 + 2 * v.iteration);
  });
  CHECK(edge_union_calls() == before);
  CHECK(r.fitness_evals <= cfg.fe_budget);

  // Without a front the run spends its whole budget.
  run_cpr_nsga2_bpbomst(inst.graph, {}, cfg, 5);
  CHECK(edge_union_calls() > before);
}

TEST_CASE("BPBOMST runs are deterministic") {
  const InstanceFile inst = generate_bpbomst_instance(8, 11);
  BpbomstConfig cfg;
  cfg.fe_budget = 3000;
  const auto a = run_cpr_nsga2_bpbomst(inst.graph, inst.pf_com, cfg, 9);
  const auto b = run_cpr_nsga2_bpbomst(inst.graph, inst.pf_com, cfg, 9);
  CHECK(a.fitness_evals == b.fitness_evals);
  CHECK(a.cover.hit_fe == b.cover.hit_fe);
  CHECK(a.archive.entries() == b.archive.entries());
}

TEST_CASE("cover tracking disabled without a front") {
  const InstanceFile inst = generate_bpbomst_instance(6, 2);
  BpbomstConfig cfg;
  cfg.fe_budget = 500;
  const auto r = run_cpr_nsga2_bpbomst(inst.graph, {}, cfg, 1);
  CHECK_FALSE(r.success);
  CHECK(r.fitness_evals == 500);
  CHECK(r.archive.size() >= 1);
}
