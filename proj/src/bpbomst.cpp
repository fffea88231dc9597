#include "mpmo/bpbomst.hpp"

#include <charconv>
#include <iterator>
#include <numeric>

#include "mpmo/error.hpp"

namespace mpmo {

EvaluatedTree evaluate_tree(SpanningTree tree, const MultiWeightedGraph& g) {
  const JointVector y = joint_vector(tree, g);
  return {std::move(tree), y};
}

RepresentativePool::RepresentativePool(int party) : party_(party) {
  require(party == 1 || party == 2, "RepresentativePool: party must be 1 or 2");
}

bool RepresentativePool::insert(const EvaluatedTree& t) { return map_.insert(party_vector(t.y, party_), t.tree); }

const SpanningTree& RepresentativePool::at(std::size_t i) const {
  return std::next(map_.entries().begin(), static_cast<std::ptrdiff_t>(i))->second;
}

const SpanningTree& JointArchive::at(std::size_t i) const {
  return std::next(map_.entries().begin(), static_cast<std::ptrdiff_t>(i))->second;
}

RepresentativePool partywise_pool_update(const RepresentativePool& pool, std::span<const EvaluatedTree> q,
                                         const MultiWeightedGraph& g) {
  RepresentativePool next = pool;
  for (const auto& t : q) {
    require(is_spanning_tree(t.tree, g), "partywise_pool_update: infeasible tree");
    next.insert(t);
  }
  return next;
}

JointArchive joint_archive_update(const JointArchive& archive, std::span<const EvaluatedTree> q,
                                  const MultiWeightedGraph& g) {
  JointArchive next = archive;
  for (const auto& t : q) {
    require(is_spanning_tree(t.tree, g), "joint_archive_update: infeasible tree");
    next.insert(t);
  }
  return next;
}

Alpha Alpha::parse(const std::string& text) {
  const auto fail = [&] { throw ContractViolation("alpha: cannot parse '" + text + "'"); };
  const auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail();
    return v;
  };
  Alpha a;
  const std::string_view sv(text);
  if (const auto slash = sv.find('/'); slash != std::string_view::npos) {
    a = {parse_int(sv.substr(0, slash)), parse_int(sv.substr(slash + 1))};
  } else if (const auto dot = sv.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = sv.substr(dot + 1);
    if (frac.size() > 9) fail();
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    a = {parse_int(sv.substr(0, dot)) * den + (frac.empty() ? 0 : parse_int(frac)), den};
  } else {
    a = {parse_int(sv), 1};
  }
  if (a.den <= 0) fail();
  const std::int64_t d = std::gcd(a.num, a.den);
  if (d > 1) {
    a.num /= d;
    a.den /= d;
  }
  return a;
}

std::string Alpha::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool Alpha::within(const JointVector& witness, const JointVector& y) const {
  for (std::size_t j = 0; j < 4; ++j) {
    if (witness[j] * den > num * y[j]) return false;
  }
  return true;
}

CoverCheck check_common_cover(std::span<const JointVector> witnesses, std::span<const JointVector> pf_com,
                              const Alpha& alpha) {
  require(!pf_com.empty(), "check_common_cover: empty common front");
  require(alpha.den > 0 && alpha.num >= alpha.den, "check_common_cover: alpha must be at least 1");
  CoverCheck out;
  out.covered = true;
  out.witness.resize(pf_com.size());
  for (std::size_t i = 0; i < pf_com.size(); ++i) {
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      if (alpha.within(witnesses[w], pf_com[i])) {
        out.witness[i] = w;
        break;
      }
    }
    out.covered = out.covered && out.witness[i].has_value();
  }
  return out;
}

bool CoverReport::all_covered() const {
  return std::all_of(hit_fe.begin(), hit_fe.end(), [](const auto& h) { return h.has_value(); });
}

CoverTracker::CoverTracker(std::vector<JointVector> pf_com, std::vector<Alpha> alphas)
    : pf_com_(std::move(pf_com)) {
  for (const auto& a : alphas) require(a.den > 0 && a.num >= a.den, "cover: alpha must be at least 1");
  report_.alphas = std::move(alphas);
  report_.hit_fe.assign(report_.alphas.size(), std::nullopt);
  report_.points.resize(report_.alphas.size());
  for (auto& row : report_.points) {
    for (const auto& y : pf_com_) row.push_back({y, false, std::nullopt});
  }
  remaining_.assign(report_.alphas.size(), pf_com_.size());
}

void CoverTracker::observe(const EvaluatedTree& t, std::uint64_t fe) {
  if (!enabled()) return;
  for (std::size_t a = 0; a < report_.alphas.size(); ++a) {
    if (remaining_[a] == 0) continue;
    for (auto& p : report_.points[a]) {
      if (!p.covered && report_.alphas[a].within(t.y, p.y)) {
        p.covered = true;
        p.witness = t;
        --remaining_[a];
      }
    }
    if (remaining_[a] == 0) report_.hit_fe[a] = fe;
  }
}

void BpbomstConfig::validate() const {
  require(p_g > 0.0 && p_g < 1.0, "BpbomstConfig: p_g must lie in (0,1)");
  require(!alpha_targets.empty(), "BpbomstConfig: no alpha targets");
  for (const auto& a : alpha_targets) {
    require(a.den > 0 && a.num >= a.den, "BpbomstConfig: alpha targets must be at least 1");
  }
}

namespace {

class BpbomstRun {
 public:
  BpbomstRun(const MultiWeightedGraph& g, std::span<const JointVector> pf_com, const BpbomstConfig& cfg,
             std::uint64_t seed)
      : g_(g),
        cfg_(cfg),
        rng_(seed),
        tracker_(std::vector<JointVector>(pf_com.begin(), pf_com.end()), cfg.alpha_targets) {
    result_.seed = seed;
  }

  // Evaluates and records a tree. Returns nullopt once the budget is spent.
  std::optional<EvaluatedTree> evaluate(SpanningTree tree, bool exempt = false) {
    if (!exempt && result_.fitness_evals >= cfg_.fe_budget) return std::nullopt;
    ++result_.fitness_evals;
    EvaluatedTree t = evaluate_tree(std::move(tree), g_);
    tracker_.observe(t, result_.fitness_evals);
    return t;
  }

  bool finished() const { return tracker_.done() || result_.fitness_evals >= cfg_.fe_budget; }

  void notify(const BpbomstObserver& observer) {
    if (observer) {
      observer({result_.iterations, result_.fitness_evals, result_.pools[0], result_.pools[1], result_.archive,
                tracker_.report()});
    }
  }

  BpbomstRunResult finish() {
    result_.cover = tracker_.report();
    result_.success = tracker_.done();
    return std::move(result_);
  }

  const MultiWeightedGraph& g_;
  const BpbomstConfig& cfg_;
  Rng rng_;
  CoverTracker tracker_;
  BpbomstRunResult result_;
};

const SpanningTree& uniform_member(const RepresentativePool& pool, Rng& rng) {
  return pool.at(rng.index(pool.size()));
}

}  // namespace

BpbomstRunResult run_cpr_nsga2_bpbomst(const MultiWeightedGraph& g, std::span<const JointVector> pf_com,
                                       const BpbomstConfig& cfg, std::uint64_t seed,
                                       const BpbomstObserver& observer) {
  cfg.validate();
  BpbomstRun run(g, pf_com, cfg, seed);
  auto& pools = run.result_.pools;
  auto& archive = run.result_.archive;
  const Subgraph whole = full_subgraph(g);

  const auto absorb = [&](const EvaluatedTree& t) {
    pools[0].insert(t);
    pools[1].insert(t);
    archive.insert(t);
  };

  for (std::size_t p = 0; p < 2; ++p) {
    const EvaluatedTree t = *run.evaluate(uniform_spanning_tree(whole, g, run.rng_), true);
    pools[p].insert(t);
    archive.insert(t);
  }
  run.notify(observer);

  while (!run.finished()) {
    bool cut = false;
    for (std::size_t p = 0; p < 2 && !cut; ++p) {
      const auto child = run.evaluate(one_edge_exchange(uniform_member(pools[p], run.rng_), g, run.rng_));
      if (child) {
        absorb(*child);
      } else {
        cut = true;
      }
    }
    if (!cut) {
      const SpanningTree& receiver = archive.at(run.rng_.index(archive.size()));
      SpanningTree common;
      if (run.rng_.bernoulli(cfg.p_g)) {
        const std::size_t choice = run.rng_.index(pools[0].size() + pools[1].size());
        const SpanningTree& provider =
            choice < pools[0].size() ? pools[0].at(choice) : pools[1].at(choice - pools[0].size());
        common = uniform_spanning_tree(edge_union(receiver, provider, g), g, run.rng_);
      } else {
        common = one_edge_exchange(receiver, g, run.rng_);
      }
      const auto child = run.evaluate(std::move(common));
      if (child) {
        absorb(*child);
      } else {
        cut = true;
      }
    }
    if (cut) break;
    ++run.result_.iterations;
    run.notify(observer);
  }
  return run.finish();
}

BpbomstRunResult run_partywise_baseline(const MultiWeightedGraph& g, std::span<const JointVector> pf_com,
                                        const BpbomstConfig& cfg, std::uint64_t seed,
                                        const BpbomstObserver& observer) {
  BpbomstRun run(g, pf_com, cfg, seed);
  auto& pools = run.result_.pools;
  const Subgraph whole = full_subgraph(g);

  for (std::size_t p = 0; p < 2; ++p) {
    const EvaluatedTree t = *run.evaluate(uniform_spanning_tree(whole, g, run.rng_), true);
    pools[p].insert(t);
    run.result_.archive.insert(t);
  }
  run.notify(observer);

  while (!run.finished()) {
    bool cut = false;
    for (std::size_t p = 0; p < 2; ++p) {
      const auto child = run.evaluate(one_edge_exchange(uniform_member(pools[p], run.rng_), g, run.rng_));
      if (!child) {
        cut = true;
        break;
      }
      pools[p].insert(*child);
      run.result_.archive.insert(*child);
    }
    if (cut) break;
    ++run.result_.iterations;
    run.notify(observer);
  }
  return run.finish();
}

CommonParetoSet brute_common_pareto(const MultiWeightedGraph& g, std::size_t cap) {
  const std::vector<SpanningTree> trees = enumerate_spanning_trees(full_subgraph(g), g, cap);
  std::vector<JointVector> ys;
  ys.reserve(trees.size());
  for (const auto& t : trees) ys.push_back(joint_vector(t, g));

  CommonParetoSet out;
  std::array<std::vector<char>, 2> optimal;
  for (int party = 1; party <= 2; ++party) {
    // Pareto-optimal party vectors, then every tree realizing one of them.
    NondominatedMap<2> front;
    for (std::size_t i = 0; i < trees.size(); ++i) front.insert(party_vector(ys[i], party), trees[i]);
    auto& flags = optimal[party - 1];
    flags.assign(trees.size(), 0);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (front.entries().count(party_vector(ys[i], party))) {
        flags[i] = 1;
        out.party_sets[party - 1].push_back(trees[i]);
      }
    }
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (optimal[0][i] && optimal[1][i]) {
      out.ps_com.push_back(trees[i]);
      out.pf_com.insert(ys[i]);
    }
  }
  return out;
}

}  // namespace mpmo
