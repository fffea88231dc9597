#ifndef MPMO_BPBOMST_HPP
#define MPMO_BPBOMST_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mpmo/graph.hpp"
#include "mpmo/rng.hpp"

namespace mpmo {

struct EvaluatedTree {
  SpanningTree tree;
  JointVector y{};
};

EvaluatedTree evaluate_tree(SpanningTree tree, const MultiWeightedGraph& g);

/// Minimization Pareto set keyed by objective vector, one canonical tree per
/// key.
template <std::size_t D>
class NondominatedMap {
 public:
  using Key = std::array<std::int64_t, D>;

  /// Returns true if the map changed.
  bool insert(const Key& key, const SpanningTree& tree) {
    const auto found = entries_.find(key);
    if (found != entries_.end()) {
      if (!canonical_less(tree, found->second)) return false;
      found->second = tree;
      return true;
    }
    for (const auto& [k, t] : entries_) {
      if (strictly_dominates(k, key, Sense::Minimize)) return false;
    }
    std::erase_if(entries_, [&](const auto& kv) { return strictly_dominates(key, kv.first, Sense::Minimize); });
    entries_.emplace(key, tree);
    return true;
  }

  [[nodiscard]] const std::map<Key, SpanningTree>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  /// Some key weakly dominates `key`.
  [[nodiscard]] bool covers(const Key& key) const {
    for (const auto& [k, t] : entries_) {
      if (std::equal(k.begin(), k.end(), key.begin(), std::less_equal<>())) return true;
    }
    return false;
  }

 private:
  std::map<Key, SpanningTree> entries_;
};

/// Party-wise nondominated representatives 𝒫_p.
class RepresentativePool {
 public:
  explicit RepresentativePool(int party);

  bool insert(const EvaluatedTree& t);
  [[nodiscard]] int party() const { return party_; }
  [[nodiscard]] const std::map<PartyVector, SpanningTree>& entries() const { return map_.entries(); }
  [[nodiscard]] std::size_t size() const { return map_.size(); }
  /// Member at position `i` in key order.
  [[nodiscard]] const SpanningTree& at(std::size_t i) const;

 private:
  int party_;
  NondominatedMap<2> map_;
};

/// Joint nondominated archive over Y.
class JointArchive {
 public:
  bool insert(const EvaluatedTree& t) { return map_.insert(t.y, t.tree); }
  [[nodiscard]] const std::map<JointVector, SpanningTree>& entries() const { return map_.entries(); }
  [[nodiscard]] std::size_t size() const { return map_.size(); }
  [[nodiscard]] const SpanningTree& at(std::size_t i) const;
  [[nodiscard]] bool covers(const JointVector& y) const { return map_.covers(y); }

 private:
  NondominatedMap<4> map_;
};

RepresentativePool partywise_pool_update(const RepresentativePool& pool, std::span<const EvaluatedTree> q,
                                         const MultiWeightedGraph& g);
JointArchive joint_archive_update(const JointArchive& archive, std::span<const EvaluatedTree> q,
                                  const MultiWeightedGraph& g);

/// Exact positive rational approximation ratio num/den.
struct Alpha {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// Accepts "2", "3/2" or a finite decimal such as "1.25".
  static Alpha parse(const std::string& text);
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Y(T) <= alpha * y componentwise.
  [[nodiscard]] bool within(const JointVector& witness, const JointVector& y) const;

  friend bool operator==(const Alpha& a, const Alpha& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator<(const Alpha& a, const Alpha& b) { return a.num * b.den < b.num * a.den; }
};

struct CoverCheck {
  bool covered = false;
  /// Index into the witness list for each front point, if any.
  std::vector<std::optional<std::size_t>> witness;
};

/// Throws ContractViolation on an empty front or alpha < 1.
CoverCheck check_common_cover(std::span<const JointVector> witnesses, std::span<const JointVector> pf_com,
                              const Alpha& alpha);

struct CoverPoint {
  JointVector y{};
  bool covered = false;
  std::optional<EvaluatedTree> witness;
};

struct CoverReport {
  std::vector<Alpha> alphas;
  std::vector<std::vector<CoverPoint>> points;  ///< [alpha][front point]
  std::vector<std::optional<std::uint64_t>> hit_fe;

  [[nodiscard]] bool covered(std::size_t alpha_index) const { return hit_fe.at(alpha_index).has_value(); }
  [[nodiscard]] bool all_covered() const;
};

/// Incremental cover bookkeeping against a known common front.
class CoverTracker {
 public:
  CoverTracker(std::vector<JointVector> pf_com, std::vector<Alpha> alphas);

  void observe(const EvaluatedTree& t, std::uint64_t fe);
  [[nodiscard]] const CoverReport& report() const { return report_; }
  [[nodiscard]] bool enabled() const { return !pf_com_.empty(); }
  [[nodiscard]] bool done() const { return enabled() && report_.all_covered(); }

 private:
  std::vector<JointVector> pf_com_;
  CoverReport report_;
  std::vector<std::size_t> remaining_;
};

struct BpbomstConfig {
  double p_g = 0.5;
  std::uint64_t fe_budget = 100'000;
  std::vector<Alpha> alpha_targets{{2, 1}, {3, 1}, {4, 1}};

  void validate() const;
};

struct BpbomstRunResult {
  std::uint64_t iterations = 0;
  std::uint64_t fitness_evals = 0;
  /// All alpha targets covered; false when cover tracking is disabled.
  bool success = false;
  CoverReport cover;
  JointArchive archive;
  std::array<RepresentativePool, 2> pools{RepresentativePool(1), RepresentativePool(2)};
  std::uint64_t seed = 0;
};

struct BpbomstIterationView {
  std::uint64_t iteration;
  std::uint64_t fitness_evals;
  const RepresentativePool& pool1;
  const RepresentativePool& pool2;
  const JointArchive& archive;
  const CoverReport& cover;
};
using BpbomstObserver = std::function<void(const BpbomstIterationView&)>;

/// Pools seeded with one uniform spanning tree each (2 evaluations, exempt
/// from the budget); afterwards three evaluations per iteration. An empty
/// `pf_com` disables cover tracking and the run uses its whole budget.
BpbomstRunResult run_cpr_nsga2_bpbomst(const MultiWeightedGraph& g, std::span<const JointVector> pf_com,
                                       const BpbomstConfig& cfg, std::uint64_t seed,
                                       const BpbomstObserver& observer = {});

/// Two independent party-wise processes with a passive joint recorder; two
/// evaluations per iteration. `cfg.p_g` is ignored.
BpbomstRunResult run_partywise_baseline(const MultiWeightedGraph& g, std::span<const JointVector> pf_com,
                                        const BpbomstConfig& cfg, std::uint64_t seed,
                                        const BpbomstObserver& observer = {});

struct CommonParetoSet {
  std::vector<SpanningTree> ps_com;
  std::set<JointVector> pf_com;
  std::array<std::vector<SpanningTree>, 2> party_sets;
};

/// Exhaustive oracle; throws RefusalError past `cap` spanning trees.
CommonParetoSet brute_common_pareto(const MultiWeightedGraph& g, std::size_t cap);

}  // namespace mpmo

#endif  // MPMO_BPBOMST_HPP
