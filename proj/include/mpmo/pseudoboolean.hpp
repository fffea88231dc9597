#ifndef MPMO_PSEUDOBOOLEAN_HPP
#define MPMO_PSEUDOBOOLEAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "mpmo/mpjcg.hpp"
#include "mpmo/rng.hpp"

namespace mpmo {

struct EvaluatedPoint {
  BitString bits;
  MpjcgEvaluation eval;
};

/// Offspring (u_1..u_c, v_{c+1}..v_n); `cut` must lie in [1, n-1].
BitString one_point_crossover(const BitString& u, const BitString& v, std::size_t cut);

/// Flips every bit independently with probability `rate`.
BitString standard_bit_mutation(const BitString& x, double rate, Rng& rng);

/// Multi-party nondominated set of every candidate ever submitted, with
/// search-point duplicates removed. Multi-party dominance on two bi-objective
/// parties coincides with Pareto dominance on the concatenated 4-vector, so
/// membership is decided on the distinct flattened vectors.
class CommonArchive {
 public:
  void update(std::span<const EvaluatedPoint> candidates);
  void insert(const EvaluatedPoint& candidate);

  [[nodiscard]] const std::vector<EvaluatedPoint>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool contains(const BitString& x) const { return index_.count(x) > 0; }

 private:
  std::vector<EvaluatedPoint> entries_;
  std::vector<FlatVector> keys_;
  std::unordered_set<BitString, BitStringHash> index_;
};

CommonArchive update_common_archive(const CommonArchive& archive,
                                    std::span<const EvaluatedPoint> candidates);

/// Party-wise nondomination ranks (1 = first front) of a pool.
std::vector<int> party_ranks(std::span<const EvaluatedPoint> pool, int party);

/// Two uniform draws with replacement; lower rank wins, ties uniformly.
/// Returns an index into `ranks`.
std::size_t rank_binary_tournament(std::span<const int> ranks, Rng& rng);
std::size_t rank_binary_tournament(std::span<const EvaluatedPoint> pool, int party, Rng& rng);

struct CprConfig {
  std::size_t population_size = 50;
  double p_g = 0.5;
  double p_c = 0.5;
  /// Per-bit mutation probability; 0 selects the default 1/n.
  double mutation_rate = 0.0;
  std::uint64_t fe_budget = 1'000'000;

  void validate(const MpjcgInstance& inst) const;
};

struct RunResult {
  std::uint64_t generations = 0;
  std::uint64_t fitness_evals = 0;
  std::optional<std::uint64_t> hit_fe;
  bool success = false;
  std::vector<EvaluatedPoint> final_archive;
  std::uint64_t seed = 0;
};

/// State exposed to observers after initialization (generation 0) and after
/// every completed generation.
struct CprGenerationView {
  std::uint64_t generation;
  std::uint64_t fitness_evals;
  const std::vector<EvaluatedPoint>& party1;
  const std::vector<EvaluatedPoint>& party2;
  const CommonArchive& archive;
};
using CprObserver = std::function<void(const CprGenerationView&)>;

/// Bi-population NSGA-II with cross-party one-point crossover, random
/// immigrants and a common archive. Initialization (2N evaluations) is always
/// performed; the budget is checked before every later evaluation and the run
/// stops at the end of the generation in which both common optima are archived.
RunResult run_cpr_nsga2_mpjcg(const MpjcgInstance& inst, const CprConfig& cfg, std::uint64_t seed,
                              const CprObserver& observer = {});

/// Called with every accepted state (including the start) and its potential.
using PayoffObserver = std::function<void(const BitString&, int potential)>;

/// Single-individual mutation search accepting only strict decreases of the
/// payoff potential. One evaluation per iteration; succeeds on reaching 1^n.
RunResult run_payoff_baseline(const MpjcgInstance& inst, std::uint64_t fe_budget, std::uint64_t seed,
                              const std::optional<BitString>& start = std::nullopt,
                              const PayoffObserver& observer = {});

/// Called after initialization and every generation with the number of
/// flattened front vectors generated so far.
using CoverageObserver = std::function<void(std::uint64_t generation, std::size_t covered)>;

std::size_t flattened_population_size(const MpjcgInstance& inst, double population_constant);

/// Mutation-only NSGA-II on the flattened 4-objective problem with population
/// c(n+1) and crowding-distance tie breaking. Succeeds once every vector of
/// the flattened front has been produced by some evaluation.
RunResult run_flattened_nsga2(const MpjcgInstance& inst, double population_constant,
                              std::uint64_t fe_budget, std::uint64_t seed,
                              const CoverageObserver& observer = {});

}  // namespace mpmo

#endif  // MPMO_PSEUDOBOOLEAN_HPP
