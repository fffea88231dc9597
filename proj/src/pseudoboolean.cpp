#include "mpmo/pseudoboolean.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mpmo/dominance.hpp"
#include "mpmo/error.hpp"

namespace mpmo {

BitString one_point_crossover(const BitString& u, const BitString& v, std::size_t cut) {
  require(u.size() == v.size(), "one_point_crossover: parent length mismatch");
  require(cut >= 1 && cut + 1 <= u.size(), "one_point_crossover: cut must lie in [1, n-1]");
  BitString child = u;
  for (std::size_t i = cut; i < v.size(); ++i) child.set(i, v[i]);
  return child;
}

BitString standard_bit_mutation(const BitString& x, double rate, Rng& rng) {
  require(rate >= 0.0 && rate <= 1.0, "standard_bit_mutation: rate must lie in [0,1]");
  BitString y = x;
  if (rate == 0.0) return y;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (rng.bernoulli(rate)) y.flip(i);
  }
  return y;
}

void CommonArchive::insert(const EvaluatedPoint& candidate) {
  if (index_.count(candidate.bits)) return;
  const FlatVector v = candidate.eval.flattened();
  bool present = false;
  for (const auto& key : keys_) {
    const DominanceOutcome outcome = compare_raw(key, v, Sense::Maximize);
    if (outcome == DominanceOutcome::Dominates) return;
    if (outcome == DominanceOutcome::Equal) present = true;
  }
  if (!present) {
    const auto dominated = [&](const FlatVector& key) {
      return strictly_dominates(v, key, Sense::Maximize);
    };
    if (std::any_of(keys_.begin(), keys_.end(), dominated)) {
      std::erase_if(keys_, dominated);
      std::erase_if(entries_, [&](const EvaluatedPoint& e) {
        if (!dominated(e.eval.flattened())) return false;
        index_.erase(e.bits);
        return true;
      });
    }
    keys_.push_back(v);
  }
  entries_.push_back(candidate);
  index_.insert(candidate.bits);
}

void CommonArchive::update(std::span<const EvaluatedPoint> candidates) {
  for (const auto& c : candidates) insert(c);
}

CommonArchive update_common_archive(const CommonArchive& archive,
                                    std::span<const EvaluatedPoint> candidates) {
  CommonArchive next = archive;
  next.update(candidates);
  return next;
}

std::vector<int> party_ranks(std::span<const EvaluatedPoint> pool, int party) {
  require(party == 1 || party == 2, "party_ranks: party must be 1 or 2");
  std::vector<ObjectiveVector> vectors;
  vectors.reserve(pool.size());
  for (const auto& p : pool) {
    vectors.push_back(party == 1 ? p.eval.party1_vector() : p.eval.party2_vector());
  }
  return non_dominated_sort(vectors).ranks(pool.size());
}

std::size_t rank_binary_tournament(std::span<const int> ranks, Rng& rng) {
  require(!ranks.empty(), "rank_binary_tournament: empty pool");
  const std::size_t a = rng.index(ranks.size());
  const std::size_t b = rng.index(ranks.size());
  if (ranks[a] < ranks[b]) return a;
  if (ranks[b] < ranks[a]) return b;
  return rng.bernoulli(0.5) ? a : b;
}

std::size_t rank_binary_tournament(std::span<const EvaluatedPoint> pool, int party, Rng& rng) {
  const std::vector<int> ranks = party_ranks(pool, party);
  return rank_binary_tournament(ranks, rng);
}

void CprConfig::validate(const MpjcgInstance& inst) const {
  inst.validate();
  require(population_size >= static_cast<std::size_t>(inst.k) + 1,
          "CprConfig: population size must be at least k+1");
  require(p_g > 0.0 && p_g < 1.0, "CprConfig: p_g must lie in (0,1)");
  require(p_c > 0.0 && p_c < 1.0, "CprConfig: p_c must lie in (0,1)");
  require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "CprConfig: mutation rate must lie in (0,1]");
}

namespace {

// Budget-aware evaluator shared by the search processes.
class Evaluator {
 public:
  Evaluator(const MpjcgInstance& inst, std::uint64_t budget) : inst_(inst), budget_(budget) {}

  [[nodiscard]] bool exhausted() const { return count_ >= budget_; }
  [[nodiscard]] std::uint64_t count() const { return count_; }

  EvaluatedPoint operator()(BitString x) {
    ++count_;
    MpjcgEvaluation e = eval_mpjcg(x, inst_);
    return {std::move(x), e};
  }

 private:
  const MpjcgInstance& inst_;
  std::uint64_t budget_;
  std::uint64_t count_ = 0;
};

// Records the evaluation index at which both common optima have been seen.
class PairTracker {
 public:
  explicit PairTracker(const MpjcgInstance& inst) : targets_(common_optima(inst)) {}

  void observe(const BitString& x, std::uint64_t fe) {
    for (std::size_t t = 0; t < 2; ++t) {
      if (!seen_[t] && x == targets_[t]) {
        seen_[t] = true;
        if (seen_[0] && seen_[1]) hit_ = fe;
      }
    }
  }
  [[nodiscard]] std::optional<std::uint64_t> hit() const { return hit_; }
  [[nodiscard]] const std::array<BitString, 2>& targets() const { return targets_; }

 private:
  std::array<BitString, 2> targets_;
  std::array<bool, 2> seen_{false, false};
  std::optional<std::uint64_t> hit_;
};

// Rep_i followed by PopulationUpdate_i with uniform truncation. The first
// candidate encountered for each party vector is the representative.
std::vector<EvaluatedPoint> party_update(const std::vector<EvaluatedPoint>& candidates, int party,
                                         std::size_t capacity, Rng& rng) {
  std::vector<EvaluatedPoint> reps;
  std::set<std::array<std::int64_t, 2>> seen;
  for (const auto& c : candidates) {
    const auto& key = party == 1 ? c.eval.party1 : c.eval.party2;
    if (seen.insert(key).second) reps.push_back(c);
  }
  std::vector<ObjectiveVector> vectors;
  vectors.reserve(reps.size());
  for (const auto& r : reps) {
    vectors.push_back(party == 1 ? r.eval.party1_vector() : r.eval.party2_vector());
  }
  const std::vector<std::size_t> keep =
      population_update(vectors, capacity, TieRule::UniformTruncation, rng);
  std::vector<EvaluatedPoint> next;
  next.reserve(keep.size());
  for (std::size_t idx : keep) next.push_back(std::move(reps[idx]));
  return next;
}

}  // namespace

RunResult run_cpr_nsga2_mpjcg(const MpjcgInstance& inst, const CprConfig& cfg, std::uint64_t seed,
                              const CprObserver& observer) {
  cfg.validate(inst);
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(inst.n);
  const double rate = cfg.mutation_rate > 0.0 ? cfg.mutation_rate : 1.0 / static_cast<double>(n);
  const std::size_t N = cfg.population_size;

  Evaluator evaluate(inst, cfg.fe_budget);
  PairTracker tracker(inst);
  CommonArchive archive;
  RunResult result;
  result.seed = seed;

  std::array<std::vector<EvaluatedPoint>, 2> initial;
  for (auto& batch : initial) {
    for (std::size_t r = 0; r < N; ++r) {
      batch.push_back(evaluate(BitString::uniform(n, rng)));
      tracker.observe(batch.back().bits, evaluate.count());
    }
  }
  std::array<std::vector<EvaluatedPoint>, 2> population = {
      party_update(initial[0], 1, N, rng), party_update(initial[1], 2, N, rng)};
  archive.update(initial[0]);
  archive.update(initial[1]);

  const auto archived_pair = [&] {
    return archive.contains(tracker.targets()[0]) && archive.contains(tracker.targets()[1]);
  };
  if (observer) observer({0, evaluate.count(), population[0], population[1], archive});

  bool done = archived_pair();
  while (!done && !evaluate.exhausted()) {
    bool cut_short = false;
    std::array<std::vector<EvaluatedPoint>, 2> pool = population;  // P-hat
    for (auto& p : pool) {
      if (evaluate.exhausted()) {
        cut_short = true;
        break;
      }
      p.push_back(evaluate(BitString::uniform(n, rng)));
      tracker.observe(p.back().bits, evaluate.count());
    }

    std::array<std::vector<EvaluatedPoint>, 2> offspring;
    if (!cut_short) {
      const std::array<std::vector<int>, 2> ranks = {party_ranks(pool[0], 1), party_ranks(pool[1], 2)};
      for (std::size_t party = 0; party < 2 && !cut_short; ++party) {
        const std::size_t other = 1 - party;
        for (std::size_t r = 0; r < N; ++r) {
          if (evaluate.exhausted()) {
            cut_short = true;
            break;
          }
          const BitString& a = pool[party][rank_binary_tournament(ranks[party], rng)].bits;
          const BitString& b = rng.bernoulli(cfg.p_g)
                                   ? pool[other][rank_binary_tournament(ranks[other], rng)].bits
                                   : pool[party][rank_binary_tournament(ranks[party], rng)].bits;
          BitString child = rng.bernoulli(cfg.p_c) ? one_point_crossover(a, b, 1 + rng.index(n - 1)) : a;
          offspring[party].push_back(evaluate(standard_bit_mutation(child, rate, rng)));
          tracker.observe(offspring[party].back().bits, evaluate.count());
        }
      }
    }

    for (std::size_t party = 0; party < 2; ++party) {
      archive.update(pool[party]);
      archive.update(offspring[party]);
    }
    if (cut_short) break;

    for (std::size_t party = 0; party < 2; ++party) {
      std::vector<EvaluatedPoint> merged = std::move(pool[party]);
      merged.insert(merged.end(), offspring[party].begin(), offspring[party].end());
      population[party] = party_update(merged, static_cast<int>(party) + 1, N, rng);
    }
    ++result.generations;
    if (observer) observer({result.generations, evaluate.count(), population[0], population[1], archive});
    done = archived_pair();
  }

  result.fitness_evals = evaluate.count();
  result.success = archived_pair();
  if (result.success) result.hit_fe = tracker.hit();
  result.final_archive = archive.entries();
  return result;
}

RunResult run_payoff_baseline(const MpjcgInstance& inst, std::uint64_t fe_budget, std::uint64_t seed,
                              const std::optional<BitString>& start, const PayoffObserver& observer) {
  inst.validate();
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(inst.n);
  const double rate = 1.0 / static_cast<double>(n);
  BitString current = start ? *start : BitString::uniform(n, rng);
  require(current.size() == n, "run_payoff_baseline: start length mismatch");
  int potential = payoff_potential(current, inst);
  if (observer) observer(current, potential);

  RunResult result;
  result.seed = seed;
  std::uint64_t iterations = 0;
  if (potential == 0) result.hit_fe = 0;
  while (potential != 0 && iterations < fe_budget) {
    BitString candidate = standard_bit_mutation(current, rate, rng);
    ++iterations;
    const int candidate_potential = payoff_potential(candidate, inst);
    if (candidate_potential < potential) {
      current = std::move(candidate);
      potential = candidate_potential;
      if (observer) observer(current, potential);
      if (potential == 0) result.hit_fe = iterations;
    }
  }
  result.generations = iterations;
  result.fitness_evals = iterations;
  result.success = potential == 0;
  result.final_archive.push_back({current, eval_mpjcg(current, inst)});
  return result;
}

std::size_t flattened_population_size(const MpjcgInstance& inst, double population_constant) {
  require(population_constant > 1.0, "flattened NSGA-II requires population constant c > 1");
  return static_cast<std::size_t>(std::llround(population_constant * (inst.n + 1)));
}

RunResult run_flattened_nsga2(const MpjcgInstance& inst, double population_constant,
                              std::uint64_t fe_budget, std::uint64_t seed,
                              const CoverageObserver& observer) {
  inst.validate();
  const std::size_t N = flattened_population_size(inst, population_constant);
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(inst.n);
  const double rate = 1.0 / static_cast<double>(n);
  const ParetoCharacterization target = closed_form_pareto(inst);

  Evaluator evaluate(inst, fe_budget);
  std::set<FlatVector> covered;
  RunResult result;
  result.seed = seed;
  const auto record = [&](const EvaluatedPoint& p) {
    const FlatVector v = p.eval.flattened();
    if (target.pf_flat.count(v) && covered.insert(v).second && covered.size() == target.pf_flat.size()) {
      result.hit_fe = evaluate.count();
    }
  };

  std::vector<EvaluatedPoint> population;
  population.reserve(2 * N);
  for (std::size_t r = 0; r < N; ++r) {
    population.push_back(evaluate(BitString::uniform(n, rng)));
    record(population.back());
  }
  if (observer) observer(0, covered.size());

  bool cut_short = false;
  while (!result.hit_fe && !evaluate.exhausted() && !cut_short) {
    const std::size_t parents = population.size();
    for (std::size_t r = 0; r < N; ++r) {
      if (evaluate.exhausted()) {
        cut_short = true;
        break;
      }
      const BitString& parent = population[rng.index(parents)].bits;
      population.push_back(evaluate(standard_bit_mutation(parent, rate, rng)));
      record(population.back());
    }
    if (cut_short) break;
    std::vector<ObjectiveVector> vectors;
    vectors.reserve(population.size());
    for (const auto& p : population) {
      vectors.push_back(ObjectiveVector(std::span<const std::int64_t>(p.eval.flattened()), Sense::Maximize));
    }
    const std::vector<std::size_t> keep = population_update(vectors, N, TieRule::Crowding, rng);
    std::vector<EvaluatedPoint> next;
    next.reserve(2 * N);
    for (std::size_t idx : keep) next.push_back(std::move(population[idx]));
    population = std::move(next);
    ++result.generations;
    if (observer) observer(result.generations, covered.size());
  }

  result.fitness_evals = evaluate.count();
  result.success = result.hit_fe.has_value();
  result.final_archive = std::move(population);
  return result;
}

}  // namespace mpmo
