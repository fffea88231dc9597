#ifndef MPMO_DOMINANCE_HPP
#define MPMO_DOMINANCE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "mpmo/rng.hpp"

namespace mpmo {

enum class Sense { Maximize, Minimize };

/// Integer objective tuple tagged with its optimization sense. Arity up to
/// four is stored inline.
class ObjectiveVector {
 public:
  using Storage = boost::container::small_vector<std::int64_t, 4>;

  ObjectiveVector() = default;
  ObjectiveVector(std::initializer_list<std::int64_t> values, Sense sense)
      : values_(values), sense_(sense) {}
  ObjectiveVector(std::span<const std::int64_t> values, Sense sense)
      : values_(values.begin(), values.end()), sense_(sense) {}

  [[nodiscard]] std::size_t arity() const { return values_.size(); }
  [[nodiscard]] Sense sense() const { return sense_; }
  [[nodiscard]] std::int64_t operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const std::int64_t> values() const {
    return {values_.data(), values_.size()};
  }

  /// Concatenation, used for flattening party-wise vectors.
  [[nodiscard]] ObjectiveVector concat(const ObjectiveVector& other) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.sense_ == b.sense_ && a.values_ == b.values_;
  }
  friend bool operator<(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.sense_ != b.sense_) return a.sense_ < b.sense_;
    return a.values_ < b.values_;
  }

 private:
  Storage values_;
  Sense sense_ = Sense::Maximize;
};

enum class DominanceOutcome { Dominates, DominatedBy, Equal, Incomparable };

DominanceOutcome flip(DominanceOutcome outcome);

/// Pareto comparison of two vectors with the same arity and sense.
/// Throws ContractViolation on arity or sense mismatch.
DominanceOutcome dominates(const ObjectiveVector& u, const ObjectiveVector& v);

/// Unchecked comparison on raw spans; `sense` applies to both.
DominanceOutcome compare_raw(std::span<const std::int64_t> u, std::span<const std::int64_t> v,
                             Sense sense);

/// True iff u strictly Pareto-dominates v (unchecked).
bool strictly_dominates(std::span<const std::int64_t> u, std::span<const std::int64_t> v,
                        Sense sense);

/// Multi-party relation: Dominates iff u weakly dominates v for every party
/// and strictly for at least one. Both lists must have the same party count
/// and per-party arity and sense.
DominanceOutcome multi_party_dominates(std::span<const ObjectiveVector> x_parties,
                                       std::span<const ObjectiveVector> y_parties);

/// Ordered fronts R_1..R_v as index sets into the sorted input.
struct FrontPartition {
  std::vector<std::vector<std::size_t>> fronts;

  [[nodiscard]] std::vector<int> ranks(std::size_t n_points) const;
};

/// Naive O(n^2 * arity) nondominated sorting. Within each front, indices keep
/// their input order. An empty input yields an empty partition.
FrontPartition non_dominated_sort(std::span<const ObjectiveVector> points);

/// Crowding distance of each member of one front. Fronts with at most two
/// members get +inf everywhere. Otherwise each objective with a nonzero range
/// gives +inf to its boundary points and (next - prev) / (max - min) to the
/// interior; zero-range objectives contribute nothing.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

enum class TieRule { Crowding, UniformTruncation };

/// NSGA-II environmental selection: admit whole fronts while they fit, then
/// resolve the overflowing front with `tie_rule`. Returns the selected input
/// indices, sorted ascending. `capacity` must be at least 1.
std::vector<std::size_t> population_update(std::span<const ObjectiveVector> candidates,
                                           std::size_t capacity, TieRule tie_rule, Rng& rng);

}  // namespace mpmo

#endif  // MPMO_DOMINANCE_HPP
