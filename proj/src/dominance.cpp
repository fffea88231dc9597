#include "mpmo/dominance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "mpmo/error.hpp"

namespace mpmo {

ObjectiveVector ObjectiveVector::concat(const ObjectiveVector& other) const {
  require(sense_ == other.sense_, "concat: sense mismatch");
  ObjectiveVector out = *this;
  out.values_.insert(out.values_.end(), other.values_.begin(), other.values_.end());
  return out;
}

std::string ObjectiveVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) os << ',';
    os << values_[i];
  }
  os << ')';
  return os.str();
}

DominanceOutcome flip(DominanceOutcome outcome) {
  switch (outcome) {
    case DominanceOutcome::Dominates:
      return DominanceOutcome::DominatedBy;
    case DominanceOutcome::DominatedBy:
      return DominanceOutcome::Dominates;
    default:
      return outcome;
  }
}

DominanceOutcome compare_raw(std::span<const std::int64_t> u, std::span<const std::int64_t> v,
                             Sense sense) {
  bool u_better = false;
  bool v_better = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == v[i]) continue;
    const bool u_wins = (sense == Sense::Maximize) ? (u[i] > v[i]) : (u[i] < v[i]);
    if (u_wins) {
      u_better = true;
    } else {
      v_better = true;
    }
    if (u_better && v_better) return DominanceOutcome::Incomparable;
  }
  if (u_better) return DominanceOutcome::Dominates;
  if (v_better) return DominanceOutcome::DominatedBy;
  return DominanceOutcome::Equal;
}

bool strictly_dominates(std::span<const std::int64_t> u, std::span<const std::int64_t> v,
                        Sense sense) {
  return compare_raw(u, v, sense) == DominanceOutcome::Dominates;
}

DominanceOutcome dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
  require(u.arity() == v.arity(), "dominates: arity mismatch " + u.to_string() + " vs " +
                                      v.to_string());
  require(u.sense() == v.sense(), "dominates: sense mismatch");
  return compare_raw(u.values(), v.values(), u.sense());
}

DominanceOutcome multi_party_dominates(std::span<const ObjectiveVector> x_parties,
                                       std::span<const ObjectiveVector> y_parties) {
  require(x_parties.size() == y_parties.size(), "multi_party_dominates: party count mismatch");
  bool any_strict = false;
  bool any_strict_reverse = false;
  bool x_weak_all = true;
  bool y_weak_all = true;
  for (std::size_t p = 0; p < x_parties.size(); ++p) {
    switch (dominates(x_parties[p], y_parties[p])) {
      case DominanceOutcome::Dominates:
        any_strict = true;
        y_weak_all = false;
        break;
      case DominanceOutcome::DominatedBy:
        any_strict_reverse = true;
        x_weak_all = false;
        break;
      case DominanceOutcome::Equal:
        break;
      case DominanceOutcome::Incomparable:
        x_weak_all = false;
        y_weak_all = false;
        break;
    }
  }
  if (x_weak_all && any_strict) return DominanceOutcome::Dominates;
  if (y_weak_all && any_strict_reverse) return DominanceOutcome::DominatedBy;
  if (x_weak_all && y_weak_all) return DominanceOutcome::Equal;
  return DominanceOutcome::Incomparable;
}

std::vector<int> FrontPartition::ranks(std::size_t n_points) const {
  std::vector<int> out(n_points, -1);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    for (std::size_t idx : fronts[f]) out[idx] = static_cast<int>(f) + 1;
  }
  return out;
}

FrontPartition non_dominated_sort(std::span<const ObjectiveVector> points) {
  FrontPartition partition;
  const std::size_t n = points.size();
  if (n == 0) return partition;
  const std::size_t arity = points[0].arity();
  const Sense sense = points[0].sense();
  for (const auto& p : points) {
    require(p.arity() == arity && p.sense() == sense, "non_dominated_sort: non-uniform input");
  }

  // dominated_count[i]: members still dominating i; dominated_set[i]: points i dominates.
  std::vector<std::size_t> dominated_count(n, 0);
  std::vector<std::vector<std::size_t>> dominated_set(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      switch (compare_raw(points[i].values(), points[j].values(), sense)) {
        case DominanceOutcome::Dominates:
          dominated_set[i].push_back(j);
          ++dominated_count[j];
          break;
        case DominanceOutcome::DominatedBy:
          dominated_set[j].push_back(i);
          ++dominated_count[i];
          break;
        default:
          break;
      }
    }
  }

  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominated_count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated_set[i]) {
        if (--dominated_count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    partition.fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return partition;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t arity = front[0].arity();
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < arity; ++obj) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return front[a][obj] < front[b][obj];
    });
    const std::int64_t lo = front[order.front()][obj];
    const std::int64_t hi = front[order.back()][obj];
    if (hi == lo) continue;
    const auto range = static_cast<double>(hi - lo);
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    for (std::size_t r = 1; r + 1 < n; ++r) {
      const auto gap = static_cast<double>(front[order[r + 1]][obj] - front[order[r - 1]][obj]);
      distance[order[r]] += gap / range;
    }
  }
  return distance;
}

std::vector<std::size_t> population_update(std::span<const ObjectiveVector> candidates,
                                           std::size_t capacity, TieRule tie_rule, Rng& rng) {
  require(capacity >= 1, "population_update: capacity must be >= 1");
  std::vector<std::size_t> selected;
  if (candidates.size() <= capacity) {
    selected.resize(candidates.size());
    std::iota(selected.begin(), selected.end(), std::size_t{0});
    return selected;
  }
  const FrontPartition partition = non_dominated_sort(candidates);
  for (const auto& front : partition.fronts) {
    if (selected.size() + front.size() <= capacity) {
      selected.insert(selected.end(), front.begin(), front.end());
      if (selected.size() == capacity) break;
      continue;
    }
    const std::size_t remaining = capacity - selected.size();
    if (tie_rule == TieRule::UniformTruncation) {
      std::vector<std::size_t> pool = front;
      // Partial Fisher-Yates: the first `remaining` slots form a uniform subset.
      for (std::size_t i = 0; i < remaining; ++i) {
        const std::size_t j = i + rng.index(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      selected.insert(selected.end(), pool.begin(), pool.begin() + static_cast<long>(remaining));
    } else {
      std::vector<ObjectiveVector> members;
      members.reserve(front.size());
      for (std::size_t idx : front) members.push_back(candidates[idx]);
      const std::vector<double> crowd = crowding_distance(members);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
      for (std::size_t r = 0; r < remaining; ++r) selected.push_back(front[order[r]]);
    }
    break;
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace mpmo
