#include "mpmo/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "mpmo/error.hpp"

namespace mpmo {

namespace {

using Wide = __int128;

BigInt big(Wide v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? BigInt(-out) : out;
}

void require_positive(const JointVector& y) {
  for (std::int64_t c : y) require(c > 0, "reference vector must be componentwise positive");
}

// Party p's auxiliary value is num_p / den_p with den_p fixed by y.
std::array<Wide, 2> aux_numerators(const JointVector& v, const JointVector& y) {
  return {Wide(v[0]) * y[1] + Wide(v[1]) * y[0], Wide(v[2]) * y[3] + Wide(v[3]) * y[2]};
}

AuxPoint aux_from_numerators(const std::array<Wide, 2>& num, const JointVector& y) {
  return {Rational(big(num[0]), big(Wide(2) * y[0] * y[1])), Rational(big(num[1]), big(Wide(2) * y[2] * y[3]))};
}

// (b - a) x (c - a); positive for a counter-clockwise turn.
Rational cross(const AuxPoint& a, const AuxPoint& b, const AuxPoint& c) {
  return (b.a1 - a.a1) * (c.a2 - a.a2) - (b.a2 - a.a2) * (c.a1 - a.a1);
}

// Indices of hull points of a front already sorted by a1 with strictly
// decreasing a2.
std::vector<std::size_t> hull_indices(const std::vector<AuxPoint>& sorted) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    while (hull.size() >= 2 && cross(sorted[hull[hull.size() - 2]], sorted[hull.back()], sorted[i]) < Rational(0)) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

void require_front(const std::vector<AuxPoint>& sorted) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    require(sorted[i - 1].a1 < sorted[i].a1 && sorted[i - 1].a2 > sorted[i].a2,
            "support: input points must be distinct and mutually nondominated");
  }
}

bool weakly_dominates(const JointVector& a, const JointVector& b) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool strictly_dominates(const JointVector& a, const JointVector& b) { return a != b && weakly_dominates(a, b); }

// Flags trees whose party vector lies on that party's Pareto front.
std::vector<char> party_optimal(const TreeTable& table, int party) {
  std::vector<PartyVector> keys;
  keys.reserve(table.values.size());
  for (const auto& v : table.values) keys.push_back(party_vector(v, party));
  std::vector<PartyVector> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::set<PartyVector> front;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& k : sorted) {
    if (k[1] < best) {
      front.insert(k);
      best = k[1];
    }
  }
  std::vector<char> flags(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) flags[i] = front.count(keys[i]) ? 1 : 0;
  return flags;
}

std::vector<JointVector> common_front(const TreeTable& table) {
  const auto one = party_optimal(table, 1);
  const auto two = party_optimal(table, 2);
  std::set<JointVector> out;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    if (one[i] && two[i]) out.insert(table.values[i]);
  }
  return {out.begin(), out.end()};
}

// Canonical trees of the party-wise convex sub-front.
std::vector<SpanningTree> party_convex_representatives(const TreeTable& table, int party) {
  const auto flags = party_optimal(table, party);
  std::map<PartyVector, std::size_t> first;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) first.emplace(party_vector(table.values[i], party), i);
  }
  std::vector<AuxPoint> pts;
  std::vector<std::size_t> owner;
  for (const auto& [key, index] : first) {
    pts.push_back({Rational(key[0]), Rational(key[1])});
    owner.push_back(index);
  }
  std::vector<SpanningTree> reps;
  for (std::size_t h : hull_indices(pts)) reps.push_back(table.trees[owner[h]]);
  return reps;
}

std::vector<EdgeId> sorted_union(const SpanningTree& a, const SpanningTree& b) {
  std::vector<EdgeId> out;
  std::set_union(a.edge_ids.begin(), a.edge_ids.end(), b.edge_ids.begin(), b.edge_ids.end(), std::back_inserter(out));
  return out;
}

bool one_exchange_apart(const SpanningTree& a, const SpanningTree& b) {
  std::vector<EdgeId> diff;
  std::set_symmetric_difference(a.edge_ids.begin(), a.edge_ids.end(), b.edge_ids.begin(), b.edge_ids.end(),
                                std::back_inserter(diff));
  return diff.size() == 2;
}

}  // namespace

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return q.numerator().str();
  return q.numerator().str() + "/" + q.denominator().str();
}

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return ContractViolation("not a rational number: '" + text + "'"); };
  const auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string body = text;
  bool negative = false;
  if (!body.empty() && body[0] == '-') {
    negative = true;
    body.erase(0, 1);
  }
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits(num) || !digits(den) || BigInt(den) == 0) throw bad();
    out = Rational(BigInt(num), BigInt(den));
  } else if (const auto dot = body.find('.'); dot != std::string::npos) {
    const std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if (!(digits(whole) || whole.empty()) || !digits(frac)) throw bad();
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    out = Rational(BigInt(whole.empty() ? "0" : whole) * scale + BigInt(frac), scale);
  } else {
    if (!digits(body)) throw bad();
    out = Rational(BigInt(body));
  }
  return negative ? -out : out;
}

AuxPoint average_projection(const JointVector& value, const JointVector& y) {
  require_positive(y);
  return aux_from_numerators(aux_numerators(value, y), y);
}

AuxPoint average_projection(const SpanningTree& t, const JointVector& y, const MultiWeightedGraph& g) {
  return average_projection(tree_objectives(t, g).y, y);
}

Rational lifting_loss(const JointVector& value, const JointVector& y) {
  require_positive(y);
  Rational worst(1);
  for (std::size_t off : {0u, 2u}) {
    const Rational r1(value[off], y[off]);
    const Rational r2(value[off + 1], y[off + 1]);
    const Rational mean = (r1 + r2) / Rational(2);
    if (mean == Rational(0)) continue;
    worst = std::max(worst, std::max(r1, r2) / mean);
  }
  return worst;
}

Rational lifting_loss(const SpanningTree& t, const JointVector& y, const MultiWeightedGraph& g) {
  return lifting_loss(tree_objectives(t, g).y, y);
}

std::vector<AuxPoint> lower_left_support(std::vector<AuxPoint> points) {
  require(!points.empty(), "support: empty input");
  std::sort(points.begin(), points.end());
  require_front(points);
  std::vector<AuxPoint> out;
  for (std::size_t i : hull_indices(points)) out.push_back(points[i]);
  return out;
}

bool SupportCoverResult::ok() const {
  return std::all_of(witness.begin(), witness.end(), [](const auto& w) { return w.has_value(); });
}

SupportCoverResult support_cover_check(const std::vector<AuxPoint>& front) {
  SupportCoverResult out;
  out.support = lower_left_support(front);
  for (const AuxPoint& z : front) {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t s = 0; s < out.support.size(); ++s) {
      const AuxPoint& q = out.support[s];
      if (q.a1 > Rational(2) * z.a1 || q.a2 > Rational(2) * z.a2) continue;
      const Rational ratio = std::max(q.a1 / z.a1, q.a2 / z.a2);
      if (!best || ratio < best_ratio) {
        best = s;
        best_ratio = ratio;
      }
    }
    out.witness.push_back(best);
  }
  return out;
}

TreeTable tabulate_trees(const MultiWeightedGraph& g, std::size_t cap) {
  TreeTable table;
  table.trees = enumerate_spanning_trees(full_subgraph(g), g, cap);
  table.values.reserve(table.trees.size());
  for (const auto& t : table.trees) table.values.push_back(joint_vector(t, g));
  return table;
}

AuxiliaryFront auxiliary_front(const TreeTable& table, const JointVector& y) {
  require_positive(y);
  require(!table.trees.empty(), "auxiliary_front: no trees");
  std::vector<std::array<Wide, 2>> num(table.values.size());
  for (std::size_t i = 0; i < num.size(); ++i) num[i] = aux_numerators(table.values[i], y);
  std::vector<std::size_t> order(num.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return num[a] < num[b]; });

  AuxiliaryFront out;
  out.y = y;
  bool have_best = false;
  Wide best = 0;
  for (std::size_t pos = 0; pos < order.size();) {
    std::size_t end = pos;
    while (end < order.size() && num[order[end]] == num[order[pos]]) ++end;
    const auto& key = num[order[pos]];
    if (!have_best || key[1] < best) {
      have_best = true;
      best = key[1];
      // Table order is canonical, so the first index of each value wins.
      AuxFrontPoint point{aux_from_numerators(key, y), table.trees[order[pos]], {}, false, false};
      std::set<JointVector> seen;
      for (std::size_t k = pos; k < end; ++k) {
        if (seen.insert(table.values[order[k]]).second) point.realizing.push_back(table.trees[order[k]]);
      }
      out.front.push_back(std::move(point));
    }
    pos = end;
  }

  std::vector<AuxPoint> values;
  for (const auto& p : out.front) values.push_back(p.value);
  out.support = hull_indices(values);
  for (std::size_t h = 0; h < out.support.size(); ++h) {
    AuxFrontPoint& p = out.front[out.support[h]];
    p.on_hull = true;
    p.vertex = h == 0 || h + 1 == out.support.size() ||
               cross(values[out.support[h - 1]], values[out.support[h]], values[out.support[h + 1]]) != Rational(0);
    if (p.vertex) out.vertices.push_back(out.support[h]);
  }
  for (std::size_t j = 0; j + 1 < out.vertices.size(); ++j) {
    std::vector<std::size_t> segment;
    for (std::size_t idx : out.support) {
      if (idx > out.vertices[j] && idx <= out.vertices[j + 1]) segment.push_back(idx);
    }
    out.segments.push_back(std::move(segment));
  }
  return out;
}

AuxiliaryFront auxiliary_front(const MultiWeightedGraph& g, const JointVector& y, std::size_t cap) {
  return auxiliary_front(tabulate_trees(g, cap), y);
}

InstanceParams compute_instance_params(const MultiWeightedGraph& g, std::size_t cap) {
  const TreeTable table = tabulate_trees(g, cap);
  InstanceParams out;
  out.pf_com = common_front(table);
  require(!out.pf_com.empty(), "compute_instance_params: empty common front");

  std::vector<SpanningTree> providers = party_convex_representatives(table, 1);
  const auto second = party_convex_representatives(table, 2);
  out.c_pw = providers.size() + second.size();
  providers.insert(providers.end(), second.begin(), second.end());
  std::sort(providers.begin(), providers.end());
  providers.erase(std::unique(providers.begin(), providers.end()), providers.end());

  std::optional<std::uint64_t> c_min;
  for (std::size_t yi = 0; yi < out.pf_com.size(); ++yi) {
    const JointVector& y = out.pf_com[yi];
    const AuxiliaryFront front = auxiliary_front(table, y);
    for (std::size_t j = 0; j < front.segments.size(); ++j) {
      SegmentInfo info{yi, j + 1, front.segments[j].size(), false, std::nullopt};
      out.c_a += info.size;
      if (info.size > 0) c_min = std::min(c_min.value_or(info.size), static_cast<std::uint64_t>(info.size));
      const SpanningTree& left = front.front[front.vertices[j]].tree;
      const SpanningTree& right = front.front[front.vertices[j + 1]].tree;
      for (const auto& b : providers) {
        Subgraph h{g.n_vertices(), sorted_union(left, b)};
        if (!std::includes(h.edge_ids.begin(), h.edge_ids.end(), right.edge_ids.begin(), right.edge_ids.end())) {
          continue;
        }
        const BigInt count = count_spanning_trees(h, g);
        if (!info.omega || count < *info.omega) info.omega = count;
      }
      if (info.omega) {
        info.cpr_good = true;
        ++out.n_cpr;
        out.g_cpr += info.size;
        out.omega_cpr += *info.omega;
      }
      out.segments.push_back(std::move(info));
    }

    std::optional<Rational> fill, eff;
    for (std::size_t idx : front.support) {
      const AuxFrontPoint& p = front.front[idx];
      if (p.value.a1 > Rational(2) || p.value.a2 > Rational(2)) continue;
      const Rational canonical = lifting_loss(joint_vector(p.tree, g), y);
      if (!fill || canonical < *fill) fill = canonical;
      for (const auto& t : p.realizing) {
        const Rational l = lifting_loss(joint_vector(t, g), y);
        if (!eff || l < *eff) eff = l;
      }
    }
    require(fill.has_value(), "compute_instance_params: no support witness within factor 2");
    out.lambda_fill = yi == 0 ? *fill : std::max(out.lambda_fill, *fill);
    out.lambda_eff = yi == 0 ? *eff : std::max(out.lambda_eff, *eff);
  }
  out.c_min_a = out.c_a == 0 ? 1 : *c_min;
  return out;
}

std::string to_string(Fillability f) {
  switch (f) {
    case Fillability::Verified:
      return "verified";
    case Fillability::Refuted:
      return "refuted";
    case Fillability::Unknown:
      return "unknown";
  }
  return "unknown";
}

Fillability check_aux_fillability(const AuxiliaryFront& front, std::uint64_t search_limit) {
  std::vector<const std::vector<SpanningTree>*> choices;
  for (std::size_t idx : front.support) choices.push_back(&front.front[idx].realizing);
  if (choices.size() <= 1) return Fillability::Verified;

  std::uint64_t nodes = 0;
  bool exhausted = false;
  // Depth-first over realizing trees, position by position.
  std::function<bool(std::size_t, const SpanningTree&)> extend = [&](std::size_t pos, const SpanningTree& prev) {
    if (pos == choices.size()) return true;
    for (const auto& t : *choices[pos]) {
      if (++nodes > search_limit) {
        exhausted = true;
        return false;
      }
      if (one_exchange_apart(prev, t) && extend(pos + 1, t)) return true;
      if (exhausted) return false;
    }
    return false;
  };
  for (const auto& start : *choices[0]) {
    if (extend(1, start)) return Fillability::Verified;
    if (exhausted) return Fillability::Unknown;
  }
  return Fillability::Refuted;
}

Fillability check_aux_fillability(const MultiWeightedGraph& g, const JointVector& y, std::size_t cap,
                                  std::uint64_t search_limit) {
  return check_aux_fillability(auxiliary_front(g, y, cap), search_limit);
}

bool shortcut_usefulness(std::uint64_t s, const BigInt& omega, const Rational& p_g, std::uint64_t p_max,
                         std::uint64_t m) {
  require(p_g > Rational(0) && p_g < Rational(1), "shortcut_usefulness: p_g must lie in (0, 1)");
  require(s > 0 && omega > 0 && p_max > 0 && m > 0, "shortcut_usefulness: arguments must be positive");
  const Rational threshold = (Rational(1) - p_g) / p_g * Rational(BigInt(p_max), BigInt(m) * m) * Rational(omega);
  return Rational(BigInt(s)) >= threshold;
}

LayeredCoverReport verify_layered_cover(const MultiWeightedGraph& g, std::size_t cap) {
  const TreeTable table = tabulate_trees(g, cap);
  LayeredCoverReport out;
  out.trees = table.trees.size();
  const std::vector<JointVector> pf_com = common_front(table);
  out.pf_com_size = pf_com.size();
  const auto fail = [&](bool& flag, std::string what) {
    flag = false;
    out.failures.push_back(std::move(what));
  };
  const auto show = [](const JointVector& v) {
    return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + "," +
           std::to_string(v[3]) + ")";
  };

  for (const JointVector& y : pf_com) {
    for (const auto& v : table.values) {
      const Rational l = lifting_loss(v, y);
      out.max_lambda = std::max(out.max_lambda, l);
      if (l < Rational(1) || l > Rational(2)) fail(out.lambda_in_range, "lambda out of range at y=" + show(y) + " value=" + show(v));
    }

    const AuxiliaryFront front = auxiliary_front(table, y);
    for (const auto& p : front.front) {
      for (const auto& t : p.realizing) {
        const JointVector v = joint_vector(t, g);
        for (const auto& other : table.values) {
          if (strictly_dominates(other, v)) {
            fail(out.aux_front_nondominated, "auxiliary front member dominated at y=" + show(y));
            break;
          }
        }
      }
    }

    std::vector<AuxPoint> values;
    for (const auto& p : front.front) values.push_back(p.value);
    if (!support_cover_check(values).ok()) fail(out.support_cover_holds, "support cover fails at y=" + show(y));

    bool witness = false;
    for (std::size_t idx : front.support) {
      const AuxFrontPoint& p = front.front[idx];
      if (p.value.a1 > Rational(2) || p.value.a2 > Rational(2)) continue;
      witness = true;
      for (const auto& t : p.realizing) {
        const JointVector v = joint_vector(t, g);
        const Rational bound = Rational(2) * lifting_loss(v, y);
        for (std::size_t i = 0; i < 4; ++i) {
          if (Rational(v[i]) > bound * y[i]) {
            fail(out.lifting_holds, "lifting bound fails at y=" + show(y) + " value=" + show(v));
            break;
          }
        }
      }
    }
    if (!witness) fail(out.witnesses_exist, "no support witness within factor 2 at y=" + show(y));
  }
  return out;
}

}  // namespace mpmo
