#ifndef MPMO_ANALYSIS_HPP
#define MPMO_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "mpmo/graph.hpp"

namespace mpmo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

std::string to_string(const Rational& q);
/// Accepts "3", "3/2" or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);

/// A point in the two-dimensional auxiliary space (one coordinate per party).
struct AuxPoint {
  Rational a1;
  Rational a2;
  friend bool operator==(const AuxPoint&, const AuxPoint&) = default;
  friend bool operator<(const AuxPoint& x, const AuxPoint& y) {
    return x.a1 != y.a1 ? x.a1 < y.a1 : x.a2 < y.a2;
  }
};

/// Per party, the mean of the two objective ratios against `y`.
AuxPoint average_projection(const JointVector& value, const JointVector& y);
AuxPoint average_projection(const SpanningTree& t, const JointVector& y, const MultiWeightedGraph& g);

/// max over parties of (largest ratio) / (mean ratio); always in [1, 2].
Rational lifting_loss(const JointVector& value, const JointVector& y);
Rational lifting_loss(const SpanningTree& t, const JointVector& y, const MultiWeightedGraph& g);

/// Points of a two-dimensional Pareto front on its lower-left convex hull,
/// sorted by the first coordinate. Collinear hull points are kept. Throws
/// ContractViolation if two inputs are equal or one dominates the other.
std::vector<AuxPoint> lower_left_support(std::vector<AuxPoint> points);

struct SupportCoverResult {
  std::vector<AuxPoint> support;
  /// witness[i] indexes `support`; unset when front[i] has no witness.
  std::vector<std::optional<std::size_t>> witness;
  bool ok() const;
};

/// For each front point z, the support point q with q <= 2z minimizing
/// max(q1/z1, q2/z2).
SupportCoverResult support_cover_check(const std::vector<AuxPoint>& front);

/// All spanning trees of a graph with their joint vectors, in canonical order.
struct TreeTable {
  std::vector<SpanningTree> trees;
  std::vector<JointVector> values;
};
TreeTable tabulate_trees(const MultiWeightedGraph& g, std::size_t cap);

struct AuxFrontPoint {
  AuxPoint value;
  SpanningTree tree;  ///< canonical among all trees with this value
  /// One canonical tree per distinct joint vector realizing the value.
  std::vector<SpanningTree> realizing;
  bool on_hull = false;
  bool vertex = false;
};

struct AuxiliaryFront {
  JointVector y{};
  std::vector<AuxFrontPoint> front;         ///< sorted by first coordinate
  std::vector<std::size_t> support;         ///< hull points, collinear included
  std::vector<std::size_t> vertices;        ///< strict corners of the hull
  std::vector<std::vector<std::size_t>> segments;  ///< hull points in (v_j, v_j+1]
};

AuxiliaryFront auxiliary_front(const TreeTable& table, const JointVector& y);
AuxiliaryFront auxiliary_front(const MultiWeightedGraph& g, const JointVector& y, std::size_t cap);

struct SegmentInfo {
  std::size_t y_index = 0;
  std::size_t j = 0;
  std::size_t size = 0;
  bool cpr_good = false;
  std::optional<BigInt> omega;
};

struct InstanceParams {
  std::vector<JointVector> pf_com;
  std::uint64_t c_a = 0;
  std::uint64_t c_min_a = 1;
  std::uint64_t n_cpr = 0;
  std::uint64_t g_cpr = 0;
  BigInt omega_cpr = 0;
  std::uint64_t c_pw = 0;
  Rational lambda_fill{1};
  /// Minimum over every tree realizing a qualifying support value, not only
  /// the canonical one; never larger than lambda_fill.
  Rational lambda_eff{1};
  std::vector<SegmentInfo> segments;
};

InstanceParams compute_instance_params(const MultiWeightedGraph& g, std::size_t cap);

enum class Fillability { Verified, Refuted, Unknown };
std::string to_string(Fillability f);

/// Looks for a one-exchange chain through the convex sub-front, in order of
/// the first coordinate, choosing one realizing tree per point. The node
/// budget bounds the depth-first search.
Fillability check_aux_fillability(const AuxiliaryFront& front, std::uint64_t search_limit);
Fillability check_aux_fillability(const MultiWeightedGraph& g, const JointVector& y, std::size_t cap,
                                  std::uint64_t search_limit);

/// s >= ((1 - p_g) / p_g) * (P_max / m^2) * omega, with the implied constant 1.
bool shortcut_usefulness(std::uint64_t s, const BigInt& omega, const Rational& p_g, std::uint64_t p_max,
                         std::uint64_t m);

/// Exhaustive check of the layered support-cover statements on one instance.
struct LayeredCoverReport {
  std::size_t trees = 0;
  std::size_t pf_com_size = 0;
  bool lambda_in_range = true;
  bool witnesses_exist = true;
  bool lifting_holds = true;
  bool aux_front_nondominated = true;
  bool support_cover_holds = true;
  Rational max_lambda{1};
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

LayeredCoverReport verify_layered_cover(const MultiWeightedGraph& g, std::size_t cap);

}  // namespace mpmo

#endif  // MPMO_ANALYSIS_HPP
