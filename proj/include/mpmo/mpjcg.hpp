#ifndef MPMO_MPJCG_HPP
#define MPMO_MPJCG_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mpmo/dominance.hpp"

namespace mpmo {

/// Bi-party jump-count-with-gap benchmark parameters.
struct MpjcgInstance {
  int n = 0;
  int k = 0;

  /// Throws ContractViolation unless n >= 4 and 2 <= k <= n/2.
  static MpjcgInstance make(int n, int k);
  void validate() const;

  [[nodiscard]] int prefix_length() const { return n - k; }
};

/// Binary decision vector; position 0 is the leftmost bit.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool value = false) : bits_(length, value ? 1 : 0) {}
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters.
  static BitString parse(std::string_view text);
  static BitString ones(std::size_t length) { return BitString(length, true); }
  static BitString zeros(std::size_t length) { return BitString(length, false); }
  static BitString uniform(std::size_t length, Rng& rng);

  [[nodiscard]] std::size_t size() const { return bits_.size(); }
  [[nodiscard]] bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Number of ones in positions [begin, end).
  [[nodiscard]] int count_ones(std::size_t begin, std::size_t end) const;
  [[nodiscard]] int count_ones() const { return count_ones(0, bits_.size()); }

  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const BitString&, const BitString&) = default;
  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& x) const;
};

/// Party 1 = jump part, party 2 = gapped counting part. Both maximized.
struct MpjcgEvaluation {
  std::array<std::int64_t, 2> party1{};
  std::array<std::int64_t, 2> party2{};

  [[nodiscard]] ObjectiveVector party1_vector() const;
  [[nodiscard]] ObjectiveVector party2_vector() const;
  [[nodiscard]] std::array<std::int64_t, 4> flattened() const {
    return {party1[0], party1[1], party2[0], party2[1]};
  }
  friend bool operator==(const MpjcgEvaluation&, const MpjcgEvaluation&) = default;
};

struct PrefixSuffixStats {
  int prefix_ones = 0;      ///< i: ones among the first n-k bits
  int suffix_zeros = 0;     ///< b: zeros among the last k bits
  int missing_prefix = 0;   ///< u = (n-k) - i
  friend bool operator==(const PrefixSuffixStats&, const PrefixSuffixStats&) = default;
};

MpjcgEvaluation eval_mpjcg(const BitString& x, const MpjcgInstance& inst);
bool in_gap(const BitString& x, const MpjcgInstance& inst);
PrefixSuffixStats prefix_suffix_stats(const BitString& x, const MpjcgInstance& inst);
/// Four-objective flattened evaluation (f11, f12, f21, f22), maximized.
ObjectiveVector eval_fjcg(const BitString& x, const MpjcgInstance& inst);

/// Suffix penalty of the payoff potential; total over all b >= 0.
int suffix_penalty(int suffix_zeros);
/// Missing prefix ones plus the suffix penalty; zero exactly at 1^n.
int payoff_potential(const BitString& x, const MpjcgInstance& inst);

using FlatVector = std::array<std::int64_t, 4>;

struct ParetoCharacterization {
  std::function<bool(const BitString&)> ps1_membership;
  std::function<bool(const BitString&)> ps2_membership;
  std::set<BitString> ps_com;
  std::set<FlatVector> pf_flat;
};

/// Named pieces of the flattened front.
struct FlatFrontParts {
  FlatVector all_zeros;                 ///< image of 0^n
  FlatVector all_ones;                  ///< image of 1^n
  std::vector<FlatVector> middle;       ///< weights t = k..n-k with zero suffix
  std::vector<FlatVector> high_weight;  ///< j = 2..k-1 zeros, all in the suffix
  FlatVector prefix_hole;               ///< image of 1^{n-k-1} 0 1^k
};

FlatFrontParts flat_front_parts(const MpjcgInstance& inst);

ParetoCharacterization closed_form_pareto(const MpjcgInstance& inst);

inline constexpr int kBruteForceMaxBits = 22;

/// Exhaustive enumeration of {0,1}^n. Throws RefusalError when n > 22.
ParetoCharacterization brute_pareto_oracle(const MpjcgInstance& inst);

/// The two common Pareto-optimal points 1^{n-k}0^k and 1^n.
std::array<BitString, 2> common_optima(const MpjcgInstance& inst);

}  // namespace mpmo

#endif  // MPMO_MPJCG_HPP
