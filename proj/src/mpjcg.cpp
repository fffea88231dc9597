#include "mpmo/mpjcg.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "mpmo/error.hpp"

namespace mpmo {

MpjcgInstance MpjcgInstance::make(int n, int k) {
  MpjcgInstance inst{n, k};
  inst.validate();
  return inst;
}

void MpjcgInstance::validate() const {
  require(n >= 4, "MP-JCG instance requires n >= 4, got n=" + std::to_string(n));
  require(k >= 2 && k <= n / 2, "MP-JCG instance requires 2 <= k <= floor(n/2), got n=" +
                                    std::to_string(n) + " k=" + std::to_string(k));
}

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) require(b <= 1, "BitString: entries must be 0 or 1");
}

BitString BitString::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    require(c == '0' || c == '1', "BitString::parse: unexpected character");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::uniform(std::size_t length, Rng& rng) {
  BitString x(length);
  std::size_t i = 0;
  while (i < length) {
    std::uint64_t word = rng.next();
    for (int b = 0; b < 64 && i < length; ++b, ++i) {
      x.bits_[i] = static_cast<std::uint8_t>((word >> b) & 1U);
    }
  }
  return x;
}

int BitString::count_ones(std::size_t begin, std::size_t end) const {
  int total = 0;
  for (std::size_t i = begin; i < end; ++i) total += bits_[i];
  return total;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::size_t BitStringHash::operator()(const BitString& x) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : x.bits()) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(splitmix64(h ^ x.size()));
}

ObjectiveVector MpjcgEvaluation::party1_vector() const {
  return ObjectiveVector({party1[0], party1[1]}, Sense::Maximize);
}

ObjectiveVector MpjcgEvaluation::party2_vector() const {
  return ObjectiveVector({party2[0], party2[1]}, Sense::Maximize);
}

namespace {

void check_length(const BitString& x, const MpjcgInstance& inst) {
  require(x.size() == static_cast<std::size_t>(inst.n),
          "bit string length " + std::to_string(x.size()) + " != n=" + std::to_string(inst.n));
}

}  // namespace

PrefixSuffixStats prefix_suffix_stats(const BitString& x, const MpjcgInstance& inst) {
  check_length(x, inst);
  const auto split = static_cast<std::size_t>(inst.prefix_length());
  PrefixSuffixStats s;
  s.prefix_ones = x.count_ones(0, split);
  s.suffix_zeros = inst.k - x.count_ones(split, x.size());
  s.missing_prefix = inst.prefix_length() - s.prefix_ones;
  return s;
}

bool in_gap(const BitString& x, const MpjcgInstance& inst) {
  const PrefixSuffixStats s = prefix_suffix_stats(x, inst);
  return s.missing_prefix == 0 && s.suffix_zeros == 1;
}

MpjcgEvaluation eval_mpjcg(const BitString& x, const MpjcgInstance& inst) {
  const PrefixSuffixStats s = prefix_suffix_stats(x, inst);
  const int n = inst.n;
  const int k = inst.k;
  const int ones = s.prefix_ones + (k - s.suffix_zeros);
  const int zeros = n - ones;

  MpjcgEvaluation e;
  e.party1[0] = (ones <= n - k || ones == n) ? k + ones : n - ones;
  e.party1[1] = (zeros <= n - k || zeros == n) ? k + zeros : n - zeros;
  if (s.missing_prefix == 0 && s.suffix_zeros == 1) {
    e.party2 = {0, 0};
  } else {
    e.party2[0] = ones;
    e.party2[1] = s.prefix_ones + s.suffix_zeros;
  }
  return e;
}

ObjectiveVector eval_fjcg(const BitString& x, const MpjcgInstance& inst) {
  const FlatVector f = eval_mpjcg(x, inst).flattened();
  return ObjectiveVector(std::span<const std::int64_t>(f), Sense::Maximize);
}

int suffix_penalty(int suffix_zeros) {
  switch (suffix_zeros) {
    case 0:
      return 0;
    case 1:
      return 3;
    case 2:
      return 2;
    default:
      return suffix_zeros;
  }
}

int payoff_potential(const BitString& x, const MpjcgInstance& inst) {
  const PrefixSuffixStats s = prefix_suffix_stats(x, inst);
  return s.missing_prefix + suffix_penalty(s.suffix_zeros);
}

std::array<BitString, 2> common_optima(const MpjcgInstance& inst) {
  BitString boundary = BitString::ones(static_cast<std::size_t>(inst.n));
  for (int i = inst.prefix_length(); i < inst.n; ++i) boundary.set(static_cast<std::size_t>(i), false);
  return {boundary, BitString::ones(static_cast<std::size_t>(inst.n))};
}

FlatFrontParts flat_front_parts(const MpjcgInstance& inst) {
  inst.validate();
  const std::int64_t n = inst.n;
  const std::int64_t k = inst.k;
  FlatFrontParts parts;
  parts.all_zeros = {k, n + k, 0, k};
  parts.all_ones = {n + k, k, n, n - k};
  for (std::int64_t t = k; t <= n - k; ++t) parts.middle.push_back({k + t, k + n - t, t, t + k});
  for (std::int64_t j = 2; j <= k - 1; ++j) parts.high_weight.push_back({j, k + j, n - j, n - k + j});
  parts.prefix_hole = {1, k + 1, n - 1, n - k - 1};
  return parts;
}

ParetoCharacterization closed_form_pareto(const MpjcgInstance& inst) {
  inst.validate();
  ParetoCharacterization pc;
  pc.ps1_membership = [inst](const BitString& x) {
    const int t = x.count_ones();
    return t == 0 || t == inst.n || (t >= inst.k && t <= inst.n - inst.k);
  };
  pc.ps2_membership = [inst](const BitString& x) {
    const PrefixSuffixStats s = prefix_suffix_stats(x, inst);
    return s.missing_prefix == 0 && s.suffix_zeros != 1;
  };
  const auto optima = common_optima(inst);
  pc.ps_com.insert(optima.begin(), optima.end());

  const FlatFrontParts parts = flat_front_parts(inst);
  pc.pf_flat.insert(parts.all_zeros);
  pc.pf_flat.insert(parts.all_ones);
  pc.pf_flat.insert(parts.middle.begin(), parts.middle.end());
  pc.pf_flat.insert(parts.high_weight.begin(), parts.high_weight.end());
  pc.pf_flat.insert(parts.prefix_hole);
  return pc;
}

namespace {

BitString decode(std::uint32_t code, int n) {
  BitString x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.set(static_cast<std::size_t>(i), (code >> i) & 1U);
  return x;
}

std::uint32_t encode(const BitString& x) {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) code |= (1U << i);
  }
  return code;
}

// Nondominated subset of a set of distinct vectors (maximization).
template <std::size_t D>
std::set<std::array<std::int64_t, D>> maximal_vectors(const std::set<std::array<std::int64_t, D>>& values) {
  std::set<std::array<std::int64_t, D>> front;
  for (const auto& v : values) {
    bool dominated = false;
    for (const auto& w : values) {
      if (strictly_dominates(w, v, Sense::Maximize)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.insert(v);
  }
  return front;
}

}  // namespace

ParetoCharacterization brute_pareto_oracle(const MpjcgInstance& inst) {
  inst.validate();
  if (inst.n > kBruteForceMaxBits) {
    throw RefusalError("brute_pareto_oracle: n=" + std::to_string(inst.n) +
                       " exceeds enumeration guard " + std::to_string(kBruteForceMaxBits));
  }
  const std::uint32_t total = 1U << inst.n;
  std::vector<MpjcgEvaluation> evals(total);
  std::set<std::array<std::int64_t, 2>> party1_values;
  std::set<std::array<std::int64_t, 2>> party2_values;
  std::set<FlatVector> flat_values;
  for (std::uint32_t code = 0; code < total; ++code) {
    evals[code] = eval_mpjcg(decode(code, inst.n), inst);
    party1_values.insert(evals[code].party1);
    party2_values.insert(evals[code].party2);
    flat_values.insert(evals[code].flattened());
  }
  const auto front1 = maximal_vectors(party1_values);
  const auto front2 = maximal_vectors(party2_values);

  auto in1 = std::make_shared<std::vector<bool>>(total);
  auto in2 = std::make_shared<std::vector<bool>>(total);
  ParetoCharacterization pc;
  for (std::uint32_t code = 0; code < total; ++code) {
    (*in1)[code] = front1.count(evals[code].party1) > 0;
    (*in2)[code] = front2.count(evals[code].party2) > 0;
    if ((*in1)[code] && (*in2)[code]) pc.ps_com.insert(decode(code, inst.n));
  }
  const int n = inst.n;
  pc.ps1_membership = [in1, n](const BitString& x) {
    require(x.size() == static_cast<std::size_t>(n), "membership: length mismatch");
    return static_cast<bool>((*in1)[encode(x)]);
  };
  pc.ps2_membership = [in2, n](const BitString& x) {
    require(x.size() == static_cast<std::size_t>(n), "membership: length mismatch");
    return static_cast<bool>((*in2)[encode(x)]);
  };
  pc.pf_flat = maximal_vectors(flat_values);
  return pc;
}

}  // namespace mpmo
