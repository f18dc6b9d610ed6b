#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace spinal {

inline constexpr int kMaxNu = 256;
inline constexpr int kMaxK = 16;

// 256 bits of key material selecting one member of the hash family.
struct HashSeed {
  std::array<std::uint64_t, 4> words{};

  // 64 hex digits, words[0] first. Shorter input is left-padded with zeros.
  static HashSeed from_hex(std::string_view hex);
  std::string to_hex() const;

  friend bool operator==(const HashSeed&, const HashSeed&) = default;
};

// A nu-bit spine state. Limb 0 holds the least significant 64 bits; every
// bit at or above position nu is zero.
struct SpineValue {
  static constexpr int kLimbs = kMaxNu / 64;
  std::array<std::uint64_t, kLimbs> limbs{};

  static SpineValue from_u64(std::uint64_t v) {
    SpineValue s;
    s.limbs[0] = v;
    return s;
  }

  // Parses ceil(nu/4) hex digits, most significant first.
  static SpineValue from_hex(std::string_view hex, int nu);
  std::string to_hex(int nu) const;

  bool bit(int pos) const { return (limbs[pos >> 6] >> (pos & 63)) & 1U; }

  // Bits [lo, lo + count) as an integer, count <= 64.
  std::uint64_t bits(int lo, int count) const;

  // True when no bit at or above nu is set.
  bool fits(int nu) const;

  friend bool operator==(const SpineValue&, const SpineValue&) = default;
  friend auto operator<=>(const SpineValue&, const SpineValue&) = default;
};

using MessageBlock = std::uint32_t;

// One member of the multiply-add-shift family
//
//   h(z) = ((a * z + b) mod 2^W) >> (W - nu),   z = state * 2^k + block,
//
// with W = 2 nu + k and a, b uniform W-bit words expanded from the seed.
// Keys have nu + k bits and W >= (nu + k) + nu - 1, so the family is
// strongly universal: for z != z' the pair (h(z), h(z')) is uniform over
// {0,1}^nu x {0,1}^nu when (a, b) is uniform.
class HashFunction {
 public:
  HashFunction(const HashSeed& seed, int nu, int k);

  SpineValue operator()(const SpineValue& state, MessageBlock block) const;

  // Same value as operator(), always through the multi-limb path.
  SpineValue eval_generic(const SpineValue& state, MessageBlock block) const;

  int nu() const { return nu_; }
  int k() const { return k_; }

 private:
  static constexpr int kWordLimbs = (2 * kMaxNu + kMaxK + 63) / 64;

  int nu_;
  int k_;
  int width_;
  std::array<std::uint64_t, kWordLimbs> a_{};
  std::array<std::uint64_t, kWordLimbs> b_{};
};

// Throws std::invalid_argument when nu or k is outside the supported range
// or k > nu.
void validate_hash_shape(int nu, int k);

SpineValue hash_step(const HashSeed& seed, const SpineValue& state, MessageBlock block, int nu,
                     int k);

// Independent seed for a labelled stream (e.g. "channel", "code", "trial-7").
HashSeed derive_seed(const HashSeed& master, std::string_view label);

// Counter-based uniform 64-bit stream: a pure function of (seed, index).
std::uint64_t counter_u64(const HashSeed& seed, std::uint64_t index);

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

}  // namespace spinal
