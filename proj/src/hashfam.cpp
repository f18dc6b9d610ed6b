#include "spinal/hashfam.hpp"

#include <stdexcept>

namespace spinal {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kTagMultiplier = 0xA0761D6478BD642FULL;
constexpr std::uint64_t kTagAddend = 0xE7037ED1A0B428DBULL;
constexpr std::uint64_t kTagCounter = 0x8EBC6AF09C88C6E3ULL;
constexpr std::uint64_t kTagDerive = 0x589965CC75374CC3ULL;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

// Keyed 64-bit word: every seed word passes through a bijective mix.
std::uint64_t keyed_word(const std::array<std::uint64_t, 4>& key, std::uint64_t tag,
                         std::uint64_t index) {
  std::uint64_t h = mix64(tag + index * kGolden);
  for (std::size_t i = 0; i < key.size(); ++i) {
    h = mix64(h ^ key[i]) + (i + 1) * kGolden;
  }
  return mix64(h);
}

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

HashSeed HashSeed::from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) {
    throw std::invalid_argument("seed hex must have 1..64 digits");
  }
  HashSeed seed;
  // Right-align: the last digit is the least significant nibble of words[3].
  std::size_t pad = 64 - hex.size();
  for (std::size_t i = 0; i < hex.size(); ++i) {
    int v = hex_value(hex[i]);
    if (v < 0) throw std::invalid_argument("seed hex contains a non-hex character");
    std::size_t pos = pad + i;
    std::size_t word = pos / 16;
    int shift = static_cast<int>(15 - pos % 16) * 4;
    seed.words[word] |= static_cast<std::uint64_t>(v) << shift;
  }
  return seed;
}

std::string HashSeed::to_hex() const {
  std::string out;
  out.reserve(64);
  for (auto w : words) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kHexDigits[(w >> shift) & 0xF]);
  }
  return out;
}

SpineValue SpineValue::from_hex(std::string_view hex, int nu) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > static_cast<std::size_t>(kMaxNu / 4)) {
    throw std::invalid_argument("spine hex has the wrong length");
  }
  SpineValue s;
  int bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    int v = hex_value(*it);
    if (v < 0) throw std::invalid_argument("spine hex contains a non-hex character");
    s.limbs[bit >> 6] |= static_cast<std::uint64_t>(v) << (bit & 63);
  }
  if (!s.fits(nu)) throw std::invalid_argument("spine hex exceeds nu bits");
  return s;
}

std::string SpineValue::to_hex(int nu) const {
  int digits = (nu + 3) / 4;
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int d = 0; d < digits; ++d) {
    int bit = 4 * d;
    out[static_cast<std::size_t>(digits - 1 - d)] = kHexDigits[(limbs[bit >> 6] >> (bit & 63)) & 0xF];
  }
  return out;
}

std::uint64_t SpineValue::bits(int lo, int count) const {
  if (count <= 0) return 0;
  int limb = lo >> 6;
  int off = lo & 63;
  std::uint64_t v = limbs[limb] >> off;
  if (off != 0 && off + count > 64 && limb + 1 < kLimbs) v |= limbs[limb + 1] << (64 - off);
  return v & low_mask(count);
}

bool SpineValue::fits(int nu) const {
  for (int i = 0; i < kLimbs; ++i) {
    int lo = i * 64;
    if (lo >= nu) {
      if (limbs[i] != 0) return false;
    } else if (nu - lo < 64 && (limbs[i] >> (nu - lo)) != 0) {
      return false;
    }
  }
  return true;
}

void validate_hash_shape(int nu, int k) {
  if (nu < 1 || nu > kMaxNu) throw std::invalid_argument("nu must be in [1, 256]");
  if (k < 1 || k > kMaxK) throw std::invalid_argument("k must be in [1, 16]");
  if (k > nu) throw std::invalid_argument("k must not exceed nu");
}

HashFunction::HashFunction(const HashSeed& seed, int nu, int k) : nu_(nu), k_(k) {
  validate_hash_shape(nu, k);
  width_ = 2 * nu + k;
  for (int j = 0; j < kWordLimbs; ++j) {
    int lo = 64 * j;
    std::uint64_t mask = lo >= width_ ? 0 : low_mask(width_ - lo);
    a_[j] = keyed_word(seed.words, kTagMultiplier, static_cast<std::uint64_t>(j)) & mask;
    b_[j] = keyed_word(seed.words, kTagAddend, static_cast<std::uint64_t>(j)) & mask;
  }
}

SpineValue HashFunction::operator()(const SpineValue& state, MessageBlock block) const {
  if (width_ <= 64) {
    std::uint64_t z = (state.limbs[0] << k_) | block;
    std::uint64_t w = (a_[0] * z + b_[0]) & low_mask(width_);
    return SpineValue::from_u64(w >> (nu_ + k_));
  }
  if (width_ <= 128) {
    using u128 = unsigned __int128;
    u128 z = (static_cast<u128>(state.limbs[0]) << k_) | block;
    u128 a = (static_cast<u128>(a_[1]) << 64) | a_[0];
    u128 b = (static_cast<u128>(b_[1]) << 64) | b_[0];
    u128 w = a * z + b;
    if (width_ < 128) w &= (static_cast<u128>(1) << width_) - 1;
    return SpineValue::from_u64(static_cast<std::uint64_t>(w >> (nu_ + k_)));
  }
  return eval_generic(state, block);
}

SpineValue HashFunction::eval_generic(const SpineValue& state, MessageBlock block) const {
  using u128 = unsigned __int128;
  constexpr int kKeyLimbs = SpineValue::kLimbs + 1;

  // z = state * 2^k + block
  std::array<std::uint64_t, kKeyLimbs> z{};
  for (int i = 0; i < SpineValue::kLimbs; ++i) {
    z[i] |= state.limbs[i] << k_;
    z[i + 1] = state.limbs[i] >> (64 - k_);
  }
  z[0] |= block;

  // w = a * z + b, truncated to kWordLimbs limbs.
  std::array<std::uint64_t, kWordLimbs> w = b_;
  for (int i = 0; i < kKeyLimbs; ++i) {
    if (z[i] == 0) continue;
    std::uint64_t carry = 0;
    for (int j = 0; i + j < kWordLimbs; ++j) {
      u128 t = static_cast<u128>(a_[j]) * z[i] + w[i + j] + carry;
      w[i + j] = static_cast<std::uint64_t>(t);
      carry = static_cast<std::uint64_t>(t >> 64);
    }
  }

  // Keep bits [nu + k, 2 nu + k) of the W-bit word.
  SpineValue out;
  int lo = nu_ + k_;
  for (int i = 0; i < SpineValue::kLimbs && 64 * i < nu_; ++i) {
    int pos = lo + 64 * i;
    int limb = pos >> 6;
    int off = pos & 63;
    std::uint64_t v = w[limb] >> off;
    if (off != 0 && limb + 1 < kWordLimbs) v |= w[limb + 1] << (64 - off);
    int remaining = nu_ - 64 * i;
    out.limbs[i] = v & low_mask(remaining);
  }
  return out;
}

SpineValue hash_step(const HashSeed& seed, const SpineValue& state, MessageBlock block, int nu,
                     int k) {
  validate_hash_shape(nu, k);
  if (!state.fits(nu)) throw std::invalid_argument("state exceeds nu bits");
  if (block >> k != 0) throw std::invalid_argument("block exceeds k bits");
  return HashFunction(seed, nu, k)(state, block);
}

HashSeed derive_seed(const HashSeed& master, std::string_view label) {
  std::array<std::uint64_t, 4> state = master.words;
  auto permute = [&state] {
    for (int round = 0; round < 2; ++round) {
      for (std::size_t j = 0; j < state.size(); ++j) {
        state[j] = mix64(state[j] ^ state[(j + 3) % 4]) + j * kGolden;
      }
    }
  };
  std::size_t i = 0;
  while (i < label.size()) {
    std::uint64_t chunk = 0;
    for (int b = 0; b < 8 && i < label.size(); ++b, ++i) {
      chunk |= static_cast<std::uint64_t>(static_cast<unsigned char>(label[i])) << (8 * b);
    }
    state[0] ^= chunk;
    permute();
  }
  state[1] ^= label.size();
  permute();

  HashSeed out;
  for (std::size_t j = 0; j < out.words.size(); ++j) out.words[j] = keyed_word(state, kTagDerive, j);
  return out;
}

std::uint64_t counter_u64(const HashSeed& seed, std::uint64_t index) {
  return keyed_word(seed.words, kTagCounter, index);
}

}  // namespace spinal
