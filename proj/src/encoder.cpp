#include "spinal/encoder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinal/normal.hpp"

namespace spinal {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

[[noreturn]] void bad_param(const std::string& field, const std::string& why) {
  throw std::invalid_argument("code." + field + ": " + why);
}

}  // namespace

void CodeParams::validate() const {
  if (k < 1 || k > kMaxK) bad_param("k", "must be in [1, 16]");
  if (nu < 1 || nu > kMaxNu) bad_param("nu", "must be in [1, 256]");
  if (k > nu) bad_param("nu", "must be at least k");
  if (n < k || n % k != 0) bad_param("n", "must be a positive multiple of k");
  if (awgn) {
    if (awgn->c < 1 || awgn->c > 32) bad_param("c", "must be in [1, 32]");
    if (awgn->c > nu) bad_param("c", "must not exceed nu");
    if (!(awgn->beta > 0) || !std::isfinite(awgn->beta)) bad_param("beta", "must be positive");
    if (!(awgn->power > 0) || !std::isfinite(awgn->power)) bad_param("power", "must be positive");
  }
}

Message::Message(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("message bits must be 0 or 1");
  }
}

Message Message::from_hex(std::string_view hex, std::size_t n) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  std::size_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("message hex has " + std::to_string(hex.size()) +
                                " digits, expected " + std::to_string(digits) + " for n=" +
                                std::to_string(n));
  }
  Message msg(n);
  for (std::size_t d = 0; d < digits; ++d) {
    char c = hex[d];
    int v = (c >= '0' && c <= '9')   ? c - '0'
            : (c >= 'a' && c <= 'f') ? c - 'a' + 10
            : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                     : -1;
    if (v < 0) throw std::invalid_argument("message hex contains a non-hex character");
    for (int b = 0; b < 4; ++b) {
      std::size_t pos = 4 * d + static_cast<std::size_t>(b);
      bool bit = (v >> (3 - b)) & 1;
      if (pos < n) {
        msg.bits_[pos] = bit;
      } else if (bit) {
        throw std::invalid_argument("message hex sets bits beyond n");
      }
    }
  }
  return msg;
}

std::string Message::to_hex() const {
  std::string out;
  for (std::size_t d = 0; 4 * d < bits_.size(); ++d) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t pos = 4 * d + b;
      v = (v << 1) | (pos < bits_.size() ? bits_[pos] : 0);
    }
    out.push_back(kHexDigits[v]);
  }
  return out;
}

Message Message::from_index(std::uint64_t value, std::size_t n) {
  if (n > 64) throw std::invalid_argument("from_index supports n <= 64");
  Message msg(n);
  for (std::size_t i = 0; i < n; ++i) msg.bits_[i] = (value >> (n - 1 - i)) & 1;
  return msg;
}

Message Message::random(std::size_t n, const HashSeed& seed) {
  Message msg(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t word = counter_u64(seed, i / 64);
    msg.bits_[i] = (word >> (63 - i % 64)) & 1;
  }
  return msg;
}

MessageBlock Message::block(std::size_t index, int k) const {
  MessageBlock v = 0;
  std::size_t base = index * static_cast<std::size_t>(k);
  for (int b = 0; b < k; ++b) v = (v << 1) | bits_[base + static_cast<std::size_t>(b)];
  return v;
}

void Message::set_block(std::size_t index, int k, MessageBlock value) {
  std::size_t base = index * static_cast<std::size_t>(k);
  for (int b = 0; b < k; ++b) bits_[base + static_cast<std::size_t>(b)] = (value >> (k - 1 - b)) & 1;
}

Message Message::prefix(std::size_t len) const {
  if (len > bits_.size()) throw std::out_of_range("prefix longer than message");
  return Message(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(len)));
}

std::vector<SpineValue> compute_spine(const CodeParams& params, const Message& msg) {
  params.validate();
  if (msg.size() != static_cast<std::size_t>(params.n)) {
    throw std::invalid_argument("message length " + std::to_string(msg.size()) +
                                " does not match n=" + std::to_string(params.n));
  }
  HashFunction h(params.seed, params.nu, params.k);
  std::vector<SpineValue> spine;
  spine.reserve(static_cast<std::size_t>(params.blocks()));
  SpineValue state;
  for (int i = 0; i < params.blocks(); ++i) {
    state = h(state, msg.block(static_cast<std::size_t>(i), params.k));
    spine.push_back(state);
  }
  return spine;
}

void check_pass(int pass, int budget) {
  if (pass < 1) throw std::out_of_range("pass index must be at least 1");
  if (pass > budget) {
    throw std::out_of_range("pass " + std::to_string(pass) + " exceeds the pass budget of " +
                            std::to_string(budget));
  }
}

std::vector<std::uint8_t> emit_pass_bsc(std::span<const SpineValue> spine, int pass, int nu) {
  check_pass(pass, nu);
  std::vector<std::uint8_t> out;
  out.reserve(spine.size());
  for (const auto& s : spine) out.push_back(s.bit(nu - pass) ? 1 : 0);
  return out;
}

double map_symbol(std::uint32_t b, int c, double beta, double power) {
  if (c < 1 || c > 32) throw std::invalid_argument("map_symbol: c must be in [1, 32]");
  std::uint64_t levels = 1ULL << c;
  if (b >= levels) throw std::invalid_argument("map_symbol: b out of range");
  // Upper half mirrors the lower half exactly.
  if (b >= levels / 2) return -map_symbol(static_cast<std::uint32_t>(levels - 1 - b), c, beta, power);
  double gamma = normal_cdf(-beta);
  double u = (static_cast<double>(b) + 0.5) / static_cast<double>(levels);
  return normal_quantile(gamma + (1.0 - 2.0 * gamma) * u) * std::sqrt(power);
}

std::vector<double> emit_pass_awgn(std::span<const SpineValue> spine, int pass,
                                   const CodeParams& params) {
  if (!params.awgn) throw std::invalid_argument("emit_pass_awgn requires AWGN parameters");
  const AwgnParams& ap = *params.awgn;
  check_pass(pass, params.nu / ap.c);
  int lo = params.nu - pass * ap.c;
  std::vector<double> out;
  out.reserve(spine.size());
  for (const auto& s : spine) {
    auto b = static_cast<std::uint32_t>(s.bits(lo, ap.c));
    out.push_back(map_symbol(b, ap.c, ap.beta, ap.power));
  }
  return out;
}

Codeword encode(const CodeParams& params, const Message& msg, int passes) {
  params.validate();
  if (passes < 0) throw std::out_of_range("pass count must be nonnegative");
  if (passes > params.max_passes()) check_pass(passes, params.max_passes());
  auto spine = compute_spine(params, msg);
  Codeword cw;
  cw.blocks = params.blocks();
  cw.kind = params.awgn ? Codeword::Kind::awgn : Codeword::Kind::bsc;
  for (int l = 1; l <= passes; ++l) {
    if (params.awgn) {
      cw.symbol_passes.push_back(emit_pass_awgn(spine, l, params));
    } else {
      cw.bit_passes.push_back(emit_pass_bsc(spine, l, params.nu));
    }
  }
  return cw;
}

}  // namespace spinal
