#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinal/hashfam.hpp"

namespace spinal {

struct AwgnParams {
  int c = 1;           // bits per symbol
  double beta = 3.0;   // truncation width in standard deviations
  double power = 1.0;  // average power constraint P
};

struct CodeParams {
  int n = 0;
  int k = 0;
  int nu = 0;
  HashSeed seed;
  std::optional<AwgnParams> awgn;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  int blocks() const { return n / k; }
  // nu passes for the BSC, floor(nu / c) for AWGN.
  int max_passes() const { return awgn ? nu / awgn->c : nu; }
};

// n message bits m_1..m_n stored one per byte. Block i (0-based) is the
// k-bit integer whose most significant bit is m_{ki+1}.
class Message {
 public:
  Message() = default;
  explicit Message(std::size_t n) : bits_(n, 0) {}
  explicit Message(std::vector<std::uint8_t> bits);

  // Packs bits MSB-first into ceil(n/4) hex digits; pad bits must be zero.
  static Message from_hex(std::string_view hex, std::size_t n);
  std::string to_hex() const;

  // The n-bit message whose bits are the binary expansion of value,
  // m_1 being the most significant. Requires n <= 64.
  static Message from_index(std::uint64_t value, std::size_t n);

  // Uniform random bits from a counter-based stream.
  static Message random(std::size_t n, const HashSeed& seed);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  MessageBlock block(std::size_t index, int k) const;
  void set_block(std::size_t index, int k, MessageBlock value);

  Message prefix(std::size_t len) const;

  friend bool operator==(const Message&, const Message&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Pass-major coded output: passes()[l][i] is the entry emitted from s_{i+1}
// in pass l+1. Exactly one of bit_passes / symbol_passes is populated.
struct Codeword {
  enum class Kind { bsc, awgn };

  Kind kind = Kind::bsc;
  int blocks = 0;
  std::vector<std::vector<std::uint8_t>> bit_passes;
  std::vector<std::vector<double>> symbol_passes;

  std::size_t passes() const { return kind == Kind::bsc ? bit_passes.size() : symbol_passes.size(); }
  std::size_t size() const { return passes() * static_cast<std::size_t>(blocks); }
};

// s_1..s_{n/k} with s_0 = 0 and s_i = h(s_{i-1}, block i-1).
std::vector<SpineValue> compute_spine(const CodeParams& params, const Message& msg);

// Bit i of pass l is bit (nu - l) of s_i, i.e. the l-th most significant.
std::vector<std::uint8_t> emit_pass_bsc(std::span<const SpineValue> spine, int pass, int nu);

// Quantized truncated-Gaussian constellation point for the c-bit value b.
double map_symbol(std::uint32_t b, int c, double beta, double power);

// Symbol i of pass l maps bits [nu - l c, nu - (l-1) c) of s_i.
std::vector<double> emit_pass_awgn(std::span<const SpineValue> spine, int pass,
                                   const CodeParams& params);

// Passes 1..passes, BSC or AWGN according to params.awgn.
Codeword encode(const CodeParams& params, const Message& msg, int passes);

// Throws std::out_of_range past the pass budget.
void check_pass(int pass, int budget);

}  // namespace spinal
