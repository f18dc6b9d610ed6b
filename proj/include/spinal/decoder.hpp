#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spinal/encoder.hpp"
#include "spinal/hashfam.hpp"

namespace spinal {

enum class Metric { hamming, euclidean };

// Received data grouped by pass. Every spine index has the same number of
// received passes.
class Observation {
 public:
  static Observation for_bsc(int blocks);
  static Observation for_awgn(int blocks);
  static Observation from_codeword(const Codeword& cw);

  void add_pass(std::span<const std::uint8_t> bits);
  void add_pass(std::span<const double> symbols);

  Metric metric() const { return metric_; }
  int blocks() const { return blocks_; }
  int passes() const { return passes_; }

  // pass is 0-based here; block is the 0-based spine index.
  std::uint8_t bit(int pass, int block) const {
    return bits_[static_cast<std::size_t>(pass) * blocks_ + block];
  }
  double symbol(int pass, int block) const {
    return symbols_[static_cast<std::size_t>(pass) * blocks_ + block];
  }

 private:
  Observation(Metric metric, int blocks) : metric_(metric), blocks_(blocks) {}

  Metric metric_;
  int blocks_;
  int passes_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<double> symbols_;
};

Metric metric_for(const CodeParams& params);

// Distance between block `block` of obs and the entries regenerated from
// `state`: Hamming count (BSC) or summed squared error (AWGN).
double branch_cost(const Observation& obs, int block, const SpineValue& state,
                   const CodeParams& params, Metric metric);

// Whole-codeword distance, computed without the per-spine decomposition.
double codeword_distance(const Observation& obs, const Codeword& cw);

struct Candidate {
  SpineValue spine_state;
  double path_cost = 0.0;
  Message prefix_bits;
};

struct DecodeStats {
  std::uint64_t nodes_expanded = 0;
  // Prune rounds whose cut fell between candidates of equal cost.
  std::uint64_t ties_broken = 0;
};

struct DecodeResult {
  Message best_message;
  double best_cost = 0.0;
  std::vector<Candidate> survivors;  // ordered by (cost, message bits)
  DecodeStats stats;
};

// M-algorithm over the message-prefix tree. At each depth the (up to) beam
// survivors are expanded into beam * 2^k children and the beam lowest are
// kept. Ties are ordered by the message prefix bits, lexicographically.
DecodeResult beam_decode(const CodeParams& params, const Observation& obs, std::size_t beam,
                         Metric metric);

// Exhaustive maximum-likelihood search over all 2^n messages, n <= 24.
// Ties go to the lexicographically smallest message.
DecodeResult ml_decode_exact(const CodeParams& params, const Observation& obs, Metric metric);

inline constexpr int kMaxExactBits = 24;

// First n - tail_guard bits of the best message.
Message decode_prefix_confidence(const DecodeResult& result, int tail_guard);

}  // namespace spinal
