#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spinal/hashfam.hpp"

namespace spinal {

struct BscChannel {
  double p = 0.0;  // flip probability
};

struct AwgnChannel {
  double sigma2 = 1.0;  // noise variance
};

using ChannelModel = std::variant<BscChannel, AwgnChannel>;

// Throws std::invalid_argument for p outside (0, 1/2) or sigma2 <= 0.
void validate_channel(const ChannelModel& channel);

std::string channel_name(const ChannelModel& channel);

// Noise is counter-based: the sample at stream position t depends only on
// (seed, t). `offset` is the stream position of element 0, so a codeword
// sent pass by pass sees the same noise as one sent in a single call.
std::vector<std::uint8_t> bsc_transmit(std::span<const std::uint8_t> bits, double p,
                                       const HashSeed& noise_seed, std::uint64_t offset = 0);

std::vector<double> awgn_transmit(std::span<const double> symbols, double sigma2,
                                  const HashSeed& noise_seed, std::uint64_t offset = 0);

// True with probability p at stream position t.
bool bsc_flip(const HashSeed& noise_seed, std::uint64_t t, double p);

// Standard normal sample at stream position t.
double gaussian_sample(const HashSeed& noise_seed, std::uint64_t t);

}  // namespace spinal
