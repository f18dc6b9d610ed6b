#include "spinal/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "spinal/normal.hpp"

namespace spinal {

namespace {

constexpr double kTwoPow53 = 9007199254740992.0;

// Uniform on (0, 1), never 0 or 1.
double open_uniform(std::uint64_t word) {
  return (static_cast<double>(word >> 11) + 0.5) / kTwoPow53;
}

}  // namespace

void validate_channel(const ChannelModel& channel) {
  if (const auto* bsc = std::get_if<BscChannel>(&channel)) {
    if (!(bsc->p > 0.0 && bsc->p < 0.5)) throw std::invalid_argument("channel.p: must be in (0, 0.5)");
  } else {
    const auto& awgn = std::get<AwgnChannel>(channel);
    if (!(awgn.sigma2 > 0.0) || !std::isfinite(awgn.sigma2)) {
      throw std::invalid_argument("channel.sigma2: must be positive");
    }
  }
}

std::string channel_name(const ChannelModel& channel) {
  return std::holds_alternative<BscChannel>(channel) ? "bsc" : "awgn";
}

bool bsc_flip(const HashSeed& noise_seed, std::uint64_t t, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return open_uniform(counter_u64(noise_seed, t)) < p;
}

double gaussian_sample(const HashSeed& noise_seed, std::uint64_t t) {
  return normal_quantile(open_uniform(counter_u64(noise_seed, t)));
}

std::vector<std::uint8_t> bsc_transmit(std::span<const std::uint8_t> bits, double p,
                                       const HashSeed& noise_seed, std::uint64_t offset) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc_transmit: p must be in [0, 1]");
  std::vector<std::uint8_t> out(bits.begin(), bits.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (bsc_flip(noise_seed, offset + i, p)) out[i] ^= 1;
  }
  return out;
}

std::vector<double> awgn_transmit(std::span<const double> symbols, double sigma2,
                                  const HashSeed& noise_seed, std::uint64_t offset) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("awgn_transmit: sigma2 must be nonnegative");
  std::vector<double> out(symbols.begin(), symbols.end());
  if (sigma2 == 0.0) return out;
  double sigma = std::sqrt(sigma2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * gaussian_sample(noise_seed, offset + i);
  return out;
}

}  // namespace spinal
