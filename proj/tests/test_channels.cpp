#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spinal/channels.hpp"
#include "spinal/cli.hpp"

using namespace spinal;

namespace {

HashSeed noise(const std::string& label) { return derive_seed(cli::golden_seed(), label); }

}  // namespace

TEST(Bsc, ExtremeProbabilities) {
  std::vector<std::uint8_t> bits{0, 1, 1, 0, 1, 0, 0, 0, 1};
  EXPECT_EQ(bsc_transmit(bits, 0.0, noise("b")), bits);
  auto flipped = bsc_transmit(bits, 1.0, noise("b"));
  for (std::size_t i = 0; i < bits.size(); ++i) EXPECT_EQ(flipped[i], bits[i] ^ 1);
  EXPECT_THROW(bsc_transmit(bits, 1.5, noise("b")), std::invalid_argument);
}

TEST(Bsc, FlipFractionConcentrates) {
  constexpr std::size_t kN = 1'000'000;
  std::vector<std::uint8_t> zeros(kN, 0);
  auto out = bsc_transmit(zeros, 0.1, noise("frac"));
  double frac = std::accumulate(out.begin(), out.end(), 0.0) / kN;
  EXPECT_NEAR(frac, 0.1, 0.001);
}

TEST(Bsc, NoiseIsAFunctionOfPositionOnly) {
  HashSeed s = noise("memoryless");
  std::vector<std::uint8_t> a(5000), b(5000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = counter_u64(s, i) & 1;
    b[i] = (counter_u64(s, i) >> 7) & 1;
  }
  auto ya = bsc_transmit(a, 0.2, s);
  auto yb = bsc_transmit(b, 0.2, s);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(ya[i] ^ a[i], yb[i] ^ b[i]);

  // Sending in two pieces with offsets matches a single call.
  auto head = bsc_transmit(std::span(a).first(1234), 0.2, s, 0);
  auto tail = bsc_transmit(std::span(a).subspan(1234), 0.2, s, 1234);
  head.insert(head.end(), tail.begin(), tail.end());
  EXPECT_EQ(head, ya);
  EXPECT_NE(bsc_transmit(a, 0.2, noise("other")), ya);
}

TEST(Awgn, ZeroVarianceIsIdentity) {
  std::vector<double> x{0.5, -1.25, 3.0};
  EXPECT_EQ(awgn_transmit(x, 0.0, noise("a")), x);
  EXPECT_THROW(awgn_transmit(x, -1.0, noise("a")), std::invalid_argument);
}

TEST(Awgn, SampleMomentsConcentrate) {
  constexpr std::size_t kN = 1'000'000;
  std::vector<double> zeros(kN, 0.0);
  auto y = awgn_transmit(zeros, 1.0, noise("moments"));
  double mean = std::accumulate(y.begin(), y.end(), 0.0) / kN;
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= kN - 1;
  EXPECT_NEAR(var, 1.0, 0.01);
  EXPECT_LE(std::fabs(mean), 4.0 / std::sqrt(static_cast<double>(kN)));

  auto y4 = awgn_transmit(zeros, 4.0, noise("moments"));
  for (std::size_t i = 0; i < 100; ++i) EXPECT_DOUBLE_EQ(y4[i], 2.0 * y[i]);
}

TEST(Awgn, PermutingInputsPermutesOutputsMinusNoise) {
  HashSeed s = noise("perm");
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(static_cast<double>(i));
  std::vector<double> perm(x.rbegin(), x.rend());
  auto y = awgn_transmit(x, 0.3, s);
  auto yp = awgn_transmit(perm, 0.3, s);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(y[i] - x[i], yp[i] - perm[i], 1e-12);
    EXPECT_NEAR(y[i] - x[i], std::sqrt(0.3) * gaussian_sample(s, i), 1e-12);
  }
}

TEST(ChannelModel, Validation) {
  EXPECT_NO_THROW(validate_channel(BscChannel{0.1}));
  EXPECT_THROW(validate_channel(BscChannel{0.5}), std::invalid_argument);
  EXPECT_THROW(validate_channel(BscChannel{0.0}), std::invalid_argument);
  EXPECT_THROW(validate_channel(AwgnChannel{0.0}), std::invalid_argument);
  EXPECT_EQ(channel_name(AwgnChannel{1.0}), "awgn");
  EXPECT_EQ(channel_name(BscChannel{0.1}), "bsc");
}
