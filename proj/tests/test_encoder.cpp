#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spinal/cli.hpp"
#include "spinal/encoder.hpp"
#include "spinal/normal.hpp"

using namespace spinal;

namespace {

CodeParams bsc_params(int n, int k, int nu, const std::string& label = "enc") {
  CodeParams p;
  p.n = n;
  p.k = k;
  p.nu = nu;
  p.seed = derive_seed(cli::golden_seed(), label);
  return p;
}

CodeParams awgn_params(int n, int k, int nu, int c, double beta, double power) {
  CodeParams p = bsc_params(n, k, nu, "enc-awgn");
  p.awgn = AwgnParams{c, beta, power};
  return p;
}

}  // namespace

// Reference quantiles of the exact double inputs, from a 60-digit root solve
// of log Phi(x) = log u.
TEST(Normal, QuantileMatchesHighPrecisionReference) {
  struct Case {
    double u;
    double x;
  };
  const Case cases[] = {
      {1e-300, -37.047096299361199},   {1e-15, -7.9413453261709968},
      {0.001, -3.0902323061678135},    {0.3, -0.52440051270804082},
      {0.5000001, 2.5066282733116483e-7}, {0.975, 1.9599639845400539},
      {0.999999999, 5.9978070196016374},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(normal_quantile(c.u), c.x, 1e-12 * std::max(1.0, std::fabs(c.x))) << "u=" << c.u;
  }
  EXPECT_EQ(normal_quantile(0.5), 0.0);
}

TEST(Normal, QuantileInvertsCdf) {
  // Above x ~ 5 the CDF itself rounds toward 1 and no longer pins x down.
  for (double x = -8.0; x <= 5.0; x += 0.37) {
    EXPECT_NEAR(normal_quantile(normal_cdf(x)), x, 1e-9) << x;
  }
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
  EXPECT_THROW(normal_quantile(std::nan("")), std::domain_error);
}

TEST(Normal, UpperTailKeepsPrecision) {
  EXPECT_NEAR(normal_upper_tail(10.0) / 7.6198530241605261e-24, 1.0, 1e-12);
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
}

TEST(MapSymbol, MatchesQuantileOracle) {
  EXPECT_NEAR(map_symbol(0, 1, 2.0, 1.0), -0.63911191087127283, 1e-12);
  EXPECT_NEAR(map_symbol(3, 2, 3.0, 4.0), 2.2908900937094013, 1e-12);
  EXPECT_NEAR(map_symbol(0, 6, 3.0, 1.0), -2.35984419647028, 1e-12);
  EXPECT_NEAR(map_symbol(17, 6, 3.0, 1.0), -0.60061214769596298, 1e-12);
  EXPECT_NEAR(map_symbol(31, 6, 3.0, 1.0), -0.019531404921014709, 1e-12);
  EXPECT_NEAR(map_symbol(0, 12, 3.0, 1.0), -2.9736007585242015, 1e-12);
}

TEST(MapSymbol, AntisymmetricAndBounded) {
  for (int c : {1, 2, 3, 6, 10}) {
    for (double beta : {0.5, 2.0, 3.0, 6.0}) {
      const std::uint32_t top = (1U << c) - 1;
      double prev = -INFINITY;
      for (std::uint32_t b = 0; b <= top; ++b) {
        double x = map_symbol(b, c, beta, 2.5);
        EXPECT_EQ(x, -map_symbol(top - b, c, beta, 2.5));
        EXPECT_LE(std::fabs(x), beta * std::sqrt(2.5));
        EXPECT_GT(x, prev);
        prev = x;
      }
    }
  }
  EXPECT_THROW(map_symbol(4, 2, 3.0, 1.0), std::invalid_argument);
}

TEST(MapSymbol, SecondMomentOfFullConstellation) {
  double sum = 0.0;
  for (std::uint32_t b = 0; b < 64; ++b) sum += map_symbol(b, 6, 3.0, 1.0) * map_symbol(b, 6, 3.0, 1.0);
  EXPECT_NEAR(sum / 64.0, 0.962040566352, 1e-9);
}

TEST(Message, HexAndBlocks) {
  Message m = Message::from_hex("a5c", 12);
  EXPECT_EQ(m.block(0, 4), 0xAU);
  EXPECT_EQ(m.block(1, 4), 0x5U);
  EXPECT_EQ(m.block(2, 4), 0xCU);
  EXPECT_EQ(m.block(0, 3), 0b101U);
  EXPECT_EQ(m.to_hex(), "a5c");
  EXPECT_EQ(Message::from_hex("8", 2)[0], 1);
  EXPECT_THROW(Message::from_hex("9", 2), std::invalid_argument);
  EXPECT_THROW(Message::from_hex("a5", 12), std::invalid_argument);
  EXPECT_THROW(Message::from_hex("g00", 12), std::invalid_argument);
  EXPECT_EQ(Message::from_index(0b1001, 4).to_hex(), "9");

  Message z(8);
  z.set_block(1, 4, 0xF);
  EXPECT_EQ(z.to_hex(), "0f");
  EXPECT_EQ(z.prefix(4).size(), 4U);
}

TEST(CodeParams, Validation) {
  EXPECT_NO_THROW(bsc_params(16, 4, 16).validate());
  EXPECT_THROW(bsc_params(15, 4, 16).validate(), std::invalid_argument);
  EXPECT_THROW(bsc_params(34, 17, 32).validate(), std::invalid_argument);
  EXPECT_THROW(bsc_params(16, 8, 4).validate(), std::invalid_argument);
  EXPECT_THROW(awgn_params(16, 4, 16, 0, 3.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(awgn_params(16, 4, 16, 4, 0.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(awgn_params(16, 4, 16, 4, 3.0, -1.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(awgn_params(16, 4, 16, 16, 3.0, 1.0).validate());
  EXPECT_EQ(awgn_params(16, 4, 16, 6, 3.0, 1.0).max_passes(), 2);
}

TEST(Spine, GoldenZeroMessage) {
  std::ifstream in(std::string(SPINAL_GOLDEN_DIR) + "/spine_vectors.txt");
  std::ostringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), cli::golden_spine_vectors());

  CodeParams p = bsc_params(16, 4, 16);
  p.seed = cli::golden_seed();
  auto spine = compute_spine(p, Message(16));
  ASSERT_EQ(spine.size(), 4U);
  EXPECT_EQ(spine[0].to_hex(16), "cf5d");
  EXPECT_EQ(spine[3].to_hex(16), "c3f4");
  EXPECT_EQ(emit_pass_bsc(spine, 1, 16), (std::vector<std::uint8_t>{1, 1, 1, 1}));
  EXPECT_EQ(emit_pass_bsc(spine, 2, 16), (std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(Spine, CommonPrefixGivesCommonSpinePrefix) {
  CodeParams p = bsc_params(64, 4, 32);
  for (std::uint64_t t = 0; t < 50; ++t) {
    Message a = Message::random(64, derive_seed(p.seed, "a" + std::to_string(t)));
    Message b = a;
    std::size_t j = t % 16;
    b.set_block(j, 4, a.block(j, 4) ^ 0x3);
    auto sa = compute_spine(p, a);
    auto sb = compute_spine(p, b);
    for (std::size_t i = 0; i < j; ++i) EXPECT_EQ(sa[i], sb[i]);
    EXPECT_NE(sa[j], sb[j]);
  }
}

// Small nu, fresh code per pair: spines re-merge within g steps of a changed
// block at a rate near g * 2^-nu.
TEST(Spine, CollisionsAfterChangedBlockAreRare) {
  constexpr int kNu = 8;
  constexpr int kG = 16;
  constexpr int kPairs = 20'000;
  HashSeed master = derive_seed(cli::golden_seed(), "collide");
  int hits = 0;
  for (int t = 0; t < kPairs; ++t) {
    HashSeed trial = derive_seed(master, std::to_string(t));
    CodeParams p;
    p.n = 2 * kG;
    p.k = 2;
    p.nu = kNu;
    p.seed = trial;
    Message a = Message::random(32, derive_seed(trial, "m"));
    Message b = a;
    b.set_block(0, 2, a.block(0, 2) ^ static_cast<MessageBlock>(1 + t % 3));
    auto sa = compute_spine(p, a);
    auto sb = compute_spine(p, b);
    bool hit = false;
    for (int j = 0; j < kG && !hit; ++j) hit = sa[j] == sb[j];
    hits += hit ? 1 : 0;
  }
  double frac = static_cast<double>(hits) / kPairs;
  EXPECT_LE(frac, 2.0 * kG / 256.0);
  EXPECT_GT(frac, 0.0);
}

TEST(EmitPass, MsbFirstExtraction) {
  std::vector<SpineValue> spine{SpineValue::from_u64(0x8000), SpineValue::from_u64(0x4001)};
  EXPECT_EQ(emit_pass_bsc(spine, 1, 16), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(emit_pass_bsc(spine, 2, 16), (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(emit_pass_bsc(spine, 16, 16), (std::vector<std::uint8_t>{0, 1}));
  EXPECT_THROW(emit_pass_bsc(spine, 17, 16), std::out_of_range);
  EXPECT_THROW(emit_pass_bsc(spine, 0, 16), std::out_of_range);
  std::vector<SpineValue> zeros(5);
  for (auto b : emit_pass_bsc(zeros, 3, 16)) EXPECT_EQ(b, 0);
}

TEST(EmitPass, AwgnUsesTopBitsFirst) {
  CodeParams p = awgn_params(8, 4, 16, 4, 3.0, 1.0);
  std::vector<SpineValue> spine{SpineValue::from_u64(0xA3F0)};
  auto first = emit_pass_awgn(spine, 1, p);
  auto second = emit_pass_awgn(spine, 2, p);
  auto fourth = emit_pass_awgn(spine, 4, p);
  EXPECT_EQ(first[0], map_symbol(0xA, 4, 3.0, 1.0));
  EXPECT_EQ(second[0], map_symbol(0x3, 4, 3.0, 1.0));
  EXPECT_EQ(fourth[0], map_symbol(0x0, 4, 3.0, 1.0));
  EXPECT_THROW(emit_pass_awgn(spine, 5, p), std::out_of_range);
}

TEST(Encode, RatelessPrefixProperty) {
  CodeParams p = bsc_params(32, 4, 24);
  Message m = Message::random(32, derive_seed(p.seed, "msg"));
  EXPECT_EQ(encode(p, m, 0).size(), 0U);
  Codeword full = encode(p, m, p.nu);
  for (int L = 1; L <= p.nu; ++L) {
    Codeword cw = encode(p, m, L);
    ASSERT_EQ(cw.size(), static_cast<std::size_t>(L) * 8);
    for (int l = 0; l < L; ++l) EXPECT_EQ(cw.bit_passes[l], full.bit_passes[l]);
  }
  EXPECT_THROW(encode(p, m, p.nu + 1), std::out_of_range);

  CodeParams a = awgn_params(32, 4, 24, 6, 3.0, 1.0);
  Codeword fa = encode(a, m, 4);
  Codeword fa2 = encode(a, m, 2);
  EXPECT_EQ(fa2.symbol_passes[1], fa.symbol_passes[1]);
  EXPECT_THROW(encode(a, m, 5), std::out_of_range);
}

TEST(Encode, EntryDependsOnlyOnItsPrefix) {
  CodeParams p = bsc_params(48, 4, 20);
  for (std::uint64_t t = 0; t < 30; ++t) {
    Message a = Message::random(48, derive_seed(p.seed, "pa" + std::to_string(t)));
    Message b = Message::random(48, derive_seed(p.seed, "pb" + std::to_string(t)));
    std::size_t keep = (t % 12) * 4;
    for (std::size_t i = 0; i < keep; ++i) b.set(i, a[i]);
    Codeword ca = encode(p, a, 5);
    Codeword cb = encode(p, b, 5);
    for (int l = 0; l < 5; ++l) {
      for (std::size_t i = 0; i < keep / 4; ++i) EXPECT_EQ(ca.bit_passes[l][i], cb.bit_passes[l][i]);
    }
  }
}

TEST(Encode, AwgnSymbolsRespectPowerEnvelope) {
  CodeParams p = awgn_params(64, 4, 36, 6, 3.0, 1.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t t = 0; count < 100'000; ++t) {
    Message m = Message::random(64, derive_seed(p.seed, "pow" + std::to_string(t)));
    Codeword cw = encode(p, m, p.max_passes());
    for (const auto& pass : cw.symbol_passes) {
      for (double x : pass) {
        ASSERT_LE(std::fabs(x), 3.0);
        sum += x * x;
        ++count;
      }
    }
  }
  double mean = sum / static_cast<double>(count);
  EXPECT_GE(mean, 0.8);
  EXPECT_LE(mean, 1.0);
}
