#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinal/channels.hpp"
#include "spinal/encoder.hpp"
#include "spinal/hashfam.hpp"

namespace spinal {

// Idealized feedback: stop once the first n - tail_guard decoded bits are right.
struct GenieRule {
  int tail_guard = 0;
};

// Send exactly `limit` passes, decode once.
struct MaxPassesRule {
  int limit = 1;
  int tail_guard = 0;
};

// The last tail_len message bits are known zeros; stop once the decoder
// reproduces them. A wrong message passes the check with probability about
// 2^-tail_len. The check is skipped until the coded bits sent cover the
// message (see check_bits_min_pass).
struct CheckBitsRule {
  int tail_len = 0;
};

using StopRule = std::variant<GenieRule, MaxPassesRule, CheckBitsRule>;

// Bits excluded from the success check (and zero-filled in the message).
int tail_bits(const StopRule& rule);

void validate_rule(const StopRule& rule, const CodeParams& params);

std::string rule_name(const StopRule& rule);

// First pass at which CheckBits may stop: ceil(k / bits per symbol).
int check_bits_min_pass(const CodeParams& params);

struct SessionResult {
  int passes_used = 0;
  double achieved_rate = 0.0;  // k / passes_used
  bool success = false;
  std::optional<int> first_error_bit;
  HashSeed trial_seed;
};

// Streams passes over the channel, decoding after each one, until the rule
// is satisfied or the pass budget runs out. The message and channel noise
// come from derive_seed(trial_seed, "message" / "channel"); the code is
// params.seed.
SessionResult run_session(const CodeParams& params, const ChannelModel& channel, std::size_t beam,
                          const StopRule& rule, const HashSeed& trial_seed);

struct SweepGrid {
  std::vector<CodeParams> codes;
  std::vector<ChannelModel> channels;
  std::vector<std::size_t> beams;
  int trials = 0;
  // When false every trial draws its own code seed, derive_seed(trial, "code").
  bool fixed_code_seed = false;
};

struct SweepRow {
  int trial = 0;
  std::string channel;
  double p_or_snr = 0.0;
  int n = 0;
  int k = 0;
  int nu = 0;
  std::size_t beam = 0;
  SessionResult result;
};

struct CellSummary {
  std::string channel;
  double p_or_snr = 0.0;
  int n = 0;
  int k = 0;
  int nu = 0;
  std::size_t beam = 0;
  int trials = 0;
  int successes = 0;
  double success_fraction = 0.0;
  double mean_rate = 0.0;
  double median_rate = 0.0;
  double mean_success_rate = 0.0;
  double success_rate_stderr = 0.0;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<CellSummary> summaries;
};

// Trial t of every cell uses derive_seed(master, "trial-<t>"), so cells that
// differ only in beam width see identical messages and noise.
SweepOutput sweep(const SweepGrid& grid, const StopRule& rule, const HashSeed& master_seed, unsigned threads = 1);

CellSummary summarize(const std::vector<SweepRow>& cell_rows);

// Header row plus one row per trial and a #summary row after each cell.
std::string sweep_csv(const SweepOutput& out);

inline constexpr const char* kSweepHeader =
    "trial,channel,p_or_snr,n,k,nu,B,passes_used,rate,success,first_error_bit,seed_hex";

}  // namespace spinal
