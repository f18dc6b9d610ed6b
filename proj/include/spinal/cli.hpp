#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spinal/config.hpp"
#include "spinal/hashfam.hpp"

namespace spinal::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3 };

// Fixed seed behind the shipped golden corpus.
HashSeed golden_seed();

// `nu k seed_hex state_hex block_hex -> out_hex` lines.
std::string golden_hash_vectors();

// Spine and first pass rows of the all-zero message under the golden code.
std::string golden_spine_vectors();

// Config entries as "# section.key=value" lines plus the effective seed.
std::string config_echo(const ExperimentConfig& cfg);

std::string exponent_csv(const ExperimentConfig& cfg);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinal::cli
