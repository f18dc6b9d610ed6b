#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinal/channels.hpp"
#include "spinal/encoder.hpp"
#include "spinal/hashfam.hpp"
#include "spinal/session.hpp"

namespace spinal {

// Invalid configuration; the message starts with the offending field path
// (e.g. "channel.p: ...").
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExponentSettings {
  std::vector<double> rates;
  double epsilon = 0.1;
  std::optional<double> sigma_min2;
};

// Parsed experiment configuration (INI sections: code, awgn, channel,
// decoder, session, run, exponent).
struct ExperimentConfig {
  CodeParams code;
  bool code_seed_given = false;
  std::vector<ChannelModel> channels;
  std::vector<std::size_t> beams{1};
  StopRule rule = GenieRule{0};
  int trials = 0;
  HashSeed master_seed;
  std::string out_path;
  int passes = 1;
  ExponentSettings exponent;

  // "section.key=value" in file order, for echoing into outputs.
  std::vector<std::pair<std::string, std::string>> entries;

  // Cross-module checks; throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace spinal
