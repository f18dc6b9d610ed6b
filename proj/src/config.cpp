#include "spinal/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>
#include <sstream>

namespace spinal {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kKnownKeys = {
    "code.n",        "code.k",           "code.nu",          "code.seed",       "awgn.c",
    "awgn.beta",     "awgn.power",       "channel.type",     "channel.p",       "channel.snr",
    "channel.sigma2", "decoder.beam",    "session.rule",     "session.tail_guard", "session.limit",
    "session.tail_len", "session.trials", "run.seed",        "run.out",         "run.passes",
    "exponent.rates", "exponent.epsilon", "exponent.sigma_min2"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Fields {
 public:
  explicit Fields(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& path) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  bool has_section(const std::string& name) const { return tree_.get_child_optional(name).has_value(); }

  long long integer(const std::string& path, std::optional<long long> fallback = std::nullopt) const {
    auto v = get(path);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError(path + ": required");
    }
    return parse_int(path, *v);
  }

  double real(const std::string& path, std::optional<double> fallback = std::nullopt) const {
    auto v = get(path);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError(path + ": required");
    }
    return parse_real(path, *v);
  }

  std::vector<double> reals(const std::string& path) const {
    std::vector<double> out;
    for (const auto& item : items(path)) out.push_back(parse_real(path, item));
    return out;
  }

  std::vector<long long> integers(const std::string& path) const {
    std::vector<long long> out;
    for (const auto& item : items(path)) out.push_back(parse_int(path, item));
    return out;
  }

 private:
  std::vector<std::string> items(const std::string& path) const {
    std::vector<std::string> out;
    auto v = get(path);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw ConfigError(path + ": empty list element");
      out.push_back(item);
    }
    return out;
  }

  static long long parse_int(const std::string& path, const std::string& v) {
    try {
      std::size_t used = 0;
      long long out = std::stoll(v, &used);
      if (used == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError(path + ": expected an integer, got '" + v + "'");
  }

  static double parse_real(const std::string& path, const std::string& v) {
    try {
      std::size_t used = 0;
      double out = std::stod(v, &used);
      if (used == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError(path + ": expected a number, got '" + v + "'");
  }

  const pt::ptree& tree_;
};

HashSeed parse_seed(const std::string& path, const std::string& hex) {
  try {
    return HashSeed::from_hex(hex);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

int narrow(const std::string& path, long long v) {
  if (v < -1'000'000'000 || v > 1'000'000'000) throw ConfigError(path + ": value out of range");
  return static_cast<int>(v);
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    code.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (channels.empty()) throw ConfigError("channel: at least one channel parameter is required");
  for (const auto& ch : channels) {
    try {
      validate_channel(ch);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    bool awgn = std::holds_alternative<AwgnChannel>(ch);
    if (awgn != code.awgn.has_value()) {
      throw ConfigError(awgn ? "awgn: section required for an awgn channel"
                             : "channel.type: awgn section present but channel is bsc");
    }
  }
  if (beams.empty()) throw ConfigError("decoder.beam: at least one beam width is required");
  for (auto b : beams) {
    if (b < 1) throw ConfigError("decoder.beam: must be at least 1");
  }
  try {
    validate_rule(rule, code);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials < 0) throw ConfigError("session.trials: must be nonnegative");
  if (passes < 0 || passes > code.max_passes()) {
    throw ConfigError("run.passes: must be in [0, " + std::to_string(code.max_passes()) + "]");
  }
  if (!(exponent.epsilon > 0.0)) throw ConfigError("exponent.epsilon: must be positive");
  for (double r : exponent.rates) {
    if (!(r >= 0.0)) throw ConfigError("exponent.rates: must be nonnegative");
  }
  if (exponent.sigma_min2 && !(*exponent.sigma_min2 > 0.0)) {
    throw ConfigError("exponent.sigma_min2: must be positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }

  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": keys must live inside a [section]");
    for (const auto& [key, value] : body) {
      std::string path = section + "." + key;
      if (!kKnownKeys.contains(path)) throw ConfigError(path + ": unknown key");
      cfg.entries.emplace_back(path, trim(value.data()));
    }
  }

  Fields f(tree);
  if (auto seed = f.get("run.seed")) cfg.master_seed = parse_seed("run.seed", *seed);
  cfg.out_path = f.get("run.out").value_or("");
  cfg.passes = narrow("run.passes", f.integer("run.passes", 1));

  CodeParams& code = cfg.code;
  code.n = narrow("code.n", f.integer("code.n"));
  code.k = narrow("code.k", f.integer("code.k"));
  code.nu = narrow("code.nu", f.integer("code.nu"));
  if (auto seed = f.get("code.seed")) {
    code.seed = parse_seed("code.seed", *seed);
    cfg.code_seed_given = true;
  } else {
    code.seed = derive_seed(cfg.master_seed, "code");
  }
  if (f.has_section("awgn")) {
    code.awgn = AwgnParams{narrow("awgn.c", f.integer("awgn.c")), f.real("awgn.beta"), f.real("awgn.power", 1.0)};
  }

  std::string type = f.get("channel.type").value_or("bsc");
  if (type == "bsc") {
    for (double p : f.reals("channel.p")) cfg.channels.emplace_back(BscChannel{p});
    if (f.get("channel.snr") || f.get("channel.sigma2")) throw ConfigError("channel.type: bsc takes only channel.p");
  } else if (type == "awgn") {
    if (f.get("channel.p")) throw ConfigError("channel.type: awgn takes channel.snr or channel.sigma2");
    if (!code.awgn) throw ConfigError("awgn: section required for an awgn channel");
    auto snrs = f.reals("channel.snr");
    auto sigmas = f.reals("channel.sigma2");
    if (!snrs.empty() && !sigmas.empty()) throw ConfigError("channel.snr: give either snr or sigma2, not both");
    for (double snr : snrs) {
      if (!(snr > 0.0)) throw ConfigError("channel.snr: must be positive");
      cfg.channels.emplace_back(AwgnChannel{code.awgn->power / snr});
    }
    for (double s2 : sigmas) cfg.channels.emplace_back(AwgnChannel{s2});
  } else {
    throw ConfigError("channel.type: expected 'bsc' or 'awgn', got '" + type + "'");
  }

  if (f.get("decoder.beam")) {
    cfg.beams.clear();
    for (long long b : f.integers("decoder.beam")) {
      if (b < 1) throw ConfigError("decoder.beam: must be at least 1");
      cfg.beams.push_back(static_cast<std::size_t>(b));
    }
  }

  std::string rule = f.get("session.rule").value_or("genie");
  if (rule == "genie") {
    cfg.rule = GenieRule{narrow("session.tail_guard", f.integer("session.tail_guard", 0))};
  } else if (rule == "max_passes") {
    cfg.rule = MaxPassesRule{narrow("session.limit", f.integer("session.limit")),
                             narrow("session.tail_guard", f.integer("session.tail_guard", 0))};
  } else if (rule == "check_bits") {
    cfg.rule = CheckBitsRule{narrow("session.tail_len", f.integer("session.tail_len"))};
  } else {
    throw ConfigError("session.rule: expected genie, max_passes or check_bits, got '" + rule + "'");
  }
  cfg.trials = narrow("session.trials", f.integer("session.trials", 0));

  cfg.exponent.rates = f.reals("exponent.rates");
  cfg.exponent.epsilon = f.real("exponent.epsilon", 0.1);
  if (f.get("exponent.sigma_min2")) cfg.exponent.sigma_min2 = f.real("exponent.sigma_min2");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace spinal
