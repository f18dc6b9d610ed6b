#include "spinal/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spinal/codeword_io.hpp"
#include "spinal/decoder.hpp"
#include "spinal/exponents.hpp"
#include "spinal/session.hpp"

namespace spinal::cli {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string spine_digest(const std::vector<SpineValue>& spine) {
  std::uint64_t h = 0;
  for (const auto& s : spine) {
    for (auto limb : s.limbs) h = mix64(h ^ limb);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Common {
  std::string config_path;
  std::string seed_hex;
  std::string out_path;
  unsigned threads = 1;
};

ExperimentConfig load(const Common& common) {
  ExperimentConfig cfg = load_config(common.config_path);
  if (!common.seed_hex.empty()) {
    try {
      cfg.master_seed = HashSeed::from_hex(common.seed_hex);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--seed: ") + e.what());
    }
    if (!cfg.code_seed_given) cfg.code.seed = derive_seed(cfg.master_seed, "code");
  }
  return cfg;
}

std::string output_path(const Common& common, const ExperimentConfig& cfg) {
  return common.out_path.empty() ? cfg.out_path : common.out_path;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

int cmd_encode(const Common& common, const std::string& message_hex, std::ostream& out) {
  ExperimentConfig cfg = load(common);
  Message msg;
  try {
    msg = message_hex.empty() ? Message(static_cast<std::size_t>(cfg.code.n))
                              : Message::from_hex(message_hex, static_cast<std::size_t>(cfg.code.n));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--message: ") + e.what());
  }
  std::string path = output_path(common, cfg);
  if (path.empty()) throw ConfigError("run.out: an output path is required for encode");
  Codeword cw = encode(cfg.code, msg, cfg.passes);
  write_codeword_file(path, cfg.code, cw);
  out << "spine_digest " << spine_digest(compute_spine(cfg.code, msg)) << "\n";
  out << "passes " << cw.passes() << "\n";
  return kOk;
}

int cmd_simulate(const Common& common, const std::string& message_hex, std::ostream& out) {
  ExperimentConfig cfg = load(common);
  auto n = static_cast<std::size_t>(cfg.code.n);
  Message msg;
  try {
    msg = message_hex.empty() ? Message::random(n, derive_seed(cfg.master_seed, "message"))
                              : Message::from_hex(message_hex, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--message: ") + e.what());
  }
  std::string path = output_path(common, cfg);
  if (path.empty()) throw ConfigError("run.out: an output path is required for simulate");

  HashSeed noise = derive_seed(cfg.master_seed, "channel");
  Codeword cw = encode(cfg.code, msg, cfg.passes);
  const ChannelModel& channel = cfg.channels.front();
  for (std::size_t l = 0; l < cw.passes(); ++l) {
    auto offset = static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(cw.blocks);
    if (const auto* bsc = std::get_if<BscChannel>(&channel)) {
      cw.bit_passes[l] = bsc_transmit(cw.bit_passes[l], bsc->p, noise, offset);
    } else {
      cw.symbol_passes[l] = awgn_transmit(cw.symbol_passes[l], std::get<AwgnChannel>(channel).sigma2, noise, offset);
    }
  }
  write_codeword_file(path, cfg.code, cw);
  out << "message " << msg.to_hex() << "\n";
  out << "noise_seed " << noise.to_hex() << "\n";
  out << "passes " << cw.passes() << "\n";
  return kOk;
}

int cmd_decode(const Common& common, const std::string& input, long long beam_flag, std::ostream& out) {
  ExperimentConfig cfg = load(common);
  CodewordFile file = read_codeword_file(input);
  const CodeParams& fp = file.params;
  if (fp.awgn.has_value() != cfg.code.awgn.has_value()) {
    throw ConfigError("metric mismatch: observation is " + std::string(fp.awgn ? "awgn" : "bsc") +
                      " but the config describes a " + (cfg.code.awgn ? "awgn" : "bsc") + " code");
  }
  if (fp.n != cfg.code.n || fp.k != cfg.code.k || fp.nu != cfg.code.nu || !(fp.seed == cfg.code.seed)) {
    throw ConfigError("code: observation header does not match the configured code");
  }
  if (fp.awgn && (fp.awgn->c != cfg.code.awgn->c || fp.awgn->beta != cfg.code.awgn->beta ||
                  fp.awgn->power != cfg.code.awgn->power)) {
    throw ConfigError("awgn: observation header does not match the configured constellation");
  }
  if (file.codeword.passes() == 0) throw std::runtime_error("observation holds no passes");
  std::size_t beam = beam_flag > 0 ? static_cast<std::size_t>(beam_flag) : cfg.beams.front();

  Observation obs = Observation::from_codeword(file.codeword);
  DecodeResult res = beam_decode(cfg.code, obs, beam, metric_for(cfg.code));
  std::string text = "message " + res.best_message.to_hex() + "\n" + "cost " + fmt("%.17g", res.best_cost) + "\n" +
                     "beam " + std::to_string(beam) + "\n" + "passes " + std::to_string(obs.passes()) + "\n" +
                     "nodes_expanded " + std::to_string(res.stats.nodes_expanded) + "\n" + "ties_broken " +
                     std::to_string(res.stats.ties_broken) + "\n";
  out << text;
  if (!common.out_path.empty()) write_text(common.out_path, text);
  return kOk;
}

int cmd_sweep(const Common& common, std::ostream& out) {
  ExperimentConfig cfg = load(common);
  SweepGrid grid;
  grid.codes.push_back(cfg.code);
  grid.channels = cfg.channels;
  grid.beams = cfg.beams;
  grid.trials = cfg.trials;
  grid.fixed_code_seed = cfg.code_seed_given;
  SweepOutput res = sweep(grid, cfg.rule, cfg.master_seed, common.threads);
  emit(output_path(common, cfg), config_echo(cfg) + sweep_csv(res), out);
  return kOk;
}

int cmd_exponent(const Common& common, std::ostream& out) {
  ExperimentConfig cfg = load(common);
  emit(output_path(common, cfg), config_echo(cfg) + exponent_csv(cfg), out);
  return kOk;
}

int cmd_golden_gen(const Common& common, std::ostream& out) {
  if (common.out_path.empty()) throw ConfigError("--out: a directory is required for golden-gen");
  std::filesystem::create_directories(common.out_path);
  auto dir = std::filesystem::path(common.out_path);
  write_text((dir / "hash_vectors.txt").string(), golden_hash_vectors());
  write_text((dir / "spine_vectors.txt").string(), golden_spine_vectors());
  out << "wrote " << (dir / "hash_vectors.txt").string() << "\n";
  out << "wrote " << (dir / "spine_vectors.txt").string() << "\n";
  return kOk;
}

}  // namespace

HashSeed golden_seed() {
  return HashSeed::from_hex("0123456789abcdeffedcba98765432100f1e2d3c4b5a69788796a5b4c3d2e1f0");
}

std::string golden_hash_vectors() {
  struct Shape {
    int nu;
    int k;
  };
  const Shape shapes[] = {{8, 2}, {16, 4}, {32, 4}, {32, 8}, {60, 4}, {64, 16}, {100, 4}, {128, 8}, {256, 16}};
  const HashSeed seeds[] = {golden_seed(), derive_seed(golden_seed(), "alt")};
  std::string text = "# nu k seed_hex state_hex block_hex -> out_hex\n";
  for (const auto& seed : seeds) {
    for (const auto& shape : shapes) {
      HashFunction h(seed, shape.nu, shape.k);
      std::vector<SpineValue> states{SpineValue{}};
      // A dense pseudo-random state and the all-ones state.
      SpineValue dense;
      SpineValue ones;
      for (int b = 0; b < shape.nu; ++b) {
        if (counter_u64(seed, static_cast<std::uint64_t>(b)) & 1U) dense.limbs[b >> 6] |= 1ULL << (b & 63);
        ones.limbs[b >> 6] |= 1ULL << (b & 63);
      }
      states.push_back(dense);
      states.push_back(ones);
      const MessageBlock max_block = (1U << shape.k) - 1;
      for (const auto& st : states) {
        for (MessageBlock block : {MessageBlock{0}, MessageBlock{1}, max_block}) {
          char head[32];
          std::snprintf(head, sizeof head, "%d %d ", shape.nu, shape.k);
          char blk[16];
          std::snprintf(blk, sizeof blk, "%x", block);
          text += head + seed.to_hex() + " " + st.to_hex(shape.nu) + " " + blk + " -> " +
                  h(st, block).to_hex(shape.nu) + "\n";
        }
      }
    }
  }
  return text;
}

std::string golden_spine_vectors() {
  CodeParams params;
  params.n = 16;
  params.k = 4;
  params.nu = 16;
  params.seed = golden_seed();
  Message zero(16);
  auto spine = compute_spine(params, zero);
  std::string text = "# n=16 k=4 nu=16 message=" + zero.to_hex() + " seed=" + params.seed.to_hex() + "\n";
  text += "spine";
  for (const auto& s : spine) text += " " + s.to_hex(params.nu);
  text += "\n";
  for (int l = 1; l <= 3; ++l) {
    text += "pass " + std::to_string(l);
    for (auto b : emit_pass_bsc(spine, l, params.nu)) text += b ? " 1" : " 0";
    text += "\n";
  }
  return text;
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::string text;
  for (const auto& [key, value] : cfg.entries) text += "# " + key + "=" + value + "\n";
  text += "# effective.master_seed=" + cfg.master_seed.to_hex() + "\n";
  text += "# effective.code_seed=" + cfg.code.seed.to_hex() + "\n";
  return text;
}

std::string exponent_csv(const ExperimentConfig& cfg) {
  namespace ex = exponents;
  if (cfg.exponent.rates.empty()) throw ConfigError("exponent.rates: at least one rate is required");
  std::string csv =
      "channel,p_or_snr,capacity,rate,gap,q,divergence,kappa,bound_case,bound_exponent,rho_star,e0_exponent,"
      "e_prime,zeta,beta,c,delta,r_beta\n";
  auto g = [](double v) { return fmt("%.17g", v); };
  for (const auto& channel : cfg.channels) {
    for (double rate : cfg.exponent.rates) {
      if (const auto* bsc = std::get_if<BscChannel>(&channel)) {
        ex::ExponentReport r = ex::report_bsc(bsc->p, rate);
        std::string which = !r.has_bound ? "none" : r.bound.which == ex::BoundCase::divergence ? "a" : "b";
        csv += "bsc," + g(r.parameter) + ',' + g(r.capacity) + ',' + g(r.rate) + ',' + g(r.gap) + ',' +
               (r.has_bound ? g(r.q) : "") + ',' + (r.has_bound ? g(r.divergence) : "") + ',' + g(r.kappa) + ',' +
               which + ',' + g(r.has_bound ? r.bound.exponent : 0.0) + ',' + g(r.e0.rho) + ',' + g(r.e0.exponent) +
               ",,,,,,\n";
      } else {
        double sigma2 = std::get<AwgnChannel>(channel).sigma2;
        double power = cfg.code.awgn->power;
        double sigma_min2 = cfg.exponent.sigma_min2.value_or(sigma2);
        ex::ExponentReport r = ex::report_awgn(power, sigma2, sigma_min2, cfg.exponent.epsilon, rate);
        double exponent = r.has_bound ? r.awgn.e_prime - rate : 0.0;
        csv += "awgn," + g(r.parameter) + ',' + g(r.capacity) + ',' + g(r.rate) + ',' + g(r.gap) + ",,,," +
               (r.has_bound ? "eprime" : "none") + ',' + g(exponent) + ",,," + g(r.awgn.e_prime) + ',' +
               g(r.awgn.zeta) + ',' + g(r.awgn.beta) + ',' + std::to_string(r.awgn.c) + ',' + g(r.awgn.delta) + ',' +
               g(r.awgn.r_beta) + "\n";
      }
    }
  }
  return csv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spinal code encoder, decoder and rateless channel simulator"};
  app.require_subcommand(1);

  Common common;
  std::string message_hex;
  std::string input;
  long long beam = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config_path, "experiment config (INI)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed_hex, "master seed override (hex)");
    sub->add_option("--out", common.out_path, "output path");
    sub->add_option("--threads", common.threads, "worker threads, 0 = auto");
  };

  auto* encode_cmd = app.add_subcommand("encode", "encode a message into a codeword file");
  add_common(encode_cmd, true);
  encode_cmd->add_option("--message", message_hex, "message as hex, MSB-first (default all zeros)");

  auto* simulate_cmd = app.add_subcommand("simulate", "encode and send over the configured channel");
  add_common(simulate_cmd, true);
  simulate_cmd->add_option("--message", message_hex, "message as hex (default drawn from the seed)");

  auto* decode_cmd = app.add_subcommand("decode", "beam-decode an observation file");
  add_common(decode_cmd, true);
  decode_cmd->add_option("--input", input, "observation file")->required();
  decode_cmd->add_option("--beam", beam, "beam width (default: first decoder.beam)");

  auto* sweep_cmd = app.add_subcommand("sweep", "rateless session sweep to CSV");
  add_common(sweep_cmd, true);

  auto* exponent_cmd = app.add_subcommand("exponent", "error-exponent report to CSV");
  add_common(exponent_cmd, true);

  auto* golden_cmd = app.add_subcommand("golden-gen", "write golden hash and spine vectors");
  add_common(golden_cmd, false);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (encode_cmd->parsed()) return cmd_encode(common, message_hex, out);
    if (simulate_cmd->parsed()) return cmd_simulate(common, message_hex, out);
    if (decode_cmd->parsed()) return cmd_decode(common, input, beam, out);
    if (sweep_cmd->parsed()) return cmd_sweep(common, out);
    if (exponent_cmd->parsed()) return cmd_exponent(common, out);
    if (golden_cmd->parsed()) return cmd_golden_gen(common, out);
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}

}  // namespace spinal::cli
