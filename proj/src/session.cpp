#include "spinal/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "spinal/decoder.hpp"

namespace spinal {

namespace {

std::optional<int> first_mismatch(const Message& a, const Message& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return static_cast<int>(i);
  }
  return std::nullopt;
}

double channel_parameter(const ChannelModel& channel, const CodeParams& params) {
  if (const auto* bsc = std::get_if<BscChannel>(&channel)) return bsc->p;
  return params.awgn->power / std::get<AwgnChannel>(channel).sigma2;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

int tail_bits(const StopRule& rule) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CheckBitsRule>) {
          return r.tail_len;
        } else {
          return r.tail_guard;
        }
      },
      rule);
}

std::string rule_name(const StopRule& rule) {
  if (std::holds_alternative<GenieRule>(rule)) return "genie";
  if (std::holds_alternative<MaxPassesRule>(rule)) return "max_passes";
  return "check_bits";
}

void validate_rule(const StopRule& rule, const CodeParams& params) {
  int tail = tail_bits(rule);
  if (tail < 0 || tail >= params.n) throw std::invalid_argument("session.tail: must be in [0, n)");
  if (const auto* mp = std::get_if<MaxPassesRule>(&rule)) {
    if (mp->limit < 1 || mp->limit > params.max_passes()) {
      throw std::invalid_argument("session.limit: must be in [1, " + std::to_string(params.max_passes()) + "]");
    }
  }
}

int check_bits_min_pass(const CodeParams& params) {
  int per_symbol = params.awgn ? params.awgn->c : 1;
  return std::min(params.max_passes(), (params.k + per_symbol - 1) / per_symbol);
}

SessionResult run_session(const CodeParams& params, const ChannelModel& channel, std::size_t beam,
                          const StopRule& rule, const HashSeed& trial_seed) {
  params.validate();
  bool awgn = std::holds_alternative<AwgnChannel>(channel);
  if (awgn != params.awgn.has_value()) {
    throw std::invalid_argument("channel variant does not match the code's symbol mapping");
  }
  validate_rule(rule, params);
  if (beam < 1) throw std::invalid_argument("decoder.beam: must be at least 1");

  const auto n = static_cast<std::size_t>(params.n);
  const int tail = tail_bits(rule);
  const auto guarded = n - static_cast<std::size_t>(tail);

  Message msg = Message::random(n, derive_seed(trial_seed, "message"));
  for (std::size_t i = guarded; i < n; ++i) msg.set(i, false);
  auto spine = compute_spine(params, msg);
  HashSeed noise = derive_seed(trial_seed, "channel");

  int budget = params.max_passes();
  int last_pass = budget;
  if (const auto* mp = std::get_if<MaxPassesRule>(&rule)) last_pass = mp->limit;

  Observation obs = awgn ? Observation::for_awgn(params.blocks()) : Observation::for_bsc(params.blocks());
  SessionResult result;
  result.trial_seed = trial_seed;
  Metric metric = metric_for(params);

  for (int pass = 1; pass <= last_pass; ++pass) {
    auto offset = static_cast<std::uint64_t>(pass - 1) * static_cast<std::uint64_t>(params.blocks());
    if (awgn) {
      auto sent = emit_pass_awgn(spine, pass, params);
      auto recv = awgn_transmit(sent, std::get<AwgnChannel>(channel).sigma2, noise, offset);
      obs.add_pass(std::span<const double>(recv));
    } else {
      auto sent = emit_pass_bsc(spine, pass, params.nu);
      auto recv = bsc_transmit(sent, std::get<BscChannel>(channel).p, noise, offset);
      obs.add_pass(std::span<const std::uint8_t>(recv));
    }
    if (std::holds_alternative<MaxPassesRule>(rule) && pass < last_pass) continue;

    DecodeResult dec = beam_decode(params, obs, beam, metric);
    result.passes_used = pass;
    result.first_error_bit = first_mismatch(dec.best_message, msg);
    bool prefix_ok = !result.first_error_bit || static_cast<std::size_t>(*result.first_error_bit) >= guarded;

    bool stop = false;
    if (std::holds_alternative<GenieRule>(rule)) {
      stop = prefix_ok;
    } else if (std::holds_alternative<CheckBitsRule>(rule)) {
      // Before the coded bits cover the message, zero-cost ties are broken
      // toward zero prefixes and the tail check is meaningless.
      stop = pass >= check_bits_min_pass(params);
      for (std::size_t i = guarded; i < n; ++i) stop = stop && dec.best_message[i] == 0;
    } else {
      stop = true;
    }
    if (stop) {
      result.success = prefix_ok;
      break;
    }
  }
  result.achieved_rate = static_cast<double>(params.k) / result.passes_used;
  return result;
}

CellSummary summarize(const std::vector<SweepRow>& cell_rows) {
  CellSummary s;
  if (cell_rows.empty()) return s;
  const SweepRow& first = cell_rows.front();
  s.channel = first.channel;
  s.p_or_snr = first.p_or_snr;
  s.n = first.n;
  s.k = first.k;
  s.nu = first.nu;
  s.beam = first.beam;
  s.trials = static_cast<int>(cell_rows.size());

  std::vector<double> rates;
  std::vector<double> success_rates;
  for (const auto& row : cell_rows) {
    rates.push_back(row.result.achieved_rate);
    if (row.result.success) success_rates.push_back(row.result.achieved_rate);
  }
  s.successes = static_cast<int>(success_rates.size());
  s.success_fraction = static_cast<double>(s.successes) / s.trials;
  double sum = 0.0;
  for (double r : rates) sum += r;
  s.mean_rate = sum / s.trials;
  std::sort(rates.begin(), rates.end());
  std::size_t mid = rates.size() / 2;
  s.median_rate = rates.size() % 2 == 1 ? rates[mid] : 0.5 * (rates[mid - 1] + rates[mid]);
  if (!success_rates.empty()) {
    double ssum = 0.0;
    for (double r : success_rates) ssum += r;
    s.mean_success_rate = ssum / success_rates.size();
    if (success_rates.size() > 1) {
      double var = 0.0;
      for (double r : success_rates) var += (r - s.mean_success_rate) * (r - s.mean_success_rate);
      var /= static_cast<double>(success_rates.size() - 1);
      s.success_rate_stderr = std::sqrt(var / success_rates.size());
    }
  }
  return s;
}

SweepOutput sweep(const SweepGrid& grid, const StopRule& rule, const HashSeed& master_seed, unsigned threads) {
  struct Job {
    const CodeParams* code;
    const ChannelModel* channel;
    std::size_t beam;
    int trial;
  };
  std::vector<Job> jobs;
  std::vector<std::size_t> cell_sizes;
  for (const auto& code : grid.codes) {
    code.validate();
    validate_rule(rule, code);
    for (const auto& channel : grid.channels) {
      validate_channel(channel);
      for (auto beam : grid.beams) {
        for (int t = 0; t < grid.trials; ++t) jobs.push_back(Job{&code, &channel, beam, t});
        cell_sizes.push_back(static_cast<std::size_t>(std::max(grid.trials, 0)));
      }
    }
  }

  std::vector<HashSeed> trial_seeds;
  for (int t = 0; t < grid.trials; ++t) trial_seeds.push_back(derive_seed(master_seed, "trial-" + std::to_string(t)));

  SweepOutput out;
  out.rows.resize(jobs.size());
  auto run_job = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    CodeParams params = *job.code;
    const HashSeed& seed = trial_seeds[static_cast<std::size_t>(job.trial)];
    if (!grid.fixed_code_seed) params.seed = derive_seed(seed, "code");
    SweepRow row;
    row.trial = job.trial;
    row.channel = channel_name(*job.channel);
    row.p_or_snr = channel_parameter(*job.channel, params);
    row.n = params.n;
    row.k = params.k;
    row.nu = params.nu;
    row.beam = job.beam;
    row.result = run_session(params, *job.channel, job.beam, rule, seed);
    out.rows[idx] = std::move(row);
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  if (threads <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::size_t start = 0;
  for (auto size : cell_sizes) {
    if (size > 0) {
      std::vector<SweepRow> cell(out.rows.begin() + static_cast<std::ptrdiff_t>(start),
                                 out.rows.begin() + static_cast<std::ptrdiff_t>(start + size));
      out.summaries.push_back(summarize(cell));
    }
    start += size;
  }
  return out;
}

std::string sweep_csv(const SweepOutput& out) {
  std::string csv = kSweepHeader;
  csv += '\n';
  std::size_t row = 0;
  for (const auto& s : out.summaries) {
    for (int t = 0; t < s.trials; ++t, ++row) {
      const SweepRow& r = out.rows[row];
      csv += std::to_string(r.trial) + ',' + r.channel + ',' + fmt("%.6g", r.p_or_snr) + ',' + std::to_string(r.n) +
             ',' + std::to_string(r.k) + ',' + std::to_string(r.nu) + ',' + std::to_string(r.beam) + ',' +
             std::to_string(r.result.passes_used) + ',' + fmt("%.6f", r.result.achieved_rate) + ',' +
             (r.result.success ? "1" : "0") + ',' +
             (r.result.first_error_bit ? std::to_string(*r.result.first_error_bit) : std::string()) + ',' +
             r.result.trial_seed.to_hex() + '\n';
    }
    csv += "#summary," + s.channel + ',' + fmt("%.6g", s.p_or_snr) + ',' + std::to_string(s.n) + ',' +
           std::to_string(s.k) + ',' + std::to_string(s.nu) + ',' + std::to_string(s.beam) +
           ",trials=" + std::to_string(s.trials) + ",successes=" + std::to_string(s.successes) +
           ",success_fraction=" + fmt("%.6f", s.success_fraction) + ",mean_rate=" + fmt("%.6f", s.mean_rate) +
           ",median_rate=" + fmt("%.6f", s.median_rate) + ",mean_success_rate=" + fmt("%.6f", s.mean_success_rate) +
           '\n';
  }
  return csv;
}

}  // namespace spinal
