#include "spinal/decoder.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spinal {

namespace {

constexpr int kMaxTableBits = 20;

void check_observation(const CodeParams& params, const Observation& obs, Metric metric) {
  params.validate();
  if (metric != obs.metric()) throw std::invalid_argument("metric does not match observation variant");
  if (metric != metric_for(params)) throw std::invalid_argument("metric does not match code parameters");
  if (obs.blocks() != params.blocks()) {
    throw std::invalid_argument("observation has " + std::to_string(obs.blocks()) +
                                " spine blocks, expected " + std::to_string(params.blocks()));
  }
  if (obs.passes() > params.max_passes()) {
    throw std::out_of_range("observation holds " + std::to_string(obs.passes()) +
                            " passes, pass budget is " + std::to_string(params.max_passes()));
  }
}

// Per-block cost evaluation with the observation rearranged spine-major.
class BranchCoster {
 public:
  BranchCoster(const CodeParams& params, const Observation& obs)
      : nu_(params.nu), passes_(obs.passes()), metric_(obs.metric()) {
    auto blocks = static_cast<std::size_t>(obs.blocks());
    if (metric_ == Metric::hamming) {
      packed_ = nu_ <= 64 && passes_ <= 64;
      if (packed_) {
        // Pass 1 lands in the top bit so the word lines up with s >> (nu - L).
        words_.assign(blocks, 0);
        for (std::size_t i = 0; i < blocks; ++i) {
          std::uint64_t w = 0;
          for (int l = 0; l < passes_; ++l) w = (w << 1) | obs.bit(l, static_cast<int>(i));
          words_[i] = w;
        }
        mask_ = passes_ >= 64 ? ~0ULL : ((1ULL << passes_) - 1);
      } else {
        bits_.resize(blocks * static_cast<std::size_t>(passes_));
        for (std::size_t i = 0; i < blocks; ++i) {
          for (int l = 0; l < passes_; ++l) bits_[i * passes_ + l] = obs.bit(l, static_cast<int>(i));
        }
      }
    } else {
      const AwgnParams& ap = *params.awgn;
      c_ = ap.c;
      beta_ = ap.beta;
      power_ = ap.power;
      if (c_ <= kMaxTableBits) {
        table_.resize(std::size_t{1} << c_);
        for (std::size_t b = 0; b < table_.size(); ++b) {
          table_[b] = map_symbol(static_cast<std::uint32_t>(b), c_, beta_, power_);
        }
      }
      symbols_.resize(blocks * static_cast<std::size_t>(passes_));
      for (std::size_t i = 0; i < blocks; ++i) {
        for (int l = 0; l < passes_; ++l) symbols_[i * passes_ + l] = obs.symbol(l, static_cast<int>(i));
      }
    }
  }

  double operator()(int block, const SpineValue& s) const {
    auto i = static_cast<std::size_t>(block);
    if (metric_ == Metric::hamming) {
      if (packed_) {
        std::uint64_t regenerated = passes_ == 0 ? 0 : (s.limbs[0] >> (nu_ - passes_)) & mask_;
        return static_cast<double>(std::popcount(regenerated ^ words_[i]));
      }
      int cost = 0;
      for (int l = 0; l < passes_; ++l) cost += s.bit(nu_ - 1 - l) != bits_[i * passes_ + l];
      return cost;
    }
    double cost = 0.0;
    for (int l = 0; l < passes_; ++l) {
      auto b = static_cast<std::uint32_t>(s.bits(nu_ - (l + 1) * c_, c_));
      double x = table_.empty() ? map_symbol(b, c_, beta_, power_) : table_[b];
      double d = symbols_[i * passes_ + l] - x;
      cost += d * d;
    }
    return cost;
  }

 private:
  int nu_;
  int passes_;
  Metric metric_;
  bool packed_ = false;
  std::uint64_t mask_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint8_t> bits_;
  int c_ = 0;
  double beta_ = 0.0;
  double power_ = 0.0;
  std::vector<double> table_;
  std::vector<double> symbols_;
};

struct Child {
  double cost;
  // parent lexicographic rank * 2^16 + block: orders children by prefix bits.
  std::uint64_t order;
  std::uint32_t parent;
  MessageBlock block;
  SpineValue state;
};

bool child_less(const Child& a, const Child& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.order < b.order;
}

struct Link {
  std::uint32_t parent;
  MessageBlock block;
};

Message trace_back(const std::vector<std::vector<Link>>& layers, std::uint32_t leaf, int k, int n) {
  Message msg(static_cast<std::size_t>(n));
  std::uint32_t idx = leaf;
  for (std::size_t d = layers.size(); d-- > 0;) {
    const Link& link = layers[d][idx];
    msg.set_block(d, k, link.block);
    idx = link.parent;
  }
  return msg;
}

// Same total as codeword_distance, accumulated spine by spine so that the
// floating-point sum matches the beam decoder's path costs bit for bit.
double spine_major_distance(const Observation& obs, const Codeword& cw) {
  bool bsc = cw.kind == Codeword::Kind::bsc;
  double total = 0.0;
  for (int i = 0; i < obs.blocks(); ++i) {
    double branch = 0.0;
    for (int l = 0; l < obs.passes(); ++l) {
      if (bsc) {
        branch += cw.bit_passes[l][i] != obs.bit(l, i) ? 1.0 : 0.0;
      } else {
        double d = obs.symbol(l, i) - cw.symbol_passes[l][i];
        branch += d * d;
      }
    }
    total += branch;
  }
  return total;
}

}  // namespace

Observation Observation::for_bsc(int blocks) { return Observation(Metric::hamming, blocks); }

Observation Observation::for_awgn(int blocks) { return Observation(Metric::euclidean, blocks); }

Observation Observation::from_codeword(const Codeword& cw) {
  Observation obs = cw.kind == Codeword::Kind::bsc ? for_bsc(cw.blocks) : for_awgn(cw.blocks);
  for (const auto& row : cw.bit_passes) obs.add_pass(std::span<const std::uint8_t>(row));
  for (const auto& row : cw.symbol_passes) obs.add_pass(std::span<const double>(row));
  return obs;
}

void Observation::add_pass(std::span<const std::uint8_t> bits) {
  if (metric_ != Metric::hamming) throw std::invalid_argument("bit pass added to an AWGN observation");
  if (bits.size() != static_cast<std::size_t>(blocks_)) throw std::invalid_argument("pass length must equal n/k");
  for (auto b : bits) bits_.push_back(b & 1);
  ++passes_;
}

void Observation::add_pass(std::span<const double> symbols) {
  if (metric_ != Metric::euclidean) throw std::invalid_argument("symbol pass added to a BSC observation");
  if (symbols.size() != static_cast<std::size_t>(blocks_)) throw std::invalid_argument("pass length must equal n/k");
  symbols_.insert(symbols_.end(), symbols.begin(), symbols.end());
  ++passes_;
}

Metric metric_for(const CodeParams& params) { return params.awgn ? Metric::euclidean : Metric::hamming; }

double branch_cost(const Observation& obs, int block, const SpineValue& state, const CodeParams& params,
                   Metric metric) {
  check_observation(params, obs, metric);
  if (block < 0 || block >= obs.blocks()) throw std::out_of_range("block index out of range");
  return BranchCoster(params, obs)(block, state);
}

double codeword_distance(const Observation& obs, const Codeword& cw) {
  if (static_cast<int>(cw.passes()) != obs.passes() || cw.blocks != obs.blocks()) {
    throw std::invalid_argument("codeword shape does not match observation");
  }
  bool bsc = cw.kind == Codeword::Kind::bsc;
  if (bsc != (obs.metric() == Metric::hamming)) throw std::invalid_argument("metric mismatch");
  double total = 0.0;
  for (int l = 0; l < obs.passes(); ++l) {
    for (int i = 0; i < obs.blocks(); ++i) {
      if (bsc) {
        total += cw.bit_passes[l][i] != obs.bit(l, i) ? 1.0 : 0.0;
      } else {
        double d = obs.symbol(l, i) - cw.symbol_passes[l][i];
        total += d * d;
      }
    }
  }
  return total;
}

DecodeResult beam_decode(const CodeParams& params, const Observation& obs, std::size_t beam, Metric metric) {
  check_observation(params, obs, metric);
  if (beam < 1) throw std::invalid_argument("beam width must be at least 1");
  if (obs.passes() < 1) throw std::invalid_argument("observation holds no passes");

  HashFunction h(params.seed, params.nu, params.k);
  BranchCoster coster(params, obs);
  const std::uint32_t fanout = 1U << params.k;
  const int depth = params.blocks();

  DecodeResult result;
  std::vector<std::vector<Link>> layers;
  layers.reserve(static_cast<std::size_t>(depth));

  // Survivors of the current depth, cost-ordered, with their prefix ranks.
  std::vector<Child> survivors{Child{0.0, 0, 0, 0, SpineValue{}}};
  std::vector<std::uint64_t> lex_rank{0};
  std::vector<Child> children;
  std::vector<std::uint32_t> by_prefix;

  for (int d = 0; d < depth; ++d) {
    children.clear();
    children.reserve(survivors.size() * fanout);
    for (std::uint32_t j = 0; j < survivors.size(); ++j) {
      const Child& parent = survivors[j];
      for (MessageBlock b = 0; b < fanout; ++b) {
        SpineValue next = h(parent.state, b);
        double cost = parent.cost + coster(d, next);
        children.push_back(Child{cost, (lex_rank[j] << 16) | b, j, b, next});
      }
    }
    result.stats.nodes_expanded += children.size();

    if (children.size() > beam) {
      auto cut = children.begin() + static_cast<std::ptrdiff_t>(beam);
      std::nth_element(children.begin(), cut, children.end(), child_less);
      double kept_max = std::max_element(children.begin(), cut, child_less)->cost;
      double dropped_min = std::min_element(cut, children.end(), child_less)->cost;
      if (kept_max == dropped_min) ++result.stats.ties_broken;
      children.erase(cut, children.end());
    }
    std::sort(children.begin(), children.end(), child_less);

    // Rank the new survivors by prefix bits for the next round's tie order.
    by_prefix.resize(children.size());
    std::iota(by_prefix.begin(), by_prefix.end(), 0U);
    std::sort(by_prefix.begin(), by_prefix.end(),
              [&](std::uint32_t a, std::uint32_t b) { return children[a].order < children[b].order; });
    lex_rank.assign(children.size(), 0);
    for (std::uint32_t r = 0; r < by_prefix.size(); ++r) lex_rank[by_prefix[r]] = r;

    std::vector<Link> layer;
    layer.reserve(children.size());
    for (const auto& c : children) layer.push_back(Link{c.parent, c.block});
    layers.push_back(std::move(layer));
    survivors.swap(children);
  }

  result.survivors.reserve(survivors.size());
  for (std::uint32_t j = 0; j < survivors.size(); ++j) {
    result.survivors.push_back(
        Candidate{survivors[j].state, survivors[j].cost, trace_back(layers, j, params.k, params.n)});
  }
  result.best_message = result.survivors.front().prefix_bits;
  result.best_cost = result.survivors.front().path_cost;
  return result;
}

DecodeResult ml_decode_exact(const CodeParams& params, const Observation& obs, Metric metric) {
  check_observation(params, obs, metric);
  if (params.n > kMaxExactBits) {
    throw std::invalid_argument("exhaustive decoding is limited to n <= " + std::to_string(kMaxExactBits));
  }
  if (obs.passes() < 1) throw std::invalid_argument("observation holds no passes");

  DecodeResult result;
  const std::uint64_t count = 1ULL << params.n;
  auto n = static_cast<std::size_t>(params.n);
  for (std::uint64_t index = 0; index < count; ++index) {
    Message msg = Message::from_index(index, n);
    Codeword cw = encode(params, msg, obs.passes());
    double cost = spine_major_distance(obs, cw);
    ++result.stats.nodes_expanded;
    if (index == 0 || cost < result.best_cost) {
      result.best_cost = cost;
      result.best_message = msg;
    } else if (cost == result.best_cost) {
      ++result.stats.ties_broken;
    }
  }
  auto spine = compute_spine(params, result.best_message);
  result.survivors.push_back(Candidate{spine.back(), result.best_cost, result.best_message});
  return result;
}

Message decode_prefix_confidence(const DecodeResult& result, int tail_guard) {
  auto n = result.best_message.size();
  if (tail_guard < 0 || static_cast<std::size_t>(tail_guard) >= n) {
    throw std::invalid_argument("tail_guard must be in [0, n)");
  }
  return result.best_message.prefix(n - static_cast<std::size_t>(tail_guard));
}

}  // namespace spinal
