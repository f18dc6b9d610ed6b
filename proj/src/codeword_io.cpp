#include "spinal/codeword_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spinal {

namespace {

constexpr const char* kMagic = "spinal-codeword 1";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  std::string line() {
    auto nl = bytes_.find('\n', pos_);
    if (nl == std::string::npos) throw ParseError("unterminated header line", pos_);
    std::string out = bytes_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return out;
  }

  // "key value" with the expected key.
  std::string field(const std::string& key) {
    std::size_t start = pos_;
    std::string l = line();
    if (l.size() <= key.size() || l.compare(0, key.size(), key) != 0 || l[key.size()] != ' ') {
      throw ParseError("expected header field '" + key + "'", start);
    }
    return l.substr(key.size() + 1);
  }

  long long int_field(const std::string& key) {
    std::size_t start = pos_;
    std::string v = field(key);
    try {
      std::size_t used = 0;
      long long out = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ParseError("malformed integer for '" + key + "'", start);
    }
  }

  double double_field(const std::string& key) {
    std::size_t start = pos_;
    std::string v = field(key);
    try {
      std::size_t used = 0;
      double out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ParseError("malformed number for '" + key + "'", start);
    }
  }

  std::uint32_t u32() {
    need(4, "section length");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }

  void need(std::size_t count, const char* what) {
    if (bytes_.size() - pos_ < count) {
      throw ParseError(std::string("truncated ") + what, bytes_.size());
    }
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_codeword(const CodeParams& params, const Codeword& cw) {
  bool awgn = cw.kind == Codeword::Kind::awgn;
  if (awgn != params.awgn.has_value()) {
    throw std::invalid_argument("codeword variant does not match code parameters");
  }
  std::string out;
  out += kMagic;
  out += "\nvariant ";
  out += awgn ? "awgn" : "bsc";
  out += "\nn " + std::to_string(params.n);
  out += "\nk " + std::to_string(params.k);
  out += "\nnu " + std::to_string(params.nu);
  out += "\nc " + std::to_string(awgn ? params.awgn->c : 0);
  out += "\nbeta " + format_double(awgn ? params.awgn->beta : 0.0);
  out += "\npower " + format_double(awgn ? params.awgn->power : 0.0);
  out += "\nseed " + params.seed.to_hex();
  out += "\nblocks " + std::to_string(cw.blocks);
  out += "\npasses " + std::to_string(cw.passes());
  out += "\nend\n";

  for (std::size_t l = 0; l < cw.passes(); ++l) {
    if (awgn) {
      const auto& row = cw.symbol_passes[l];
      put_u32(out, static_cast<std::uint32_t>(row.size() * 8));
      for (double x : row) put_f64(out, x);
    } else {
      const auto& row = cw.bit_passes[l];
      std::size_t nbytes = (row.size() + 7) / 8;
      put_u32(out, static_cast<std::uint32_t>(nbytes));
      for (std::size_t b = 0; b < nbytes; ++b) {
        unsigned v = 0;
        for (std::size_t j = 0; j < 8; ++j) {
          std::size_t i = 8 * b + j;
          v = (v << 1) | (i < row.size() ? row[i] : 0U);
        }
        out.push_back(static_cast<char>(v));
      }
    }
  }
  return out;
}

CodewordFile parse_codeword(const std::string& bytes) {
  Reader r(bytes);
  if (r.line() != kMagic) throw ParseError("missing 'spinal-codeword 1' magic", 0);

  CodewordFile file;
  std::size_t variant_at = r.offset();
  std::string variant = r.field("variant");
  if (variant != "bsc" && variant != "awgn") throw ParseError("unknown variant '" + variant + "'", variant_at);
  bool awgn = variant == "awgn";

  CodeParams& p = file.params;
  p.n = static_cast<int>(r.int_field("n"));
  p.k = static_cast<int>(r.int_field("k"));
  p.nu = static_cast<int>(r.int_field("nu"));
  int c = static_cast<int>(r.int_field("c"));
  double beta = r.double_field("beta");
  double power = r.double_field("power");
  std::size_t seed_at = r.offset();
  try {
    p.seed = HashSeed::from_hex(r.field("seed"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), seed_at);
  }
  if (awgn) p.awgn = AwgnParams{c, beta, power};
  std::size_t blocks_at = r.offset();
  auto blocks = r.int_field("blocks");
  auto passes = r.int_field("passes");
  if (r.line() != "end") throw ParseError("expected 'end' after header", r.offset());
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), blocks_at);
  }
  if (blocks != p.blocks()) throw ParseError("block count disagrees with n/k", blocks_at);
  if (passes < 0 || passes > p.max_passes()) throw ParseError("pass count outside budget", blocks_at);

  Codeword& cw = file.codeword;
  cw.kind = awgn ? Codeword::Kind::awgn : Codeword::Kind::bsc;
  cw.blocks = static_cast<int>(blocks);
  auto nblocks = static_cast<std::size_t>(blocks);
  for (long long l = 0; l < passes; ++l) {
    std::size_t section_at = r.offset();
    std::uint32_t len = r.u32();
    std::size_t expected = awgn ? nblocks * 8 : (nblocks + 7) / 8;
    if (len != expected) {
      throw ParseError("pass section length " + std::to_string(len) + ", expected " + std::to_string(expected),
                       section_at);
    }
    r.need(len, "pass section");
    if (awgn) {
      std::vector<double> row(nblocks);
      for (auto& x : row) x = r.f64();
      cw.symbol_passes.push_back(std::move(row));
    } else {
      std::vector<std::uint8_t> row(nblocks);
      for (std::size_t b = 0; b < len; ++b) {
        unsigned v = r.byte();
        for (std::size_t j = 0; j < 8; ++j) {
          std::size_t i = 8 * b + j;
          if (i < nblocks) row[i] = (v >> (7 - j)) & 1;
        }
      }
      cw.bit_passes.push_back(std::move(row));
    }
  }
  if (!r.at_end()) throw ParseError("trailing bytes after last pass", r.offset());
  return file;
}

void write_codeword_file(const std::string& path, const CodeParams& params, const Codeword& cw) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_codeword(params, cw);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CodewordFile read_codeword_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_codeword(ss.str());
}

}  // namespace spinal
