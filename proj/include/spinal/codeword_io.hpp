#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spinal/encoder.hpp"

namespace spinal {

// Container layout:
//
//   spinal-codeword 1\n
//   variant bsc|awgn\n
//   n <int>\n  k <int>\n  nu <int>\n
//   c <int>\n  beta <%.17g>\n  power <%.17g>\n   (zeros for bsc)
//   seed <64 hex>\n
//   blocks <int>\n
//   passes <int>\n
//   end\n
//
// followed by one section per pass: a little-endian u32 byte length, then
// the payload. BSC payloads are ceil(blocks/8) bytes of bits packed
// MSB-first; AWGN payloads are blocks little-endian IEEE-754 doubles.
struct CodewordFile {
  CodeParams params;
  Codeword codeword;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::string serialize_codeword(const CodeParams& params, const Codeword& cw);
CodewordFile parse_codeword(const std::string& bytes);

void write_codeword_file(const std::string& path, const CodeParams& params, const Codeword& cw);
CodewordFile read_codeword_file(const std::string& path);

}  // namespace spinal
