#pragma once

#include "qsched/model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsched {

/// Malformed qtrace input. line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// qtrace v1, one directive per line, '#' starts a comment:
//
//   # qtrace v1
//   B <int>
//   p <id> <release> <deadline> <weight>   # integer, decimal, or num/den

/// Syntax only; the result is not validated.
RawTrace parse_raw_trace(std::string_view text);

/// Parses and validates; validation failures throw std::invalid_argument.
Trace parse_trace(std::string_view text);

/// Canonical text: header, B line, one p line per packet in trace order,
/// weights as num/den.
std::string emit_trace(const Trace& trace);

Trace read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

/// 64-bit FNV-1a of emit_trace(), as 16 hex digits.
std::string trace_digest(const Trace& trace);

}  // namespace qsched
