#include "qsched/qtrace.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace qsched {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

template <typename Int>
Int to_int(std::string_view word, int line, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

RawTrace parse_raw_trace(std::string_view text) {
  RawTrace raw;
  bool have_b = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = split_words(line);
    if (words.empty()) continue;

    if (words[0] == "B") {
      if (words.size() != 2) throw ParseError(line_no, "expected 'B <int>'");
      if (have_b) throw ParseError(line_no, "duplicate B directive");
      raw.buffer_size = to_int<long long>(words[1], line_no, "buffer size");
      have_b = true;
    } else if (words[0] == "p") {
      if (words.size() != 5) throw ParseError(line_no, "expected 'p <id> <release> <deadline> <weight>'");
      Packet p;
      p.id = to_int<int>(words[1], line_no, "id");
      p.release = to_int<int>(words[2], line_no, "release");
      p.deadline = to_int<int>(words[3], line_no, "deadline");
      auto w = parse_weight(words[4]);
      if (!w) throw ParseError(line_no, "bad weight '" + std::string(words[4]) + "'");
      p.weight = *w;
      raw.packets.push_back(p);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(words[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_b) throw ParseError(line_no, "missing B directive");
  return raw;
}

Trace parse_trace(std::string_view text) {
  return make_trace(parse_raw_trace(text));
}

std::string emit_trace(const Trace& trace) {
  std::ostringstream os;
  os << "# qtrace v1\n";
  os << "B " << trace.buffer_size() << "\n";
  for (const Packet& p : trace.packets()) {
    os << "p " << p.id << " " << p.release << " " << p.deadline << " " << format_weight(p.weight) << "\n";
  }
  return os.str();
}

Trace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_trace(buffer.str());
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << emit_trace(trace);
}

std::string trace_digest(const Trace& trace) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_trace(trace)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace qsched
