#include "logsift/io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace logsift {

std::optional<std::int64_t> parse_epoch_ns(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-') {
    negative = true;
    ++pos;
  }
  std::int64_t seconds = 0;
  std::size_t start = pos;
  constexpr std::int64_t kMaxSeconds = std::numeric_limits<std::int64_t>::max() / 1'000'000'000 - 1;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    seconds = seconds * 10 + (text[pos] - '0');
    if (seconds > kMaxSeconds) return std::nullopt;
    ++pos;
  }
  if (pos == start) return std::nullopt;
  std::int64_t frac = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int ndigits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (ndigits < 9) {
        frac = frac * 10 + (text[pos] - '0');
        ++ndigits;
      }
      ++pos;
    }
    for (; ndigits < 9; ++ndigits) frac *= 10;
  }
  if (pos != text.size()) return std::nullopt;
  std::int64_t ns = seconds * 1'000'000'000 + frac;
  return negative ? -ns : ns;
}

std::string format_epoch(std::int64_t ns) {
  std::string sign;
  if (ns < 0) {
    sign = "-";
    ns = -ns;
  }
  std::string out = sign + std::to_string(ns / 1'000'000'000);
  std::int64_t frac = ns % 1'000'000'000;
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(0, 9 - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += '.';
    out += f;
  }
  return out;
}

std::optional<RawLogRecord> parse_record_line(std::string_view line, std::uint64_t line_no,
                                              const std::optional<std::string>& source) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  RawLogRecord rec;
  rec.line_no = line_no;
  rec.source_file = source;
  std::string_view message = line;
  std::size_t tab1 = line.find('\t');
  if (tab1 != std::string_view::npos) {
    std::size_t tab2 = line.find('\t', tab1 + 1);
    if (tab2 != std::string_view::npos) {
      if (auto ts = parse_epoch_ns(line.substr(0, tab1))) {
        rec.timestamp_ns = ts;
        std::string_view host = line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (!host.empty()) rec.host = std::string(host);
        message = line.substr(tab2 + 1);
      }
    }
  }
  std::size_t first = 0;
  while (first < message.size() && is_space(message[first])) ++first;
  if (first == message.size()) return std::nullopt;
  rec.message = std::string(message);
  return rec;
}

RecordReader::RecordReader(std::istream& in, std::optional<std::string> source)
    : in_(in), source_(std::move(source)) {}

bool RecordReader::next_batch(std::vector<RawLogRecord>& out, std::size_t max_records) {
  out.clear();
  while (out.size() < max_records && std::getline(in_, line_)) {
    ++line_no_;
    if (auto rec = parse_record_line(line_, line_no_, source_)) out.push_back(std::move(*rec));
  }
  return !out.empty();
}

std::vector<RawLogRecord> read_records(std::istream& in) {
  std::vector<RawLogRecord> all;
  RecordReader reader(in);
  std::vector<RawLogRecord> batch;
  while (reader.next_batch(batch, 65536)) {
    for (auto& r : batch) all.push_back(std::move(r));
  }
  return all;
}

std::vector<RawLogRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::vector<RawLogRecord> all;
  RecordReader reader(in, path);
  std::vector<RawLogRecord> batch;
  while (reader.next_batch(batch, 65536)) {
    for (auto& r : batch) all.push_back(std::move(r));
  }
  return all;
}

std::vector<LogTemplate> read_templates(std::istream& in) {
  std::vector<LogTemplate> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(LogTemplate::parse(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, "templates line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LogTemplate> read_templates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open templates '" + path + "'");
  return read_templates(in);
}

void write_templates(std::ostream& out, const std::vector<LogTemplate>& templates) {
  for (const auto& t : templates) out << t.raw() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace logsift
