#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logsift/core.hpp"

namespace logsift {

/// "1700000000.25" -> 1700000000250000000. Up to nine fractional digits.
std::optional<std::int64_t> parse_epoch_ns(std::string_view text);

/// Inverse of parse_epoch_ns with trailing fractional zeros removed.
std::string format_epoch(std::int64_t ns);

/// One input line -> record. Recognizes an optional
/// `epoch_seconds<TAB>host<TAB>` prefix. Blank lines yield nullopt.
std::optional<RawLogRecord> parse_record_line(std::string_view line, std::uint64_t line_no,
                                              const std::optional<std::string>& source = std::nullopt);

/// Streams records from a text stream in bounded batches.
class RecordReader {
 public:
  RecordReader(std::istream& in, std::optional<std::string> source = std::nullopt);

  /// Clears `out` and fills it with up to `max_records` records; false at EOF
  /// with nothing read.
  bool next_batch(std::vector<RawLogRecord>& out, std::size_t max_records);

 private:
  std::istream& in_;
  std::optional<std::string> source_;
  std::uint64_t line_no_ = 0;
  std::string line_;
};

std::vector<RawLogRecord> read_records(const std::string& path);
std::vector<RawLogRecord> read_records(std::istream& in);

/// Templates file: one template per line, `#` comments, blank lines ignored.
/// A malformed line throws Error{Parse} naming the line.
std::vector<LogTemplate> read_templates(std::istream& in);
std::vector<LogTemplate> read_templates(const std::string& path);

void write_templates(std::ostream& out, const std::vector<LogTemplate>& templates);

std::string read_file(const std::string& path);

}  // namespace logsift
