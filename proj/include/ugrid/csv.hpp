#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ugrid {

// One parsed row. `line` is the 1-based physical line the row started on
// (quoted fields may span lines). `bad_quoting` marks RFC 4180 violations:
// a stray quote inside an unquoted field, garbage after a closing quote, or
// EOF inside a quoted field.
struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
  bool bad_quoting = false;
};

// Single-pass RFC 4180 reader over an in-memory buffer. Separator is ','.
// Accepts LF and CRLF row ends. Empty physical lines are skipped.
class CsvParser {
 public:
  explicit CsvParser(std::string_view data) : data_(data) {}

  // Fills `row` (fields are reused across calls). Returns false at end.
  bool next(CsvRow& row);

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

void append_csv_row(std::string& out, const std::vector<std::string>& fields);

// Shortest round-trip decimal form of a double.
std::string fmt_double(double v);

// Half-up rounding to one decimal, e.g. 78.95 -> "79.0".
std::string fmt_fixed1(double v);

}  // namespace ugrid
