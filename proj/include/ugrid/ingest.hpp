#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ugrid/types.hpp"

namespace ugrid {

enum class RowErrorReason : std::uint8_t {
  MalformedRow,
  BadTimestamp,
  BadCoordinate,
  DuplicateId,
  OutOfWindow,
  MissingField,
};

std::string_view to_string(RowErrorReason r);

struct RawRecordError {
  std::size_t line_number = 0;  // 1-based input line; record ordinal if no file context
  RowErrorReason reason = RowErrorReason::MalformedRow;
  std::string detail;
};

enum class InputFormat : std::uint8_t { Csv, JsonLines };

// Canonical column order of the delimited-text schema. JSON-lines uses the
// same names as object keys. Timestamps are ISO 8601 with explicit offset;
// an empty string means an absent optional.
inline constexpr const char* kCanonicalHeader =
    "event_id,cell_id,source,category,reported_at,resolved_at,latitude,longitude,"
    "priority,description";

struct ParseResult {
  std::vector<EventRecord> records;
  std::vector<std::size_t> lines;  // lines[i] = input line of records[i]
  std::vector<RawRecordError> errors;
};

// Every data row ends up either in `records` or as exactly one error, in
// input order. Duplicate event_id: first occurrence wins, later ones error.
// Unreadable input (or a missing/bad CSV header) throws IoError; row-level
// problems never throw.
ParseResult parse_events(std::string_view text, InputFormat format);
ParseResult parse_events(std::istream& in, InputFormat format);

// Retains records with valid fields, reported_at inside `window`, and unique
// event_id; derives one GridCell per distinct cell_id with the centroid at
// the mean of member-event coordinates. Drops are counted in rejected_count
// and, when `rejects` is given, reported one error per dropped record
// (line numbers taken from `record_lines` when provided).
EventDataset clean(std::vector<EventRecord> records, TimeWindow window,
                   std::vector<RawRecordError>* rejects = nullptr,
                   const std::vector<std::size_t>* record_lines = nullptr);

struct SourceCategorySummary {
  struct Row {
    SourceChannel source = SourceChannel::MobileDevice;
    CategoryId category;
    std::uint64_t count = 0;
    double percent_of_total = 0.0;  // exact; reports round half-up to one decimal
  };
  std::vector<Row> rows;  // sorted by source, then count desc, then category
  std::uint64_t total = 0;
};

SourceCategorySummary summarize(const EventDataset& dataset);

}  // namespace ugrid
