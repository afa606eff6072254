#include "ugrid/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ugrid/csv.hpp"

#include <nlohmann/json.hpp>

namespace ugrid {

std::string_view to_string(RowErrorReason r) {
  switch (r) {
    case RowErrorReason::MalformedRow: return "MalformedRow";
    case RowErrorReason::BadTimestamp: return "BadTimestamp";
    case RowErrorReason::BadCoordinate: return "BadCoordinate";
    case RowErrorReason::DuplicateId: return "DuplicateId";
    case RowErrorReason::OutOfWindow: return "OutOfWindow";
    case RowErrorReason::MissingField: return "MissingField";
  }
  return "MalformedRow";
}

namespace {

constexpr std::size_t kNumColumns = 10;

const std::array<std::string_view, kNumColumns> kColumns = {
    "event_id", "cell_id",  "source",    "category", "reported_at",
    "resolved_at", "latitude", "longitude", "priority", "description"};

bool parse_double(std::string_view s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, std::int32_t& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

struct RowError {
  RowErrorReason reason;
  std::string detail;
};

// Validates one row's raw string fields and fills `rec`. Returns the first
// problem found, checking presence, then timestamps, then coordinates.
std::optional<RowError> build_record(const std::array<std::string_view, kNumColumns>& f,
                                     EventRecord& rec) {
  static constexpr std::size_t kRequired[] = {0, 1, 2, 3, 4, 6, 7};
  for (std::size_t idx : kRequired) {
    if (f[idx].empty())
      return RowError{RowErrorReason::MissingField, std::string(kColumns[idx]) + " is empty"};
  }

  const auto source = source_from_string(f[2]);
  if (!source)
    return RowError{RowErrorReason::MalformedRow, "unknown source '" + std::string(f[2]) + "'"};
  if (!valid_category(f[3]))
    return RowError{RowErrorReason::MissingField, "category is blank"};

  const auto reported = parse_iso8601(f[4]);
  if (!reported)
    return RowError{RowErrorReason::BadTimestamp, "reported_at '" + std::string(f[4]) + "'"};
  std::optional<UtcSeconds> resolved;
  if (!f[5].empty()) {
    resolved = parse_iso8601(f[5]);
    if (!resolved)
      return RowError{RowErrorReason::BadTimestamp, "resolved_at '" + std::string(f[5]) + "'"};
    if (*resolved < *reported)
      return RowError{RowErrorReason::BadTimestamp, "resolved_at precedes reported_at"};
  }

  double lat, lon;
  if (!parse_double(f[6], lat) || !valid_latitude(lat))
    return RowError{RowErrorReason::BadCoordinate, "latitude '" + std::string(f[6]) + "'"};
  if (!parse_double(f[7], lon) || !valid_longitude(lon))
    return RowError{RowErrorReason::BadCoordinate, "longitude '" + std::string(f[7]) + "'"};

  std::optional<std::int32_t> priority;
  if (!f[8].empty()) {
    std::int32_t p;
    if (!parse_int(f[8], p))
      return RowError{RowErrorReason::MalformedRow, "priority '" + std::string(f[8]) + "'"};
    priority = p;
  }

  rec.event_id = std::string(f[0]);
  rec.cell_id = std::string(f[1]);
  rec.source = *source;
  rec.category = std::string(f[3]);
  rec.reported_at = *reported;
  rec.resolved_at = resolved;
  rec.latitude = lat;
  rec.longitude = lon;
  rec.priority = priority;
  rec.description = std::string(f[9]);
  return std::nullopt;
}

ParseResult parse_csv(std::string_view text) {
  ParseResult out;
  CsvParser parser(text);
  CsvRow row;

  if (!parser.next(row)) throw IoError("csv: empty input, header row required");
  if (row.bad_quoting || row.fields.size() != kNumColumns)
    throw IoError("csv: malformed header row");
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (row.fields[i] != kColumns[i])
      throw IoError("csv: header column " + std::to_string(i + 1) + " is '" + row.fields[i] +
                    "', expected '" + std::string(kColumns[i]) + "'");
  }

  std::unordered_set<std::string> seen_ids;
  while (parser.next(row)) {
    if (row.bad_quoting) {
      out.errors.push_back({row.line, RowErrorReason::MalformedRow, "bad quoting"});
      continue;
    }
    if (row.fields.size() != kNumColumns) {
      out.errors.push_back({row.line, RowErrorReason::MalformedRow,
                            "expected 10 fields, got " + std::to_string(row.fields.size())});
      continue;
    }
    std::array<std::string_view, kNumColumns> f;
    for (std::size_t i = 0; i < kNumColumns; ++i) f[i] = row.fields[i];

    EventRecord rec;
    if (auto err = build_record(f, rec)) {
      out.errors.push_back({row.line, err->reason, std::move(err->detail)});
      continue;
    }
    if (!seen_ids.insert(rec.event_id).second) {
      out.errors.push_back({row.line, RowErrorReason::DuplicateId, rec.event_id});
      continue;
    }
    out.records.push_back(std::move(rec));
    out.lines.push_back(row.line);
  }
  return out;
}

ParseResult parse_jsonl(std::string_view text) {
  ParseResult out;
  std::unordered_set<std::string> seen_ids;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty()) continue;

    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      out.errors.push_back({line, RowErrorReason::MalformedRow, "not a JSON object"});
      continue;
    }
    std::array<std::string, kNumColumns> storage;
    std::array<std::string_view, kNumColumns> f;
    bool bad = false;
    for (std::size_t i = 0; i < kNumColumns; ++i) {
      const auto it = j.find(kColumns[i]);
      if (it == j.end() || it->is_null()) {
        storage[i].clear();
      } else if (it->is_string()) {
        storage[i] = it->get<std::string>();
      } else if (it->is_number()) {
        // numeric latitude/longitude/priority are accepted as-is
        storage[i] = it->is_number_integer()
                         ? std::to_string(it->get<std::int64_t>())
                         : fmt_double(it->get<double>());
      } else {
        out.errors.push_back({line, RowErrorReason::MalformedRow,
                              "field '" + std::string(kColumns[i]) + "' has unsupported type"});
        bad = true;
        break;
      }
      f[i] = storage[i];
    }
    if (bad) continue;

    EventRecord rec;
    if (auto err = build_record(f, rec)) {
      out.errors.push_back({line, err->reason, std::move(err->detail)});
      continue;
    }
    if (!seen_ids.insert(rec.event_id).second) {
      out.errors.push_back({line, RowErrorReason::DuplicateId, rec.event_id});
      continue;
    }
    out.records.push_back(std::move(rec));
    out.lines.push_back(line);
  }
  return out;
}

}  // namespace

ParseResult parse_events(std::string_view text, InputFormat format) {
  return format == InputFormat::Csv ? parse_csv(text) : parse_jsonl(text);
}

ParseResult parse_events(std::istream& in, InputFormat format) {
  if (!in) throw IoError("unreadable input stream");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading input stream");
  const std::string text = std::move(buf).str();
  return parse_events(text, format);
}

EventDataset clean(std::vector<EventRecord> records, TimeWindow window,
                   std::vector<RawRecordError>* rejects,
                   const std::vector<std::size_t>* record_lines) {
  if (!window.valid()) throw DataError("clean: window start must precede end");

  EventDataset ds;
  ds.window = window;
  ds.records.reserve(records.size());

  std::unordered_set<std::string_view> seen_ids;
  seen_ids.reserve(records.size() * 2);

  const auto reject = [&](std::size_t i, RowErrorReason reason, std::string detail) {
    ++ds.rejected_count;
    if (rejects) {
      const std::size_t line = record_lines ? (*record_lines)[i] : i + 1;
      rejects->push_back({line, reason, std::move(detail)});
    }
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    EventRecord& r = records[i];
    if (r.event_id.empty() || r.cell_id.empty() || !valid_category(r.category)) {
      reject(i, RowErrorReason::MissingField, "event_id/cell_id/category required");
      continue;
    }
    if (!valid_latitude(r.latitude) || !valid_longitude(r.longitude)) {
      reject(i, RowErrorReason::BadCoordinate, r.event_id);
      continue;
    }
    if (r.resolved_at && *r.resolved_at < r.reported_at) {
      reject(i, RowErrorReason::BadTimestamp, r.event_id + ": resolved_at precedes reported_at");
      continue;
    }
    if (!window.contains(r.reported_at)) {
      reject(i, RowErrorReason::OutOfWindow, r.event_id);
      continue;
    }
    if (seen_ids.count(r.event_id)) {
      reject(i, RowErrorReason::DuplicateId, r.event_id);
      continue;
    }
    // ds.records is reserved to full size, so views into its elements stay valid
    ds.records.push_back(std::move(r));
    seen_ids.insert(ds.records.back().event_id);
  }

  // Cell centroids: mean of member-event coordinates.
  struct Acc {
    double lat_sum = 0, lon_sum = 0;
    std::size_t n = 0;
  };
  std::unordered_map<std::string_view, Acc> acc;
  acc.reserve(1024);
  for (const EventRecord& r : ds.records) {
    Acc& a = acc[r.cell_id];
    a.lat_sum += r.latitude;
    a.lon_sum += r.longitude;
    ++a.n;
  }
  ds.cells.reserve(acc.size());
  for (const auto& [id, a] : acc)
    ds.cells.push_back({std::string(id), a.lat_sum / a.n, a.lon_sum / a.n});
  std::sort(ds.cells.begin(), ds.cells.end(),
            [](const GridCell& a, const GridCell& b) { return a.cell_id < b.cell_id; });
  return ds;
}

SourceCategorySummary summarize(const EventDataset& dataset) {
  SourceCategorySummary s;
  s.total = dataset.records.size();

  std::map<std::pair<SourceChannel, std::string_view>, std::uint64_t> counts;
  for (const EventRecord& r : dataset.records) ++counts[{r.source, r.category}];

  s.rows.reserve(counts.size());
  for (const auto& [key, n] : counts) {
    SourceCategorySummary::Row row;
    row.source = key.first;
    row.category = std::string(key.second);
    row.count = n;
    row.percent_of_total = 100.0 * static_cast<double>(n) / static_cast<double>(s.total);
    s.rows.push_back(std::move(row));
  }
  std::sort(s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.count != b.count) return a.count > b.count;
    return a.category < b.category;
  });
  return s;
}

}  // namespace ugrid
