#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ugrid/time.hpp"

namespace ugrid {

// Content-level failure: the input was readable but cannot support the
// requested computation (empty table, missing source channel, bad config).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stream/file-level failure: could not read or write bytes at all.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SourceChannel : std::uint8_t { MobileDevice, Hotline };

std::string_view to_string(SourceChannel s);
std::optional<SourceChannel> source_from_string(std::string_view s);

// Case-sensitive category name; open set, taken verbatim from the data.
using CategoryId = std::string;

bool valid_category(std::string_view name);
bool valid_latitude(double lat);
bool valid_longitude(double lon);

struct EventRecord {
  std::string event_id;
  std::string cell_id;
  UtcSeconds reported_at = 0;
  std::optional<UtcSeconds> resolved_at;
  double latitude = 0.0;
  double longitude = 0.0;
  SourceChannel source = SourceChannel::MobileDevice;
  CategoryId category;
  std::optional<std::int32_t> priority;
  std::string description;
};

struct GridCell {
  std::string cell_id;
  double centroid_lat = 0.0;
  double centroid_lon = 0.0;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Cleaned, immutable-by-convention event collection. `cells` is sorted by
// cell_id and holds exactly the distinct cell ids referenced by `records`.
struct EventDataset {
  std::vector<EventRecord> records;
  std::vector<GridCell> cells;
  TimeWindow window;
  std::size_t rejected_count = 0;

  std::size_t cell_index(std::string_view cell_id) const;
};

}  // namespace ugrid
