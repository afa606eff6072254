#include "ugrid/types.hpp"

#include <algorithm>

namespace ugrid {

std::string_view to_string(SourceChannel s) {
  return s == SourceChannel::MobileDevice ? "MobileDevice" : "Hotline";
}

std::optional<SourceChannel> source_from_string(std::string_view s) {
  if (s == "MobileDevice") return SourceChannel::MobileDevice;
  if (s == "Hotline") return SourceChannel::Hotline;
  return std::nullopt;
}

bool valid_category(std::string_view name) {
  return std::any_of(name.begin(), name.end(),
                     [](unsigned char c) { return !std::isspace(c); });
}

bool valid_latitude(double lat) { return lat >= -90.0 && lat <= 90.0; }
bool valid_longitude(double lon) { return lon >= -180.0 && lon <= 180.0; }

std::size_t EventDataset::cell_index(std::string_view cell_id) const {
  auto it = std::lower_bound(cells.begin(), cells.end(), cell_id,
                             [](const GridCell& c, std::string_view id) { return c.cell_id < id; });
  if (it == cells.end() || it->cell_id != cell_id) return npos;
  return static_cast<std::size_t>(it - cells.begin());
}

}  // namespace ugrid
