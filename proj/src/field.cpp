#include "ugrid/field.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace ugrid {

std::uint64_t SpatioTemporalField::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

SpatioTemporalField build_field(const EventDataset& dataset, BinWidth bin,
                                std::optional<std::vector<CategoryId>> categories,
                                std::optional<SourceChannel> source) {
  if (!dataset.window.valid()) throw DataError("build_field: dataset window is empty");

  SpatioTemporalField f;
  f.grid = TimeGrid::covering(dataset.window, bin);
  f.cells = dataset.cells;
  f.category_filter = std::move(categories);
  f.source_filter = source;
  f.counts.assign(f.cells.size() * static_cast<std::size_t>(f.grid.bin_count), 0);

  std::unordered_map<std::string_view, std::size_t> cell_of;
  cell_of.reserve(f.cells.size() * 2);
  for (std::size_t i = 0; i < f.cells.size(); ++i) cell_of.emplace(f.cells[i].cell_id, i);

  std::unordered_set<std::string_view> wanted;
  if (f.category_filter)
    for (const CategoryId& c : *f.category_filter) wanted.insert(c);

  const std::size_t stride = static_cast<std::size_t>(f.grid.bin_count);
  for (const EventRecord& r : dataset.records) {
    if (f.source_filter && r.source != *f.source_filter) continue;
    if (f.category_filter && !wanted.count(r.category)) continue;
    const std::size_t ci = cell_of.at(r.cell_id);
    const std::int32_t k = f.grid.bin_index(r.reported_at);
    ++f.counts[ci * stride + static_cast<std::size_t>(k)];
  }
  return f;
}

TrendSeries weekly_histogram(const EventDataset& dataset, std::optional<CategoryId> category) {
  TrendSeries t;
  t.grid = TimeGrid::covering(dataset.window, BinWidth::Week);
  t.values.assign(static_cast<std::size_t>(t.grid.bin_count), 0);
  t.category = std::move(category);
  for (const EventRecord& r : dataset.records) {
    if (t.category && r.category != *t.category) continue;
    ++t.values[static_cast<std::size_t>(t.grid.bin_index(r.reported_at))];
  }
  return t;
}

DensityGrid spatial_density(const EventDataset& dataset, const std::optional<CategoryId>& category,
                            std::int32_t nx, std::int32_t ny) {
  if (nx < 1 || ny < 1) throw DataError("spatial_density: resolution must be >= 1x1");

  DensityGrid g;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);

  const auto passes = [&](const EventRecord& r) { return !category || r.category == *category; };

  bool any = false;
  for (const EventRecord& r : dataset.records) {
    if (!passes(r)) continue;
    if (!any) {
      g.min_lon = g.max_lon = r.longitude;
      g.min_lat = g.max_lat = r.latitude;
      any = true;
    } else {
      g.min_lon = std::min(g.min_lon, r.longitude);
      g.max_lon = std::max(g.max_lon, r.longitude);
      g.min_lat = std::min(g.min_lat, r.latitude);
      g.max_lat = std::max(g.max_lat, r.latitude);
    }
  }
  if (!any) {
    g.degenerate = true;
    return g;
  }

  const double lon_span = g.max_lon - g.min_lon;
  const double lat_span = g.max_lat - g.min_lat;
  const auto bin_of = [](double v, double lo, double span, std::int32_t n) {
    if (span <= 0.0) return std::int32_t{0};
    auto k = static_cast<std::int32_t>((v - lo) / span * n);
    return std::clamp(k, 0, n - 1);  // closed top edge
  };

  std::vector<std::uint64_t> hist(g.values.size(), 0);
  for (const EventRecord& r : dataset.records) {
    if (!passes(r)) continue;
    const std::int32_t ix = bin_of(r.longitude, g.min_lon, lon_span, nx);
    const std::int32_t iy = bin_of(r.latitude, g.min_lat, lat_span, ny);
    ++hist[static_cast<std::size_t>(iy) * nx + ix];
  }
  const std::uint64_t peak = *std::max_element(hist.begin(), hist.end());
  for (std::size_t i = 0; i < hist.size(); ++i)
    g.values[i] = static_cast<double>(hist[i]) / static_cast<double>(peak);
  return g;
}

}  // namespace ugrid
