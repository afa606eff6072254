#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ugrid/types.hpp"

namespace ugrid {

// Per-cell event counts on a uniform time grid. Rows follow the dataset's
// cell order (sorted by cell_id) and include cells whose filtered count is
// zero, so cell geometry is stable across filters.
struct SpatioTemporalField {
  TimeGrid grid;
  std::vector<GridCell> cells;
  std::vector<std::uint32_t> counts;  // row-major [cell][bin]
  std::optional<std::vector<CategoryId>> category_filter;
  std::optional<SourceChannel> source_filter;

  std::size_t n_cells() const { return cells.size(); }
  std::int32_t n_bins() const { return grid.bin_count; }
  std::span<const std::uint32_t> row(std::size_t cell) const {
    return {counts.data() + cell * static_cast<std::size_t>(grid.bin_count),
            static_cast<std::size_t>(grid.bin_count)};
  }
  std::uint64_t total() const;
};

SpatioTemporalField build_field(const EventDataset& dataset, BinWidth bin,
                                std::optional<std::vector<CategoryId>> categories = std::nullopt,
                                std::optional<SourceChannel> source = std::nullopt);

struct TrendSeries {
  TimeGrid grid;  // weekly
  std::vector<std::uint64_t> values;
  std::optional<CategoryId> category;  // nullopt = all categories
};

TrendSeries weekly_histogram(const EventDataset& dataset,
                             std::optional<CategoryId> category = std::nullopt);

// Max-normalized 2-D spatial histogram over the min-max bounds of the
// contributing events; the densest bin is exactly 1. Events on the max edge
// fall into the last bin.
struct DensityGrid {
  std::int32_t nx = 0, ny = 0;
  std::vector<double> values;  // row-major [iy][ix]
  double min_lon = 0, max_lon = 0, min_lat = 0, max_lat = 0;
  bool degenerate = false;  // no contributing events; values all zero

  double at(std::int32_t ix, std::int32_t iy) const {
    return values[static_cast<std::size_t>(iy) * nx + ix];
  }
};

DensityGrid spatial_density(const EventDataset& dataset,
                            const std::optional<CategoryId>& category, std::int32_t nx,
                            std::int32_t ny);

}  // namespace ugrid
