#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ugrid/types.hpp"

namespace ugrid {

// Stream identity of the generator; recorded in run metadata so regenerated
// fixtures stay stable across releases. Every event k draws from SplitMix64
// substreams keyed by (seed, k, purpose), so output is a pure function of
// the config for any thread count.
inline constexpr const char* kRngName = "splitmix64-streams/v1";

struct CategorySpec {
  CategoryId name;
  double weight = 1.0;                  // normalized across categories
  double seasonal_amplitude = 0.0;      // [0, 1]
  double seasonal_period_days = 365.0;  // rate = 1 + amplitude*sin(2*pi*day/period)
  // Multiplies the rate from the given week (relative to window start) on.
  std::optional<std::pair<std::int32_t, double>> level_shift;
};

struct HotspotSpec {
  double lat = 0.0;
  double lon = 0.0;
  double sigma_m = 1000.0;
  double weight = 1.0;
};

// With probability `strength`, an event of category_b reuses the location
// draw of a nearby-indexed category_a event, landing in the same cell. This
// plants cell-level co-occurrence between the two categories while leaving
// both marginal spatial profiles unchanged.
struct CouplingSpec {
  CategoryId category_a;
  CategoryId category_b;
  double strength = 0.0;  // [0, 1]
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_events = 0;
  TimeWindow window;
  double source_mix = 0.79;  // P(MobileDevice)
  std::vector<CategorySpec> categories;
  std::vector<HotspotSpec> hotspots;
  std::vector<CouplingSpec> couplings;
  double cell_size_m = 100.0;
  // Tangent-plane origin of the cell lattice.
  double center_lat = 31.2304;
  double center_lon = 121.4737;
};

// Throws DataError with a "config:" message on semantic problems
// (zero events, empty window, no categories, bad weights, unknown coupling
// category, ...).
GeneratorConfig generator_config_from_json(const nlohmann::json& j);
void validate(const GeneratorConfig& config);

// Emits exactly n_events records ordered by event index; category by weight,
// time by thinned seasonal rate, location by a Gaussian hotspot mixture
// snapped to the cell lattice. The result is already clean: every record
// lies inside the window with valid coordinates and a unique event_id.
EventDataset generate(const GeneratorConfig& config, int threads = 1);

}  // namespace ugrid
