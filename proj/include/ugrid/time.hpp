#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ugrid {

// Seconds since the Unix epoch, always UTC. Binning and window arithmetic
// happen in this scale so results do not depend on the host timezone.
using UtcSeconds = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kSecondsPerWeek = 7 * kSecondsPerDay;

// Strict ISO 8601: "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM".
// Anything else (missing offset, fractional seconds, bad calendar date)
// returns nullopt.
std::optional<UtcSeconds> parse_iso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(UtcSeconds t);

// Half-open interval [start, end).
struct TimeWindow {
  UtcSeconds start = 0;
  UtcSeconds end = 0;

  bool contains(UtcSeconds t) const { return t >= start && t < end; }
  std::int64_t span_seconds() const { return end - start; }
  bool valid() const { return start < end; }
};

enum class BinWidth : std::uint8_t { Day, Week };

std::int64_t bin_width_seconds(BinWidth w);
std::string_view to_string(BinWidth w);

// Contiguous half-open bins [origin + k*w, origin + (k+1)*w), k in [0, bin_count).
struct TimeGrid {
  UtcSeconds origin = 0;
  BinWidth width = BinWidth::Day;
  std::int32_t bin_count = 0;

  // Smallest grid whose bins cover the whole window (last bin may overhang).
  static TimeGrid covering(TimeWindow window, BinWidth w);

  std::int64_t width_seconds() const { return bin_width_seconds(width); }
  UtcSeconds bin_start(std::int32_t k) const { return origin + k * width_seconds(); }

  // Precondition: origin <= t < origin + bin_count * width.
  std::int32_t bin_index(UtcSeconds t) const {
    return static_cast<std::int32_t>((t - origin) / width_seconds());
  }
};

}  // namespace ugrid
