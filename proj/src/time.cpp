#include "ugrid/time.hpp"

#include <array>
#include <cstdio>

namespace ugrid {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = static_cast<int>(y - era * 400);
  const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int doe = static_cast<int>(z - era * 146097);
  const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = yoe + era * 400;
  const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = yy + (m <= 2);
}

int days_in_month(std::int64_t y, int m) {
  static constexpr std::array<int, 12> k = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return k[m - 1];
}

bool read_digits(std::string_view s, std::size_t pos, int n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (int i = 0; i < n; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<UtcSeconds> parse_iso8601(std::string_view s) {
  int year, mon, day, hh, mm, ss;
  if (!read_digits(s, 0, 4, year)) return std::nullopt;
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':')
    return std::nullopt;
  if (!read_digits(s, 5, 2, mon) || !read_digits(s, 8, 2, day) || !read_digits(s, 11, 2, hh) ||
      !read_digits(s, 14, 2, mm) || !read_digits(s, 17, 2, ss))
    return std::nullopt;
  if (mon < 1 || mon > 12 || day < 1 || day > days_in_month(year, mon)) return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;

  std::int64_t offset = 0;
  if (s.size() == 20 && s[19] == 'Z') {
    offset = 0;
  } else if (s.size() == 25 && (s[19] == '+' || s[19] == '-') && s[22] == ':') {
    int oh, om;
    if (!read_digits(s, 20, 2, oh) || !read_digits(s, 23, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset = 3600 * oh + 60 * om;
    if (s[19] == '-') offset = -offset;
  } else {
    return std::nullopt;
  }

  const std::int64_t days = days_from_civil(year, mon, day);
  return days * kSecondsPerDay + 3600 * hh + 60 * mm + ss - offset;
}

std::string format_iso8601(UtcSeconds t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t sod = t % kSecondsPerDay;
  if (sod < 0) {
    sod += kSecondsPerDay;
    days -= 1;
  }
  std::int64_t y;
  int m, d;
  civil_from_days(days, y, m, d);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04lld-%02d-%02dT%02d:%02d:%02dZ",
                static_cast<long long>(y), m, d, static_cast<int>(sod / 3600),
                static_cast<int>(sod % 3600 / 60), static_cast<int>(sod % 60));
  return buf;
}

std::int64_t bin_width_seconds(BinWidth w) {
  return w == BinWidth::Day ? kSecondsPerDay : kSecondsPerWeek;
}

std::string_view to_string(BinWidth w) { return w == BinWidth::Day ? "day" : "week"; }

TimeGrid TimeGrid::covering(TimeWindow window, BinWidth w) {
  const std::int64_t ws = bin_width_seconds(w);
  const std::int64_t span = window.span_seconds();
  TimeGrid g;
  g.origin = window.start;
  g.width = w;
  g.bin_count = static_cast<std::int32_t>((span + ws - 1) / ws);
  return g;
}

}  // namespace ugrid
