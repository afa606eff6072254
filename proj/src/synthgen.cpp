#include "ugrid/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "ugrid/geo.hpp"
#include "ugrid/ingest.hpp"
#include "ugrid/parallel.hpp"

namespace ugrid {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
  }
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0, 1)
};

enum Purpose : std::uint64_t {
  kCategoryDraw = 1,
  kSourceDraw = 2,
  kTimeDraw = 3,
  kLocationDraw = 4,
  kCouplingDraw = 5,
};

SplitMix64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose) {
  return SplitMix64{mix64(mix64(mix64(seed + 1) ^ index) ^ (purpose * 0x9E3779B97F4A7C15ULL))};
}

std::size_t pick_weighted(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto k = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(k, cumulative.size() - 1);
}

struct Lattice {
  LocalFrame frame;
  double cell_m = 100.0;

  void snap(double x, double y, std::int64_t& ix, std::int64_t& iy) const {
    ix = static_cast<std::int64_t>(std::floor(x / cell_m));
    iy = static_cast<std::int64_t>(std::floor(y / cell_m));
  }
  void cell_center(std::int64_t ix, std::int64_t iy, double& lat, double& lon) const {
    frame.to_latlon((static_cast<double>(ix) + 0.5) * cell_m,
                    (static_cast<double>(iy) + 0.5) * cell_m, lat, lon);
  }
};

struct Plan {
  const GeneratorConfig* cfg = nullptr;
  Lattice lattice;
  std::vector<double> cat_cumulative;
  std::vector<double> hot_cumulative;
  std::vector<double> hot_x, hot_y;  // hotspot centers in lattice meters
  std::vector<double> rate_max;      // per category
  // coupling lookup: for category index b, the coupling that redirects it
  std::vector<std::int32_t> coupling_of;  // -1 = none
  std::vector<std::size_t> partner_cat;   // per coupling, index of category_a
  std::vector<double> strength;
};

std::size_t category_of(const Plan& p, std::uint64_t seed, std::uint64_t k) {
  SplitMix64 g = substream(seed, k, kCategoryDraw);
  return pick_weighted(p.cat_cumulative, g.next_unit());
}

// Raw location draw of event k: hotspot pick plus Gaussian offset,
// snapped to the lattice.
void location_of(const Plan& p, std::uint64_t seed, std::uint64_t k, std::int64_t& ix,
                 std::int64_t& iy) {
  SplitMix64 g = substream(seed, k, kLocationDraw);
  const std::size_t h = pick_weighted(p.hot_cumulative, g.next_unit());
  const double u1 = 1.0 - g.next_unit();  // (0, 1]
  const double u2 = g.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double sigma = p.cfg->hotspots[h].sigma_m;
  const double x = p.hot_x[h] + sigma * r * std::cos(kTwoPi * u2);
  const double y = p.hot_y[h] + sigma * r * std::sin(kTwoPi * u2);
  p.lattice.snap(x, y, ix, iy);
}

double rate_at(const CategorySpec& c, double day, double shift_day) {
  double rate = 1.0 + c.seasonal_amplitude * std::sin(kTwoPi * day / c.seasonal_period_days);
  if (c.level_shift && day >= shift_day) rate *= c.level_shift->second;
  return rate;
}

}  // namespace

void validate(const GeneratorConfig& c) {
  if (c.n_events == 0) throw DataError("config: n_events must be positive");
  if (!c.window.valid()) throw DataError("config: window start must precede end");
  if (c.categories.empty()) throw DataError("config: at least one category required");
  if (c.hotspots.empty()) throw DataError("config: at least one hotspot required");
  if (c.source_mix < 0.0 || c.source_mix > 1.0)
    throw DataError("config: source_mix must be in [0, 1]");
  if (!(c.cell_size_m > 0.0)) throw DataError("config: cell_size_m must be > 0");
  if (!valid_latitude(c.center_lat) || !valid_longitude(c.center_lon))
    throw DataError("config: center coordinates out of range");

  double wsum = 0.0;
  for (const CategorySpec& cat : c.categories) {
    if (!valid_category(cat.name)) throw DataError("config: blank category name");
    if (!(cat.weight > 0.0)) throw DataError("config: category weight must be > 0");
    if (cat.seasonal_amplitude < 0.0 || cat.seasonal_amplitude > 1.0)
      throw DataError("config: seasonal_amplitude must be in [0, 1]");
    if (!(cat.seasonal_period_days > 0.0))
      throw DataError("config: seasonal_period_days must be > 0");
    if (cat.level_shift) {
      if (cat.level_shift->first < 0) throw DataError("config: level_shift week must be >= 0");
      if (!(cat.level_shift->second > 0.0))
        throw DataError("config: level_shift factor must be > 0");
    }
    wsum += cat.weight;
  }
  if (!(wsum > 0.0)) throw DataError("config: category weights must sum to > 0");

  double hsum = 0.0;
  for (const HotspotSpec& h : c.hotspots) {
    if (!valid_latitude(h.lat) || !valid_longitude(h.lon))
      throw DataError("config: hotspot coordinates out of range");
    if (!(h.sigma_m > 0.0)) throw DataError("config: hotspot sigma must be > 0");
    if (h.weight < 0.0) throw DataError("config: hotspot weight must be >= 0");
    hsum += h.weight;
  }
  if (!(hsum > 0.0)) throw DataError("config: hotspot weights must sum to > 0");

  const auto cat_index = [&](const CategoryId& name) {
    for (std::size_t i = 0; i < c.categories.size(); ++i)
      if (c.categories[i].name == name) return i;
    throw DataError("config: coupling references unknown category '" + name + "'");
  };
  for (const CouplingSpec& cp : c.couplings) {
    cat_index(cp.category_a);
    cat_index(cp.category_b);
    if (cp.category_a == cp.category_b)
      throw DataError("config: coupling must join two distinct categories");
    if (cp.strength < 0.0 || cp.strength > 1.0)
      throw DataError("config: coupling strength must be in [0, 1]");
  }
}

EventDataset generate(const GeneratorConfig& config, int threads) {
  validate(config);

  Plan p;
  p.cfg = &config;
  p.lattice.frame = {config.center_lat, config.center_lon};
  p.lattice.cell_m = config.cell_size_m;

  double acc = 0.0;
  for (const CategorySpec& c : config.categories) acc += c.weight;
  const double wnorm = acc;
  acc = 0.0;
  for (const CategorySpec& c : config.categories) {
    acc += c.weight / wnorm;
    p.cat_cumulative.push_back(acc);
  }
  acc = 0.0;
  for (const HotspotSpec& h : config.hotspots) acc += h.weight;
  const double hnorm = acc;
  acc = 0.0;
  for (const HotspotSpec& h : config.hotspots) {
    acc += h.weight / hnorm;
    p.hot_cumulative.push_back(acc);
    double x, y;
    p.lattice.frame.to_meters(h.lat, h.lon, x, y);
    p.hot_x.push_back(x);
    p.hot_y.push_back(y);
  }
  for (const CategorySpec& c : config.categories) {
    const double shift = c.level_shift ? std::max(1.0, c.level_shift->second) : 1.0;
    p.rate_max.push_back((1.0 + c.seasonal_amplitude) * shift);
  }
  p.coupling_of.assign(config.categories.size(), -1);
  const auto cat_index = [&](const CategoryId& name) {
    for (std::size_t i = 0; i < config.categories.size(); ++i)
      if (config.categories[i].name == name) return i;
    return config.categories.size();
  };
  for (std::size_t q = 0; q < config.couplings.size(); ++q) {
    const CouplingSpec& cp = config.couplings[q];
    const std::size_t b = cat_index(cp.category_b);
    if (p.coupling_of[b] < 0) p.coupling_of[b] = static_cast<std::int32_t>(q);
    p.partner_cat.push_back(cat_index(cp.category_a));
    p.strength.push_back(cp.strength);
  }

  const std::uint64_t seed = config.seed;
  const double span = static_cast<double>(config.window.span_seconds());
  const double shift_week_to_day = 7.0;

  std::vector<EventRecord> records(config.n_events);
  parallel_for(config.n_events, threads, [&](std::size_t k) {
    EventRecord& r = records[k];
    const std::size_t ci = category_of(p, seed, k);
    const CategorySpec& cat = config.categories[ci];

    // demographics
    SplitMix64 gs = substream(seed, k, kSourceDraw);
    r.source = gs.next_unit() < config.source_mix ? SourceChannel::MobileDevice
                                                  : SourceChannel::Hotline;
    const bool has_priority = gs.next_unit() < 0.5;
    const double up = gs.next_unit();
    if (has_priority) r.priority = 1 + static_cast<std::int32_t>(up * 5.0);
    const bool has_resolved = gs.next_unit() < 0.7;
    const double ur = gs.next_unit();

    // reported_at: thinned draw against the category's seasonal rate
    SplitMix64 gt = substream(seed, k, kTimeDraw);
    const double shift_day =
        cat.level_shift ? static_cast<double>(cat.level_shift->first) * shift_week_to_day : 0.0;
    std::int64_t offset = 0;
    for (int attempt = 0; attempt < 4096; ++attempt) {
      const double u = gt.next_unit();
      offset = static_cast<std::int64_t>(u * span);
      const double day = static_cast<double>(offset) / static_cast<double>(kSecondsPerDay);
      if (gt.next_unit() * p.rate_max[ci] <= rate_at(cat, day, shift_day)) break;
    }
    r.reported_at = config.window.start + offset;
    if (has_resolved)
      r.resolved_at = r.reported_at + 3600 +
                      static_cast<std::int64_t>(ur * (14.0 * kSecondsPerDay - 3600.0));

    // location: own draw, or a coupled partner's draw
    std::int64_t ix = 0, iy = 0;
    bool copied = false;
    const std::int32_t q = p.coupling_of[ci];
    if (q >= 0) {
      SplitMix64 gc = substream(seed, k, kCouplingDraw);
      if (gc.next_unit() < p.strength[static_cast<std::size_t>(q)]) {
        const std::size_t want = p.partner_cat[static_cast<std::size_t>(q)];
        const std::uint64_t lookback = std::min<std::uint64_t>(k, 4096);
        for (std::uint64_t back = 1; back <= lookback; ++back) {
          const std::uint64_t partner = k - back;
          if (category_of(p, seed, partner) == want) {
            location_of(p, seed, partner, ix, iy);
            copied = true;
            break;
          }
        }
      }
    }
    if (!copied) location_of(p, seed, k, ix, iy);

    p.lattice.cell_center(ix, iy, r.latitude, r.longitude);
    char buf[48];
    std::snprintf(buf, sizeof buf, "c%lld_%lld", static_cast<long long>(ix),
                  static_cast<long long>(iy));
    r.cell_id = buf;
    std::snprintf(buf, sizeof buf, "ev%08llu", static_cast<unsigned long long>(k));
    r.event_id = buf;
    r.category = cat.name;
  });

  EventDataset ds = clean(std::move(records), config.window);
  return ds;
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw DataError(std::string("config: missing or non-numeric '") + key + "'");
  return it->get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw DataError(std::string("config: missing or non-string '") + key + "'");
  return it->get<std::string>();
}

UtcSeconds require_timestamp(const nlohmann::json& j, const char* key) {
  const auto ts = parse_iso8601(require_string(j, key));
  if (!ts) throw DataError(std::string("config: bad timestamp in '") + key + "'");
  return *ts;
}

}  // namespace

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("config: root must be a JSON object");
  GeneratorConfig c;
  c.seed = static_cast<std::uint64_t>(require_number(j, "seed"));
  const double n = require_number(j, "n_events");
  if (n < 0 || n != std::floor(n)) throw DataError("config: n_events must be a non-negative integer");
  c.n_events = static_cast<std::uint64_t>(n);

  const auto wit = j.find("window");
  if (wit == j.end() || !wit->is_object())
    throw DataError("config: missing 'window' object");
  c.window.start = require_timestamp(*wit, "start");
  c.window.end = require_timestamp(*wit, "end");

  if (j.contains("source_mix")) c.source_mix = require_number(j, "source_mix");
  if (j.contains("cell_size_m")) c.cell_size_m = require_number(j, "cell_size_m");
  if (j.contains("center")) {
    const auto& ce = j.at("center");
    c.center_lat = require_number(ce, "lat");
    c.center_lon = require_number(ce, "lon");
  }

  const auto cit = j.find("categories");
  if (cit == j.end() || !cit->is_array())
    throw DataError("config: missing 'categories' array");
  for (const auto& cj : *cit) {
    CategorySpec cs;
    cs.name = require_string(cj, "name");
    cs.weight = require_number(cj, "weight");
    if (cj.contains("seasonal_amplitude")) cs.seasonal_amplitude = require_number(cj, "seasonal_amplitude");
    if (cj.contains("seasonal_period_days")) cs.seasonal_period_days = require_number(cj, "seasonal_period_days");
    if (cj.contains("level_shift")) {
      const auto& ls = cj.at("level_shift");
      cs.level_shift = {static_cast<std::int32_t>(require_number(ls, "week")),
                        require_number(ls, "factor")};
    }
    c.categories.push_back(std::move(cs));
  }

  const auto hit = j.find("hotspots");
  if (hit == j.end() || !hit->is_array())
    throw DataError("config: missing 'hotspots' array");
  for (const auto& hj : *hit) {
    HotspotSpec hs;
    hs.lat = require_number(hj, "lat");
    hs.lon = require_number(hj, "lon");
    hs.sigma_m = require_number(hj, "sigma_m");
    if (hj.contains("weight")) hs.weight = require_number(hj, "weight");
    c.hotspots.push_back(hs);
  }

  if (j.contains("couplings")) {
    for (const auto& qj : j.at("couplings")) {
      CouplingSpec cp;
      cp.category_a = require_string(qj, "category_a");
      cp.category_b = require_string(qj, "category_b");
      cp.strength = require_number(qj, "strength");
      c.couplings.push_back(std::move(cp));
    }
  }

  validate(c);
  return c;
}

}  // namespace ugrid
