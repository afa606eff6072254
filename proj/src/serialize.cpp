#include "ugrid/serialize.hpp"

#include <cstdio>

#include "ugrid/csv.hpp"

namespace ugrid {

namespace {
constexpr double kTenKmUnit = 10000.0;
}

std::string dataset_to_csv(std::span<const EventRecord> records) {
  std::string out;
  out.reserve(64 + records.size() * 96);
  out += kCanonicalHeader;
  out.push_back('\n');
  std::vector<std::string> f(10);
  for (const EventRecord& r : records) {
    f[0] = r.event_id;
    f[1] = r.cell_id;
    f[2] = std::string(to_string(r.source));
    f[3] = r.category;
    f[4] = format_iso8601(r.reported_at);
    f[5] = r.resolved_at ? format_iso8601(*r.resolved_at) : std::string();
    f[6] = fmt_double(r.latitude);
    f[7] = fmt_double(r.longitude);
    f[8] = r.priority ? std::to_string(*r.priority) : std::string();
    f[9] = r.description;
    append_csv_row(out, f);
  }
  return out;
}

std::string cells_to_csv(std::span<const GridCell> cells) {
  std::string out = "cell_id,centroid_lat,centroid_lon\n";
  std::vector<std::string> f(3);
  for (const GridCell& c : cells) {
    f[0] = c.cell_id;
    f[1] = fmt_double(c.centroid_lat);
    f[2] = fmt_double(c.centroid_lon);
    append_csv_row(out, f);
  }
  return out;
}

std::string rejects_to_csv(std::span<const RawRecordError> errors) {
  std::string out = "line_number,reason,detail\n";
  std::vector<std::string> f(3);
  for (const RawRecordError& e : errors) {
    f[0] = std::to_string(e.line_number);
    f[1] = std::string(to_string(e.reason));
    f[2] = e.detail;
    append_csv_row(out, f);
  }
  return out;
}

std::string summary_to_csv(const SourceCategorySummary& s) {
  std::string out = "source,category,count,percent\n";
  std::vector<std::string> f(4);
  for (const auto& row : s.rows) {
    f[0] = std::string(to_string(row.source));
    f[1] = row.category;
    f[2] = std::to_string(row.count);
    f[3] = fmt_fixed1(row.percent_of_total);
    append_csv_row(out, f);
  }
  return out;
}

nlohmann::json summary_to_json(const SourceCategorySummary& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : s.rows) {
    rows.push_back({{"source", to_string(row.source)},
                    {"category", row.category},
                    {"count", row.count},
                    {"percent", std::stod(fmt_fixed1(row.percent_of_total))}});
  }
  return {{"total", s.total}, {"rows", std::move(rows)}};
}

std::string summary_to_text(const SourceCategorySummary& s) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %-44s %10s %8s\n", "source", "category", "count", "%");
  out += line;
  for (const auto& row : s.rows) {
    std::snprintf(line, sizeof line, "%-14s %-44s %10llu %8s\n",
                  std::string(to_string(row.source)).c_str(), row.category.c_str(),
                  static_cast<unsigned long long>(row.count),
                  fmt_fixed1(row.percent_of_total).c_str());
    out += line;
  }
  std::snprintf(line, sizeof line, "%-14s %-44s %10llu %8s\n", "total", "",
                static_cast<unsigned long long>(s.total), s.total ? "100.0" : "0.0");
  out += line;
  return out;
}

std::string trend_to_csv(const TrendSeries& t) {
  std::string out = "bin,value\n";
  std::vector<std::string> f(2);
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    f[0] = std::to_string(k);
    f[1] = std::to_string(t.values[k]);
    append_csv_row(out, f);
  }
  return out;
}

nlohmann::json trend_to_json(const TrendSeries& t) {
  return {{"origin", format_iso8601(t.grid.origin)},
          {"bin_width", to_string(t.grid.width)},
          {"bin_count", t.grid.bin_count},
          {"category", t.category ? nlohmann::json(*t.category) : nlohmann::json(nullptr)},
          {"values", t.values}};
}

std::string density_to_csv(const DensityGrid& g) {
  std::string out = "x,y,value\n";
  std::vector<std::string> f(3);
  for (std::int32_t iy = 0; iy < g.ny; ++iy) {
    for (std::int32_t ix = 0; ix < g.nx; ++ix) {
      f[0] = std::to_string(ix);
      f[1] = std::to_string(iy);
      f[2] = fmt_double(g.at(ix, iy));
      append_csv_row(out, f);
    }
  }
  return out;
}

nlohmann::json density_to_json(const DensityGrid& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::int32_t iy = 0; iy < g.ny; ++iy) {
    nlohmann::json row = nlohmann::json::array();
    for (std::int32_t ix = 0; ix < g.nx; ++ix) row.push_back(g.at(ix, iy));
    rows.push_back(std::move(row));
  }
  return {{"nx", g.nx},
          {"ny", g.ny},
          {"degenerate", g.degenerate},
          {"bounds",
           {{"min_lon", g.min_lon},
            {"max_lon", g.max_lon},
            {"min_lat", g.min_lat},
            {"max_lat", g.max_lat}}},
          {"values", std::move(rows)}};
}

std::string curve_to_csv(const RelevanceCurve& c) {
  const bool spatial = c.axis == CurveAxis::DistanceMeters;
  std::string out = spatial ? "distance_m,distance_10km,score,support\n"
                            : "lag_days,score,support\n";
  std::vector<std::string> f;
  for (const CurvePoint& p : c.points) {
    f.clear();
    f.push_back(fmt_double(p.coordinate));
    if (spatial) f.push_back(fmt_double(p.coordinate / kTenKmUnit));
    f.push_back(p.missing() ? "null" : fmt_double(p.score));
    f.push_back(std::to_string(p.support));
    append_csv_row(out, f);
  }
  return out;
}

nlohmann::json curve_to_json(const RelevanceCurve& c) {
  const bool spatial = c.axis == CurveAxis::DistanceMeters;
  nlohmann::json points = nlohmann::json::array();
  for (const CurvePoint& p : c.points) {
    nlohmann::json jp = {{"coordinate", p.coordinate},
                         {"score", p.missing() ? nlohmann::json(nullptr) : nlohmann::json(p.score)},
                         {"support", p.support}};
    if (spatial) jp["distance_10km"] = p.coordinate / kTenKmUnit;
    points.push_back(std::move(jp));
  }
  return {{"axis", spatial ? "distance-meters" : "lag-days"},
          {"normalized", c.normalized},
          {"points", std::move(points)}};
}

std::string matrix_to_csv(const RelevanceMatrix& m) {
  std::string out = "row_category,col_category,nmi\n";
  std::vector<std::string> f(3);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      f[0] = m.rows[i];
      f[1] = m.cols[j];
      f[2] = fmt_double(m.at(i, j));
      append_csv_row(out, f);
    }
  }
  return out;
}

nlohmann::json matrix_to_json(const RelevanceMatrix& m) {
  nlohmann::json scores = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols.size(); ++j) row.push_back(m.at(i, j));
    scores.push_back(std::move(row));
  }
  return {{"mode", to_string(m.mode)},
          {"rows", m.rows},
          {"cols", m.cols},
          {"row_degenerate", m.row_degenerate},
          {"col_degenerate", m.col_degenerate},
          {"scores", std::move(scores)}};
}

}  // namespace ugrid
