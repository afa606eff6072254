#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "ugrid/category_mi.hpp"
#include "ugrid/field.hpp"
#include "ugrid/ingest.hpp"
#include "ugrid/relevance.hpp"

namespace ugrid {

// Canonical delimited-text schema; inverse of parse_events(Csv).
std::string dataset_to_csv(std::span<const EventRecord> records);

std::string cells_to_csv(std::span<const GridCell> cells);
std::string rejects_to_csv(std::span<const RawRecordError> errors);

std::string summary_to_csv(const SourceCategorySummary& s);
nlohmann::json summary_to_json(const SourceCategorySummary& s);
// Human-readable table, percentages rounded half-up to one decimal.
std::string summary_to_text(const SourceCategorySummary& s);

std::string trend_to_csv(const TrendSeries& t);
nlohmann::json trend_to_json(const TrendSeries& t);

std::string density_to_csv(const DensityGrid& g);
nlohmann::json density_to_json(const DensityGrid& g);

// Curves carry (coordinate, score, support); missing points serialize their
// score as an explicit null, never 0. Spatial curves also report the
// coordinate in the 10 km unit used for plotting.
std::string curve_to_csv(const RelevanceCurve& c);
nlohmann::json curve_to_json(const RelevanceCurve& c);

std::string matrix_to_csv(const RelevanceMatrix& m);
nlohmann::json matrix_to_json(const RelevanceMatrix& m);

}  // namespace ugrid
