#pragma once

#include <cstdint>
#include <vector>

#include "ugrid/field.hpp"

namespace ugrid {

// Relevance scores against lag or distance. A point with support == 0 is
// missing: no term contributed there and the score is meaningless (it is
// serialized as null, never as 0).
enum class CurveAxis : std::uint8_t { LagDays, DistanceMeters };

struct CurvePoint {
  double coordinate = 0.0;  // lag in days, or distance-bin midpoint in meters
  double score = 0.0;
  std::uint64_t support = 0;  // contributing (cell,t) or (pair,t) terms

  bool missing() const { return support == 0; }
};

struct RelevanceCurve {
  CurveAxis axis = CurveAxis::LagDays;
  std::vector<CurvePoint> points;
  bool normalized = false;
};

struct CellStats {
  GridCell cell;
  double mean = 0.0;  // events per bin
};

CellStats cell_mean(const SpatioTemporalField& field, std::size_t cell_index);

// Mean over the overlap window t in [tau, T) of
// (Y(t) - mu)(Y(t - tau) - mu), with mu the full-row mean. tau = 0 gives the
// population variance of the row. Throws std::out_of_range when tau >= T.
double temporal_self_relevance(const SpatioTemporalField& field, std::size_t cell_index,
                               std::int32_t tau);

// Mean-weighted average of per-cell self-relevance:
//   C(tau) = sum_i mu_i * C_i(tau) / sum_i mu_i
// Cells with mu = 0 contribute nothing. With `normalize` the curve is divided
// by its tau = 0 value, so it starts at exactly 1; zero-variance cells are
// excluded from the normalized curve and contribute zero terms to the
// unnormalized one.
RelevanceCurve global_temporal_relevance(const SpatioTemporalField& field, std::int32_t max_lag,
                                         bool normalize, int threads = 1);

// Mean over all T bins of (Y_i(t) - mu_i)(Y_j(t) - mu_j); symmetric in i, j.
double pair_spatial_relevance(const SpatioTemporalField& field, std::size_t i, std::size_t j);

struct DistanceBin {
  double lower = 0.0;
  double upper = 0.0;
  double representative = 0.0;  // midpoint
};

// Contiguous fixed-width bins [k*w, (k+1)*w) covering [0, max_distance).
std::vector<DistanceBin> make_distance_bins(double bin_width_m, double max_distance_m);

// Per distance bin, the mu_i*mu_j-weighted average of pair relevance over all
// unordered pairs of distinct cells whose great-circle distance lands in the
// bin. With `normalize`, scores are divided by the mu-weighted average cell
// variance, so co-located identical cells score exactly 1; zero-variance
// cells are excluded from the normalized curve.
RelevanceCurve global_spatial_relevance(const SpatioTemporalField& field, double bin_width_m,
                                        double max_distance_m, bool normalize, int threads = 1);

}  // namespace ugrid
