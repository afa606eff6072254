#include "ugrid/relevance.hpp"

#include <cmath>
#include <stdexcept>

#include "ugrid/geo.hpp"
#include "ugrid/parallel.hpp"

namespace ugrid {

namespace {

std::uint64_t row_sum(std::span<const std::uint32_t> row) {
  std::uint64_t s = 0;
  for (std::uint32_t v : row) s += v;
  return s;
}

// Mean of (X(t) - mu_x)(Y(t) - mu_y) given the exact integer raw-product sum
// and the exact per-series sums over the n overlapped bins:
//   sum (X-mu_x)(Y-mu_y) = dot - mu_x*sum_y - mu_y*sum_x + n*mu_x*mu_y
// Only the final few operations round, and the expression is commutative in
// (x, y), so swapping the series gives bit-identical results.
double centered_product_mean(std::uint64_t dot, std::uint64_t sum_x, std::uint64_t sum_y,
                             std::size_t n, double mu_x, double mu_y) {
  const double cross = mu_x * static_cast<double>(sum_y) + mu_y * static_cast<double>(sum_x);
  return (static_cast<double>(dot) - cross) / static_cast<double>(n) + mu_x * mu_y;
}

double lagged_covariance(std::span<const std::uint32_t> row, std::int32_t tau, double mu) {
  const std::size_t T = row.size();
  const std::size_t u = static_cast<std::size_t>(tau);
  const std::size_t n = T - u;
  std::uint64_t dot = 0, late = 0, early = 0;
  for (std::size_t t = u; t < T; ++t) dot += static_cast<std::uint64_t>(row[t]) * row[t - u];
  for (std::size_t t = u; t < T; ++t) late += row[t];
  for (std::size_t t = 0; t < n; ++t) early += row[t];
  return centered_product_mean(dot, late, early, n, mu, mu);
}

double cell_variance(const SpatioTemporalField& f, std::size_t i, double mu) {
  return lagged_covariance(f.row(i), 0, mu);
}

}  // namespace

CellStats cell_mean(const SpatioTemporalField& field, std::size_t cell_index) {
  if (cell_index >= field.n_cells()) throw std::out_of_range("cell_mean: bad cell index");
  const auto row = field.row(cell_index);
  CellStats s;
  s.cell = field.cells[cell_index];
  s.mean = row.empty() ? 0.0
                       : static_cast<double>(row_sum(row)) / static_cast<double>(row.size());
  return s;
}

double temporal_self_relevance(const SpatioTemporalField& field, std::size_t cell_index,
                               std::int32_t tau) {
  if (cell_index >= field.n_cells()) throw std::out_of_range("temporal_self_relevance: bad cell");
  if (tau < 0 || tau >= field.n_bins())
    throw std::out_of_range("temporal_self_relevance: lag outside [0, bin_count)");
  const auto row = field.row(cell_index);
  const double mu = static_cast<double>(row_sum(row)) / static_cast<double>(row.size());
  return lagged_covariance(row, tau, mu);
}

RelevanceCurve global_temporal_relevance(const SpatioTemporalField& field, std::int32_t max_lag,
                                         bool normalize, int threads) {
  const std::int32_t T = field.n_bins();
  if (max_lag < 0 || max_lag >= T)
    throw std::out_of_range("global_temporal_relevance: max_lag must be < bin_count");

  const std::size_t n = field.n_cells();
  const std::size_t nlags = static_cast<std::size_t>(max_lag) + 1;
  const double day_per_bin =
      static_cast<double>(field.grid.width_seconds()) / static_cast<double>(kSecondsPerDay);

  // Per-cell contributions are computed independently and folded in cell
  // order, so any thread count produces identical sums.
  std::vector<double> mu(n), contrib(n * nlags);
  std::vector<std::uint8_t> included(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto row = field.row(i);
    mu[i] = static_cast<double>(row_sum(row)) / static_cast<double>(T);
    bool in = mu[i] > 0.0;
    if (in && normalize && cell_variance(field, i, mu[i]) <= 0.0) in = false;
    included[i] = in ? 1 : 0;
    if (!in) return;
    for (std::size_t u = 0; u < nlags; ++u)
      contrib[i * nlags + u] = mu[i] * lagged_covariance(row, static_cast<std::int32_t>(u), mu[i]);
  });

  std::vector<double> num(nlags, 0.0);
  std::vector<std::uint64_t> support(nlags, 0);
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!included[i]) continue;
    den += mu[i];
    for (std::size_t u = 0; u < nlags; ++u) {
      num[u] += contrib[i * nlags + u];
      support[u] += static_cast<std::uint64_t>(T) - u;
    }
  }

  RelevanceCurve curve;
  curve.axis = CurveAxis::LagDays;
  curve.normalized = normalize;
  curve.points.resize(nlags);
  const bool degenerate = den <= 0.0 || (normalize && num[0] <= 0.0);
  for (std::size_t u = 0; u < nlags; ++u) {
    CurvePoint& p = curve.points[u];
    p.coordinate = static_cast<double>(u) * day_per_bin;
    if (degenerate) {
      p.support = 0;
      continue;
    }
    p.support = support[u];
    const double raw = num[u] / den;
    p.score = normalize ? raw / (num[0] / den) : raw;
  }
  return curve;
}

double pair_spatial_relevance(const SpatioTemporalField& field, std::size_t i, std::size_t j) {
  if (i >= field.n_cells() || j >= field.n_cells())
    throw std::out_of_range("pair_spatial_relevance: bad cell index");
  const auto a = field.row(i);
  const auto b = field.row(j);
  const std::size_t T = a.size();
  if (T == 0) return 0.0;
  std::uint64_t dot = 0;
  for (std::size_t t = 0; t < T; ++t) dot += static_cast<std::uint64_t>(a[t]) * b[t];
  const std::uint64_t sa = row_sum(a);
  const std::uint64_t sb = row_sum(b);
  const double tt = static_cast<double>(T);
  return centered_product_mean(dot, sa, sb, T, static_cast<double>(sa) / tt,
                               static_cast<double>(sb) / tt);
}

std::vector<DistanceBin> make_distance_bins(double bin_width_m, double max_distance_m) {
  if (!(bin_width_m > 0.0)) throw std::invalid_argument("distance bin width must be > 0");
  if (!(max_distance_m > 0.0)) throw std::invalid_argument("max distance must be > 0");
  const auto nbins = static_cast<std::size_t>(std::ceil(max_distance_m / bin_width_m));
  std::vector<DistanceBin> bins(nbins);
  for (std::size_t k = 0; k < nbins; ++k) {
    bins[k].lower = static_cast<double>(k) * bin_width_m;
    bins[k].upper = static_cast<double>(k + 1) * bin_width_m;
    bins[k].representative = (static_cast<double>(k) + 0.5) * bin_width_m;
  }
  return bins;
}

RelevanceCurve global_spatial_relevance(const SpatioTemporalField& field, double bin_width_m,
                                        double max_distance_m, bool normalize, int threads) {
  const auto bins = make_distance_bins(bin_width_m, max_distance_m);
  const std::size_t nbins = bins.size();
  const std::size_t n = field.n_cells();
  const std::int32_t T = field.n_bins();
  const double tt = static_cast<double>(T);

  std::vector<std::uint64_t> rs(n);
  std::vector<double> mu(n), var(n);
  std::vector<std::uint8_t> included(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = field.row(i);
    rs[i] = row_sum(row);
    mu[i] = T > 0 ? static_cast<double>(rs[i]) / tt : 0.0;
    var[i] = T > 0 ? cell_variance(field, i, mu[i]) : 0.0;
    included[i] = (mu[i] > 0.0 && (!normalize || var[i] > 0.0)) ? 1 : 0;
  }

  // mu-weighted average cell variance; the normalization anchor.
  double norm = 1.0;
  if (normalize) {
    double vs = 0.0, ws = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!included[i]) continue;
      vs += mu[i] * var[i];
      ws += mu[i];
    }
    norm = ws > 0.0 ? vs / ws : 0.0;
  }

  std::vector<double> lat_rad(n), cos_lat(n), lon_rad(n);
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  for (std::size_t i = 0; i < n; ++i) {
    lat_rad[i] = field.cells[i].centroid_lat * kDegToRad;
    cos_lat[i] = std::cos(lat_rad[i]);
    lon_rad[i] = field.cells[i].centroid_lon * kDegToRad;
  }

  // Each row i owns the pairs (i, j > i). Row partials are folded in row
  // order afterwards, so sums do not depend on the thread count.
  struct BinAcc {
    double num = 0.0, den = 0.0;
    std::uint64_t pairs = 0;
  };
  std::vector<BinAcc> partial(n * nbins);
  parallel_for(n, threads, [&](std::size_t i) {
    if (!included[i]) return;
    const auto row_i = field.row(i);
    BinAcc* mine = partial.data() + i * nbins;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!included[j]) continue;
      const double sp = std::sin((lat_rad[j] - lat_rad[i]) / 2);
      const double sl = std::sin((lon_rad[j] - lon_rad[i]) / 2);
      const double h = sp * sp + cos_lat[i] * cos_lat[j] * sl * sl;
      const double d = 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
      if (d >= max_distance_m) continue;
      const auto k = static_cast<std::size_t>(d / bin_width_m);
      if (k >= nbins) continue;
      const auto row_j = field.row(j);
      std::uint64_t dot = 0;
      for (std::int32_t t = 0; t < T; ++t)
        dot += static_cast<std::uint64_t>(row_i[t]) * row_j[t];
      const double c = centered_product_mean(dot, rs[i], rs[j], static_cast<std::size_t>(T),
                                             mu[i], mu[j]);
      const double w = mu[i] * mu[j];
      mine[k].num += w * c;
      mine[k].den += w;
      mine[k].pairs += 1;
    }
  });

  std::vector<BinAcc> total(nbins);
  for (std::size_t i = 0; i < n; ++i) {
    const BinAcc* mine = partial.data() + i * nbins;
    for (std::size_t k = 0; k < nbins; ++k) {
      total[k].num += mine[k].num;
      total[k].den += mine[k].den;
      total[k].pairs += mine[k].pairs;
    }
  }

  RelevanceCurve curve;
  curve.axis = CurveAxis::DistanceMeters;
  curve.normalized = normalize;
  curve.points.resize(nbins);
  const bool no_norm = normalize && norm <= 0.0;
  for (std::size_t k = 0; k < nbins; ++k) {
    CurvePoint& p = curve.points[k];
    p.coordinate = bins[k].representative;
    if (no_norm || total[k].den <= 0.0) {
      p.support = 0;
      continue;
    }
    p.support = total[k].pairs * static_cast<std::uint64_t>(T);
    const double raw = total[k].num / total[k].den;
    p.score = normalize ? raw / norm : raw;
  }
  return curve;
}

}  // namespace ugrid
