#include "ugrid/geo.hpp"

#include <cmath>

namespace ugrid {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double p1 = lat1 * kDegToRad;
  const double p2 = lat2 * kDegToRad;
  const double dp = (lat2 - lat1) * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double sp = std::sin(dp / 2);
  const double sl = std::sin(dl / 2);
  const double a = sp * sp + std::cos(p1) * std::cos(p2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, a)));
}

double cell_distance(const GridCell& a, const GridCell& b) {
  if (a.centroid_lat == b.centroid_lat && a.centroid_lon == b.centroid_lon) return 0.0;
  return haversine_m(a.centroid_lat, a.centroid_lon, b.centroid_lat, b.centroid_lon);
}

void LocalFrame::to_meters(double lat, double lon, double& x, double& y) const {
  x = (lon - ref_lon) * kDegToRad * kEarthRadiusM * std::cos(ref_lat * kDegToRad);
  y = (lat - ref_lat) * kDegToRad * kEarthRadiusM;
}

void LocalFrame::to_latlon(double x, double y, double& lat, double& lon) const {
  lat = ref_lat + y / (kEarthRadiusM * kDegToRad);
  lon = ref_lon + x / (kEarthRadiusM * std::cos(ref_lat * kDegToRad) * kDegToRad);
}

}  // namespace ugrid
