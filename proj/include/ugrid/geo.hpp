#pragma once

#include "ugrid/types.hpp"

namespace ugrid {

// Mean Earth radius; city-scale spherical error is negligible next to the
// cell size.
inline constexpr double kEarthRadiusM = 6371000.0;

// Great-circle (haversine) distance in meters between WGS84 coordinates.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

double cell_distance(const GridCell& a, const GridCell& b);

// Equirectangular tangent-plane frame around a reference point: x east,
// y north, both in meters. Only meant for city-scale offsets.
struct LocalFrame {
  double ref_lat = 0.0;
  double ref_lon = 0.0;

  void to_meters(double lat, double lon, double& x, double& y) const;
  void to_latlon(double x, double y, double& lat, double& lon) const;
};

}  // namespace ugrid
