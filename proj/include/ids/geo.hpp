#pragma once

#include <cmath>

namespace ids {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }

// Equirectangular approximation; adequate at city scale.
inline double distance_m(double lon1, double lat1, double lon2, double lat2) {
    double mean_lat = deg2rad(0.5 * (lat1 + lat2));
    double x = deg2rad(lon2 - lon1) * std::cos(mean_lat);
    double y = deg2rad(lat2 - lat1);
    return kEarthRadiusM * std::sqrt(x * x + y * y);
}

inline double meters_per_deg_lat() { return kEarthRadiusM * kPi / 180.0; }

inline double meters_per_deg_lon(double lat_deg) { return meters_per_deg_lat() * std::cos(deg2rad(lat_deg)); }

}  // namespace ids
