#pragma once

#include <compare>
#include <cstdint>

namespace lifeprof {

inline constexpr double kEarthRadiusM = 6371008.8;

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar coordinates in meters, east (x) and north (y) of a reference point.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// Equirectangular projection about a fixed reference point. Accurate to well
/// under a meter per kilometer at city scale.
class LocalProjection {
 public:
  LocalProjection() : LocalProjection(GeoPoint{}) {}
  explicit LocalProjection(GeoPoint reference);

  PlanarPoint to_plane(const GeoPoint& p) const {
    return {(p.lon - reference_.lon) * m_per_deg_lon_, (p.lat - reference_.lat) * m_per_deg_lat_};
  }
  GeoPoint to_geo(const PlanarPoint& p) const {
    return {reference_.lon + p.x / m_per_deg_lon_, reference_.lat + p.y / m_per_deg_lat_};
  }

  const GeoPoint& reference() const noexcept { return reference_; }
  double meters_per_degree_lon() const noexcept { return m_per_deg_lon_; }
  double meters_per_degree_lat() const noexcept { return m_per_deg_lat_; }

 private:
  GeoPoint reference_;
  double m_per_deg_lon_;
  double m_per_deg_lat_;
};

/// A cell of the anonymization grid. Identity is (ix, iy); the center is
/// carried along so downstream code never needs the grid to locate a cell.
struct GridCell {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  double center_lon = 0.0;
  double center_lat = 0.0;

  GeoPoint center() const { return {center_lon, center_lat}; }

  friend bool operator==(const GridCell& a, const GridCell& b) { return a.ix == b.ix && a.iy == b.iy; }
  friend auto operator<=>(const GridCell& a, const GridCell& b) {
    if (auto c = a.ix <=> b.ix; c != 0) {
      return c;
    }
    return a.iy <=> b.iy;
  }
};

class Grid {
 public:
  Grid(GeoPoint reference, double cell_size_m);

  GridCell snap(const GeoPoint& p) const;
  GridCell cell(std::int64_t ix, std::int64_t iy) const;

  double cell_size_m() const noexcept { return cell_size_m_; }
  const LocalProjection& projection() const noexcept { return projection_; }

 private:
  LocalProjection projection_;
  double cell_size_m_;
};

}  // namespace lifeprof
