#include "lifeprof/geo.hpp"

#include <cmath>
#include <numbers>

#include "lifeprof/error.hpp"

namespace lifeprof {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = phi2 - phi1;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s = std::sin(dphi / 2.0);
  const double t = std::sin(dlambda / 2.0);
  const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

LocalProjection::LocalProjection(GeoPoint reference)
    : reference_(reference),
      m_per_deg_lon_(kEarthRadiusM * kDegToRad * std::cos(reference.lat * kDegToRad)),
      m_per_deg_lat_(kEarthRadiusM * kDegToRad) {
  if (!(m_per_deg_lon_ > 0.0)) {
    throw Error("projection reference latitude must be inside (-90, 90)");
  }
}

Grid::Grid(GeoPoint reference, double cell_size_m) : projection_(reference), cell_size_m_(cell_size_m) {
  if (!(cell_size_m > 0.0)) {
    throw Error("grid size must be positive");
  }
}

GridCell Grid::snap(const GeoPoint& p) const {
  const PlanarPoint xy = projection_.to_plane(p);
  return cell(static_cast<std::int64_t>(std::floor(xy.x / cell_size_m_)),
              static_cast<std::int64_t>(std::floor(xy.y / cell_size_m_)));
}

GridCell Grid::cell(std::int64_t ix, std::int64_t iy) const {
  const PlanarPoint center{(static_cast<double>(ix) + 0.5) * cell_size_m_,
                           (static_cast<double>(iy) + 0.5) * cell_size_m_};
  const GeoPoint g = projection_.to_geo(center);
  return {ix, iy, g.lon, g.lat};
}

}  // namespace lifeprof
