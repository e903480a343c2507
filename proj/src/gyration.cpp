#include "lifeprof/gyration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lifeprof {

double radius_of_gyration(std::span<const PlanarPoint> points) {
  // Welford update of the centroid and the summed squared deviation.
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2 = 0.0;
  double n = 0.0;
  for (const PlanarPoint& p : points) {
    n += 1.0;
    const double dx = p.x - mean_x;
    const double dy = p.y - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2 += dx * (p.x - mean_x) + dy * (p.y - mean_y);
  }
  if (n == 0.0) {
    return 0.0;
  }
  return std::sqrt(std::max(0.0, m2 / n));
}

double radius_of_gyration_km(const CleanTrajectory& trajectory, const LocalProjection& projection) {
  std::vector<PlanarPoint> km;
  km.reserve(trajectory.points.size());
  for (const auto& p : trajectory.points) {
    const PlanarPoint m = projection.to_plane(p.cell.center());
    km.push_back({m.x / 1000.0, m.y / 1000.0});
  }
  return radius_of_gyration(km);
}

}  // namespace lifeprof
