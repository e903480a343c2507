#pragma once

#include <span>

#include "lifeprof/geo.hpp"
#include "lifeprof/ingest.hpp"

namespace lifeprof {

/// Root-mean-square distance of the points from their centroid, in the units
/// of the input. Empty input yields 0.
double radius_of_gyration(std::span<const PlanarPoint> points);

/// Radius of gyration of a trajectory's records in kilometers, measured in
/// the planar frame of `projection`.
double radius_of_gyration_km(const CleanTrajectory& trajectory, const LocalProjection& projection);

}  // namespace lifeprof
