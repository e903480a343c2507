#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lifeprof/geo.hpp"
#include "lifeprof/ingest.hpp"

namespace lifeprof {

/// A tagged place. A non-empty polygon makes it an area of interest (AOI);
/// the ring is stored without repeating the first vertex.
struct PoiRecord {
  std::string tag;
  double lon = 0.0;
  double lat = 0.0;
  std::vector<GeoPoint> polygon;

  bool is_aoi() const noexcept { return !polygon.empty(); }
};

/// Parses `tag,lon,lat[,wkt_polygon]` rows. The polygon is a WKT
/// `POLYGON((lon lat, ...))` taking the rest of the line, optionally quoted.
std::vector<PoiRecord> parse_pois(std::istream& in, const FormatDescriptor& format = {});

void write_pois(std::ostream& out, const std::vector<PoiRecord>& pois, const FormatDescriptor& format = {});

/// Parses a single WKT polygon's outer ring. Throws Error when malformed,
/// with fewer than 3 distinct vertices, or self-intersecting.
std::vector<GeoPoint> parse_wkt_polygon(std::string_view wkt);
std::string to_wkt(const std::vector<GeoPoint>& ring);

bool is_simple_ring(const std::vector<GeoPoint>& ring);
bool ring_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p);

/// Unsigned planar area of a ring, in the projection's square meters.
double ring_area_m2(const std::vector<GeoPoint>& ring, const LocalProjection& projection);

}  // namespace lifeprof
