#include "lifeprof/poi.hpp"

#include <algorithm>
#include <cmath>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

namespace {

double cross(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) && std::min(a.lat, b.lat) <= p.lat &&
         p.lat <= std::max(a.lat, b.lat);
}

bool segments_intersect(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) || (d3 == 0 && on_segment(a, b, c)) ||
         (d4 == 0 && on_segment(a, b, d));
}

bool same_point(const GeoPoint& a, const GeoPoint& b) { return a.lon == b.lon && a.lat == b.lat; }

}  // namespace

bool is_simple_ring(const std::vector<GeoPoint>& ring) {
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (same_point(ring[i], ring[j])) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) {
        return false;
      }
    }
  }
  // all-collinear rings are degenerate
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % n];
    twice_area += a.lon * b.lat - b.lon * a.lat;
  }
  return twice_area != 0.0;
}

bool ring_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) {
        inside = !inside;
      }
    }
  }
  return inside;
}

double ring_area_m2(const std::vector<GeoPoint>& ring, const LocalProjection& projection) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint a = projection.to_plane(ring[i]);
    const PlanarPoint b = projection.to_plane(ring[(i + 1) % n]);
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

std::vector<GeoPoint> parse_wkt_polygon(std::string_view wkt) {
  wkt = trim(wkt);
  if (wkt.size() >= 2 && wkt.front() == '"' && wkt.back() == '"') {
    wkt = trim(wkt.substr(1, wkt.size() - 2));
  }
  constexpr std::string_view kPrefix = "POLYGON";
  if (!wkt.starts_with(kPrefix)) {
    throw Error("polygon must start with POLYGON");
  }
  wkt = trim(wkt.substr(kPrefix.size()));
  if (!wkt.starts_with("((") || !wkt.ends_with("))")) {
    throw Error("polygon ring must be enclosed in '((' and '))'");
  }
  const std::string_view body = wkt.substr(2, wkt.size() - 4);
  if (body.find_first_of("()") != std::string_view::npos) {
    throw Error("only single-ring polygons are supported");
  }
  std::vector<GeoPoint> ring;
  for (std::string_view vertex : split(body, ',')) {
    vertex = trim(vertex);
    const auto space = vertex.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw Error("polygon vertex needs 'lon lat'");
    }
    GeoPoint p;
    if (!parse_double(vertex.substr(0, space), p.lon) || !parse_double(vertex.substr(space + 1), p.lat)) {
      throw Error("invalid polygon vertex '" + std::string(vertex) + "'");
    }
    ring.push_back(p);
  }
  if (ring.size() >= 2 && same_point(ring.front(), ring.back())) {
    ring.pop_back();
  }
  if (!is_simple_ring(ring)) {
    throw Error("polygon must be a simple ring with at least 3 vertices");
  }
  return ring;
}

std::string to_wkt(const std::vector<GeoPoint>& ring) {
  std::string s = "POLYGON((";
  for (std::size_t i = 0; i <= ring.size(); ++i) {
    const GeoPoint& p = ring[i % ring.size()];
    if (i > 0) {
      s += ", ";
    }
    s += format_double(p.lon) + " " + format_double(p.lat);
  }
  s += "))";
  return s;
}

std::vector<PoiRecord> parse_pois(std::istream& in, const FormatDescriptor& format) {
  std::vector<PoiRecord> pois;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if ((line_no == 1 && format.has_header) || trim(line).empty()) {
      continue;
    }
    // The optional fourth field is everything after the third delimiter: WKT
    // uses commas internally.
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    bool has_polygon = false;
    while (fields.size() < 3) {
      const auto pos = rest.find(format.delimiter);
      if (pos == std::string_view::npos) {
        fields.push_back(rest);
        break;
      }
      fields.push_back(rest.substr(0, pos));
      rest = rest.substr(pos + 1);
      has_polygon = fields.size() == 3;
    }
    if (has_polygon) {
      fields.push_back(rest);
    }
    if (fields.size() < 3) {
      throw ParseError(line_no, "expected tag, lon, lat[, polygon]");
    }
    PoiRecord poi;
    poi.tag = std::string(trim(fields[0]));
    if (poi.tag.empty()) {
      throw ParseError(line_no, "empty tag");
    }
    if (!parse_double(fields[1], poi.lon) || poi.lon < -180.0 || poi.lon > 180.0) {
      throw ParseError(line_no, "invalid longitude '" + std::string(fields[1]) + "'");
    }
    if (!parse_double(fields[2], poi.lat) || poi.lat < -90.0 || poi.lat > 90.0) {
      throw ParseError(line_no, "invalid latitude '" + std::string(fields[2]) + "'");
    }
    if (fields.size() == 4 && !trim(fields[3]).empty()) {
      try {
        poi.polygon = parse_wkt_polygon(fields[3]);
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    }
    pois.push_back(std::move(poi));
  }
  return pois;
}

void write_pois(std::ostream& out, const std::vector<PoiRecord>& pois, const FormatDescriptor& format) {
  const char d = format.delimiter;
  if (format.has_header) {
    out << "tag" << d << "lon" << d << "lat" << d << "polygon\n";
  }
  for (const auto& poi : pois) {
    out << poi.tag << d << format_double(poi.lon) << d << format_double(poi.lat);
    if (poi.is_aoi()) {
      out << d << '"' << to_wkt(poi.polygon) << '"';
    }
    out << '\n';
  }
}

}  // namespace lifeprof
