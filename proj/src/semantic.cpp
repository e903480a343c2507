#include "lifeprof/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

PoiIndex::PoiIndex(std::vector<PoiRecord> pois, const LocalProjection& projection, double search_radius_m)
    : pois_(std::move(pois)),
      projection_(projection),
      radius_m_(search_radius_m),
      bucket_m_(std::max(search_radius_m, 50.0)) {
  for (std::size_t i = 0; i < pois_.size(); ++i) {
    const PoiRecord& poi = pois_[i];
    if (poi.is_aoi()) {
      Area a{i, ring_area_m2(poi.polygon, projection_), 180.0, 90.0, -180.0, -90.0};
      for (const auto& v : poi.polygon) {
        a.min_lon = std::min(a.min_lon, v.lon);
        a.min_lat = std::min(a.min_lat, v.lat);
        a.max_lon = std::max(a.max_lon, v.lon);
        a.max_lat = std::max(a.max_lat, v.lat);
      }
      areas_.push_back(a);
    } else {
      points_.push_back(i);
      buckets_[bucket_of({poi.lon, poi.lat})].push_back(i);
    }
  }
  std::sort(areas_.begin(), areas_.end(), [this](const Area& a, const Area& b) {
    return a.area_m2 != b.area_m2 ? a.area_m2 < b.area_m2 : pois_[a.poi].tag < pois_[b.poi].tag;
  });
}

PoiIndex::BucketKey PoiIndex::bucket_of(const GeoPoint& p) const {
  const PlanarPoint xy = projection_.to_plane(p);
  return {static_cast<std::int64_t>(std::floor(xy.x / bucket_m_)),
          static_cast<std::int64_t>(std::floor(xy.y / bucket_m_))};
}

std::string PoiIndex::match(const GeoPoint& p) const {
  for (const Area& a : areas_) {
    if (p.lon < a.min_lon || p.lon > a.max_lon || p.lat < a.min_lat || p.lat > a.max_lat) {
      continue;
    }
    if (ring_contains(pois_[a.poi].polygon, p)) {
      return pois_[a.poi].tag;
    }
  }
  // Buckets are in projected meters while distances are great-circle, so
  // search one extra ring of buckets.
  const auto [bx, by] = bucket_of(p);
  const std::int64_t reach = static_cast<std::int64_t>(std::ceil(radius_m_ / bucket_m_)) + 1;
  double best = std::numeric_limits<double>::infinity();
  const std::string* best_tag = nullptr;
  for (std::int64_t dx = -reach; dx <= reach; ++dx) {
    for (std::int64_t dy = -reach; dy <= reach; ++dy) {
      const auto it = buckets_.find({bx + dx, by + dy});
      if (it == buckets_.end()) {
        continue;
      }
      for (std::size_t i : it->second) {
        const double d = haversine_m(p, {pois_[i].lon, pois_[i].lat});
        if (d > radius_m_) {
          continue;
        }
        if (d < best || (d == best && pois_[i].tag < *best_tag)) {
          best = d;
          best_tag = &pois_[i].tag;
        }
      }
    }
  }
  return best_tag != nullptr ? *best_tag : kUnknownTag;
}

ActivitySemantic match_semantics(const StayList& stays, const PoiIndex& index) {
  ActivitySemantic semantic{stays.user_id, {}};
  semantic.tags.reserve(stays.stays.size());
  for (const auto& stay : stays.stays) {
    semantic.tags.push_back(index.match(stay.cell.center()));
  }
  return semantic;
}

namespace {

double distance_between(std::span<const double> a, std::span<const double> b, SemanticDistance metric) {
  if (metric == SemanticDistance::euclidean) {
    return std::sqrt(squared_distance(a, b));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    return 1.0;
  }
  return 1.0 - dot / std::sqrt(na * nb);
}

}  // namespace

SemanticFeatures semantic_features(const ActivitySemantic& semantic, const EmbeddingTable& table,
                                   SemanticDistance distance) {
  if (semantic.tags.empty()) {
    throw Error("no stays");
  }
  SemanticFeatures features;
  features.m_as.assign(table.dim(), 0.0);
  std::set<std::string> distinct;
  for (const auto& tag : semantic.tags) {
    const auto v = table.vector(tag);
    for (std::size_t d = 0; d < v.size(); ++d) {
      features.m_as[d] += v[d];
    }
    distinct.insert(tag);
  }
  for (double& x : features.m_as) {
    x /= static_cast<double>(semantic.tags.size());
  }
  features.n_uas = distinct.size();
  const std::vector<std::string> unique(distinct.begin(), distinct.end());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      features.m_sd = std::max(features.m_sd, distance_between(table.vector(unique[i]), table.vector(unique[j]), distance));
    }
  }
  return features;
}

void write_semantics(std::ostream& out, const std::vector<ActivitySemantic>& semantics) {
  for (const auto& s : semantics) {
    out << s.user_id << ',';
    for (std::size_t i = 0; i < s.tags.size(); ++i) {
      out << (i > 0 ? "|" : "") << s.tags[i];
    }
    out << '\n';
  }
}

std::vector<ActivitySemantic> read_semantics(std::istream& in) {
  std::vector<ActivitySemantic> result;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(line_no, "expected user_id,tags");
    }
    ActivitySemantic s{line.substr(0, comma), {}};
    const std::string_view tags = std::string_view(line).substr(comma + 1);
    if (!tags.empty()) {
      for (auto tag : split(tags, '|')) {
        s.tags.emplace_back(tag);
      }
    }
    result.push_back(std::move(s));
  }
  return result;
}

}  // namespace lifeprof
