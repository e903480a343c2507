#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lifeprof/cbow.hpp"
#include "lifeprof/poi.hpp"
#include "lifeprof/stays.hpp"

namespace lifeprof {

inline const std::string kUnknownTag = "unknown";

/// Chronological tags, one per stay.
struct ActivitySemantic {
  std::string user_id;
  std::vector<std::string> tags;
};

/// Point queries against POIs and AOIs.
class PoiIndex {
 public:
  PoiIndex(std::vector<PoiRecord> pois, const LocalProjection& projection, double search_radius_m = 200.0);

  /// Smallest containing AOI, else nearest POI within the search radius
  /// (lexicographic tag on distance ties), else "unknown".
  std::string match(const GeoPoint& p) const;

  bool empty() const noexcept { return points_.empty() && areas_.empty(); }

 private:
  struct Area {
    std::size_t poi;
    double area_m2;
    double min_lon, min_lat, max_lon, max_lat;
  };
  using BucketKey = std::pair<std::int64_t, std::int64_t>;

  BucketKey bucket_of(const GeoPoint& p) const;

  std::vector<PoiRecord> pois_;
  LocalProjection projection_;
  double radius_m_;
  double bucket_m_;
  std::vector<std::size_t> points_;
  std::vector<Area> areas_;  // ascending area, then tag
  std::map<BucketKey, std::vector<std::size_t>> buckets_;
};

ActivitySemantic match_semantics(const StayList& stays, const PoiIndex& index);

enum class SemanticDistance { euclidean, cosine };

struct SemanticFeatures {
  std::size_t n_uas = 0;       // distinct tags
  std::vector<double> m_as;    // occurrence-weighted mean vector
  double m_sd = 0.0;           // max distance between distinct tags' vectors
};

SemanticFeatures semantic_features(const ActivitySemantic& semantic, const EmbeddingTable& table,
                                   SemanticDistance distance = SemanticDistance::euclidean);

/// Rows `user_id,tag1|tag2|...`.
void write_semantics(std::ostream& out, const std::vector<ActivitySemantic>& semantics);
std::vector<ActivitySemantic> read_semantics(std::istream& in);

}  // namespace lifeprof
