#include "lifeprof/multiview.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lifeprof/error.hpp"
#include "lifeprof/kmeans.hpp"
#include "lifeprof/rng.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

namespace {

double max_shift(const Matrix& a, const Matrix& b) {
  double shift = 0.0;
  for (std::size_t c = 0; c < a.rows(); ++c) {
    shift = std::max(shift, std::sqrt(squared_distance(a.row(c), b.row(c))));
  }
  return shift;
}

double mean_nearest_sq(const Matrix& data, const Matrix& centroids) {
  double total = 0.0;
  const auto labels = assign_nearest(data, centroids);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    total += squared_distance(data.row(i), centroids.row(labels[i]));
  }
  return data.rows() > 0 ? total / static_cast<double>(data.rows()) : 0.0;
}

}  // namespace

std::vector<std::size_t> consensus_assignments(const Matrix& st, const Matrix& sem, const Matrix& centroids_st,
                                               const Matrix& centroids_sem, double variance_st,
                                               double variance_sem) {
  std::vector<std::size_t> labels(st.rows(), 0);
  for (std::size_t i = 0; i < st.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids_st.rows(); ++c) {
      const double score = squared_distance(st.row(i), centroids_st.row(c)) / variance_st +
                           squared_distance(sem.row(i), centroids_sem.row(c)) / variance_sem;
      if (score < best) {
        best = score;
        labels[i] = c;
      }
    }
  }
  return labels;
}

ClusterModel multiview_kmeans(const Matrix& st, const Matrix& sem, const MultiviewOptions& options) {
  if (st.rows() != sem.rows()) {
    throw Error("views are not row-aligned");
  }
  const std::size_t k = options.k;
  if (k == 0 || k > st.rows()) {
    throw Error("k must be between 1 and the number of rows");
  }
  ClusterModel model;
  model.k = k;
  model.seed = options.seed;

  Rng rng(options.seed);
  Matrix c_sem = kmeanspp_init(sem, k, rng);
  Matrix c_st(k, st.cols());
  std::vector<std::size_t> previous_st;
  for (std::size_t it = 1; it <= std::max<std::size_t>(options.max_iter, 1); ++it) {
    // E in the semantic view, M in the spatiotemporal view.
    auto a_sem = assign_nearest(sem, c_sem);
    repair_empty_clusters(sem, a_sem, c_sem);
    model.objective_sem.push_back(within_cluster_ss(sem, a_sem, c_sem));
    Matrix next_st = compute_centroids(st, a_sem, k);

    // E in the spatiotemporal view, M in the semantic view.
    auto a_st = assign_nearest(st, next_st);
    repair_empty_clusters(st, a_st, next_st);
    model.objective_st.push_back(within_cluster_ss(st, a_st, next_st));
    Matrix next_sem = compute_centroids(sem, a_st, k);

    const bool settled = it > 1 && max_shift(next_st, c_st) < options.tol && max_shift(next_sem, c_sem) < options.tol;
    c_st = std::move(next_st);
    c_sem = std::move(next_sem);
    model.iterations = it;
    model.assignments_sem = std::move(a_sem);
    const bool repeated = a_st == previous_st;
    previous_st = a_st;
    model.assignments_st = std::move(a_st);
    if (repeated || settled) {
      break;
    }
  }

  model.variance_st = mean_nearest_sq(st, c_st);
  model.variance_sem = mean_nearest_sq(sem, c_sem);
  if (!(model.variance_st > 0.0)) {
    model.variance_st = 1.0;
  }
  if (!(model.variance_sem > 0.0)) {
    model.variance_sem = 1.0;
  }
  model.assignments = consensus_assignments(st, sem, c_st, c_sem, model.variance_st, model.variance_sem);
  model.centroids_st = std::move(c_st);
  model.centroids_sem = std::move(c_sem);
  return model;
}

namespace {

void write_block(std::ostringstream& out, const char* name, const Matrix& m) {
  out << '[' << name << "]\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << (c > 0 ? "," : "") << format_double(m(r, c));
    }
    out << '\n';
  }
}

Matrix read_block(std::istream& in, const char* name, std::size_t rows, std::size_t cols) {
  std::string line;
  if (!read_line(in, line) || line != std::string("[") + name + "]") {
    throw ParseError(0, std::string("cluster model: expected section ") + name);
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!read_line(in, line)) {
      throw ParseError(0, "cluster model: truncated centroid block");
    }
    const auto fields = split(line, ',');
    if (fields.size() != cols) {
      throw ParseError(0, "cluster model: centroid row width mismatch");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!parse_double(fields[c], m(r, c))) {
        throw ParseError(0, "cluster model: invalid centroid value");
      }
    }
  }
  return m;
}

}  // namespace

void ClusterModel::write(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "k=" << k << " dim_st=" << centroids_st.cols() << " dim_sem=" << centroids_sem.cols() << " seed=" << seed
      << " iterations=" << iterations << " n=" << assignments.size() << '\n';
  out << "variance_st=" << format_double(variance_st) << " variance_sem=" << format_double(variance_sem) << '\n';
  write_block(out, "centroids_st", centroids_st);
  write_block(out, "centroids_sem", centroids_sem);
  out << "[assignments]\n";
  for (std::size_t a : assignments) {
    out << a << '\n';
  }
  write_file(path, out.str());
}

ClusterModel ClusterModel::read(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  auto header_fields = [&](std::size_t line_no) {
    if (!read_line(in, line)) {
      throw ParseError(line_no, "cluster model: missing header");
    }
    std::vector<std::pair<std::string, std::string>> kv;
    for (auto token : split(line, ' ')) {
      const auto eq = token.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(line_no, "cluster model: malformed header");
      }
      kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return kv;
  };
  ClusterModel model;
  std::int64_t dim_st = 0;
  std::int64_t dim_sem = 0;
  std::int64_t n = 0;
  for (const auto& [key, value] : header_fields(1)) {
    std::int64_t v = 0;
    if (!parse_int(value, v) || v < 0) {
      throw ParseError(1, "cluster model: invalid header value for " + key);
    }
    if (key == "k") {
      model.k = static_cast<std::size_t>(v);
    } else if (key == "dim_st") {
      dim_st = v;
    } else if (key == "dim_sem") {
      dim_sem = v;
    } else if (key == "seed") {
      model.seed = static_cast<std::uint64_t>(v);
    } else if (key == "iterations") {
      model.iterations = static_cast<std::size_t>(v);
    } else if (key == "n") {
      n = v;
    }
  }
  for (const auto& [key, value] : header_fields(2)) {
    double v = 0.0;
    if (!parse_double(value, v)) {
      throw ParseError(2, "cluster model: invalid variance");
    }
    (key == "variance_st" ? model.variance_st : model.variance_sem) = v;
  }
  model.centroids_st = read_block(in, "centroids_st", model.k, static_cast<std::size_t>(dim_st));
  model.centroids_sem = read_block(in, "centroids_sem", model.k, static_cast<std::size_t>(dim_sem));
  if (!read_line(in, line) || line != "[assignments]") {
    throw ParseError(0, "cluster model: expected assignments");
  }
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t a = 0;
    if (!read_line(in, line) || !parse_int(line, a) || a < 0 || static_cast<std::size_t>(a) >= model.k) {
      throw ParseError(0, "cluster model: invalid assignment");
    }
    model.assignments.push_back(static_cast<std::size_t>(a));
  }
  return model;
}

}  // namespace lifeprof
