#include "lifeprof/views.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

AssemblyResult assemble_views(std::span<const UserFeatures> users) {
  AssemblyResult result;
  std::vector<const UserFeatures*> complete;
  std::size_t sem_dim = 0;
  for (const auto& u : users) {
    if (!u.motif) {
      result.excluded.push_back({u.user_id, "no motif (no stays)"});
    } else if (!u.semantic) {
      result.excluded.push_back({u.user_id, "no semantic features"});
    } else if (!complete.empty() && u.semantic->m_as.size() != sem_dim) {
      throw Error("inconsistent embedding width for user " + u.user_id);
    } else {
      sem_dim = u.semantic->m_as.size();
      complete.push_back(&u);
    }
  }
  if (complete.empty()) {
    throw Error("no user has a complete feature set");
  }
  FeatureViews& v = result.views;
  v.st = Matrix(complete.size(), kSpatiotemporalColumns);
  v.sem = Matrix(complete.size(), sem_dim + 2);
  for (std::size_t r = 0; r < complete.size(); ++r) {
    const UserFeatures& u = *complete[r];
    v.user_ids.push_back(u.user_id);
    auto st = v.st.row(r);
    std::copy(u.motif->begin(), u.motif->end(), st.begin());
    st[kMotifSlots] = u.rog_km;
    st[kMotifSlots + 1] = u.temporal.lfer;
    st[kMotifSlots + 2] = u.temporal.dcfr;
    auto sem = v.sem.row(r);
    std::copy(u.semantic->m_as.begin(), u.semantic->m_as.end(), sem.begin());
    sem[sem_dim] = static_cast<double>(u.semantic->n_uas);
    sem[sem_dim + 1] = u.semantic->m_sd;
  }
  return result;
}

std::vector<std::string> st_column_names() {
  return {"mt_top0", "mt_top1", "mt_top2", "mt_top3", "mt_others", "rog_km", "lfer", "dcfr"};
}

std::vector<std::string> sem_column_names(std::size_t embedding_dim) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < embedding_dim; ++i) {
    names.push_back("m_as_" + std::to_string(i));
  }
  names.emplace_back("n_uas");
  names.emplace_back("m_sd");
  return names;
}

ScalingParams fit_scaling(const Matrix& m, const std::vector<bool>& columns_to_scale) {
  const std::size_t n = m.rows();
  ScalingParams p;
  p.mean.assign(m.cols(), 0.0);
  p.stddev.assign(m.cols(), 1.0);
  p.scaled = columns_to_scale;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!p.scaled[c] || n == 0) {
      continue;
    }
    double sum = 0.0;
    bool constant = true;
    for (std::size_t r = 0; r < n; ++r) {
      sum += m(r, c);
      constant = constant && m(r, c) == m(0, c);
    }
    if (constant) {
      p.mean[c] = m(0, c);
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = m(r, c) - mean;
      ss += d * d;
    }
    p.mean[c] = mean;
    p.stddev[c] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 1.0;
    if (!(p.stddev[c] > 0.0)) {
      p.stddev[c] = 1.0;
    }
  }
  return p;
}

Matrix ScalingParams::apply(const Matrix& m) const {
  Matrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (scaled[c]) {
        out(r, c) = (m(r, c) - mean[c]) / stddev[c];
      }
    }
  }
  return out;
}

Matrix ScalingParams::invert(const Matrix& m) const {
  Matrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (scaled[c]) {
        out(r, c) = m(r, c) * stddev[c] + mean[c];
      }
    }
  }
  return out;
}

std::pair<FeatureViews, ViewScaling> standardize(const FeatureViews& views) {
  std::vector<bool> st_mask(views.st.cols(), true);
  for (std::size_t c = 0; c < kMotifSlots && c < st_mask.size(); ++c) {
    st_mask[c] = false;
  }
  ViewScaling scaling{fit_scaling(views.st, st_mask), fit_scaling(views.sem, std::vector<bool>(views.sem.cols(), true))};
  FeatureViews scaled{views.user_ids, scaling.st.apply(views.st), scaling.sem.apply(views.sem)};
  return {std::move(scaled), std::move(scaling)};
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& columns) {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c > 0 ? "," : "") << columns[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << (c > 0 ? "," : "") << format_double(m(r, c));
    }
    out << '\n';
  }
  write_file(path, out.str());
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!read_line(in, line)) {
    throw ParseError(1, path.string() + ": missing header");
  }
  const std::size_t cols = split(line, ',').size();
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != cols) {
      throw ParseError(line_no, path.string() + ": row width differs from header");
    }
    for (auto f : fields) {
      double x = 0.0;
      if (!parse_double(f, x)) {
        throw ParseError(line_no, path.string() + ": invalid number");
      }
      values.push_back(x);
    }
    ++rows;
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data().begin());
  return m;
}

void write_scaling(const std::filesystem::path& path, const ScalingParams& params,
                   const std::vector<std::string>& columns) {
  std::ostringstream out;
  out << "column,scaled,mean,stddev\n";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << ',' << (params.scaled[c] ? 1 : 0) << ',' << format_double(params.mean[c]) << ','
        << format_double(params.stddev[c]) << '\n';
  }
  write_file(path, out.str());
}

}  // namespace lifeprof
