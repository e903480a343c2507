#include "lifeprof/lda.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

LdaSampler::LdaSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size, std::size_t n_topics,
                       double alpha, double beta, std::uint64_t seed)
    : docs_(std::move(docs)),
      vocab_size_(vocab_size),
      n_topics_(n_topics),
      alpha_(alpha),
      beta_(beta),
      n_dk_(docs_.size() * n_topics, 0),
      n_kw_(n_topics * vocab_size, 0),
      n_k_(n_topics, 0),
      weights_(n_topics, 0.0),
      rng_(seed) {
  if (n_topics_ == 0 || vocab_size_ == 0) {
    throw Error("lda: need at least one topic and one word");
  }
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) {
    throw Error("lda: priors must be positive");
  }
  z_.resize(docs_.size());
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    z_[d].resize(docs_[d].size());
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const std::size_t w = docs_[d][i];
      if (w >= vocab_size_) {
        throw Error("lda: word id out of range");
      }
      const std::size_t k = static_cast<std::size_t>(rng_.below(n_topics_));
      z_[d][i] = k;
      ++n_dk_[d * n_topics_ + k];
      ++n_kw_[k * vocab_size_ + w];
      ++n_k_[k];
      ++n_tokens_;
    }
  }
}

void LdaSampler::sweep() {
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    std::size_t* doc_counts = &n_dk_[d * n_topics_];
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const std::size_t w = docs_[d][i];
      std::size_t k = z_[d][i];
      --doc_counts[k];
      --n_kw_[k * vocab_size_ + w];
      --n_k_[k];

      double total = 0.0;
      for (std::size_t t = 0; t < n_topics_; ++t) {
        total += (static_cast<double>(doc_counts[t]) + alpha_) *
                 (static_cast<double>(n_kw_[t * vocab_size_ + w]) + beta_) /
                 (static_cast<double>(n_k_[t]) + v_beta);
        weights_[t] = total;
      }
      const double u = rng_.uniform() * total;
      k = static_cast<std::size_t>(std::upper_bound(weights_.begin(), weights_.end(), u) - weights_.begin());
      k = std::min(k, n_topics_ - 1);

      z_[d][i] = k;
      ++doc_counts[k];
      ++n_kw_[k * vocab_size_ + w];
      ++n_k_[k];
    }
  }
}

Matrix LdaSampler::phi() const {
  Matrix out(n_topics_, vocab_size_);
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t k = 0; k < n_topics_; ++k) {
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      out(k, w) = (static_cast<double>(n_kw_[k * vocab_size_ + w]) + beta_) / (static_cast<double>(n_k_[k]) + v_beta);
    }
  }
  return out;
}

Matrix LdaSampler::theta() const {
  Matrix out(docs_.size(), n_topics_);
  const double k_alpha = static_cast<double>(n_topics_) * alpha_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    for (std::size_t k = 0; k < n_topics_; ++k) {
      out(d, k) = (static_cast<double>(n_dk_[d * n_topics_ + k]) + alpha_) /
                  (static_cast<double>(docs_[d].size()) + k_alpha);
    }
  }
  return out;
}

namespace {

void accumulate(Matrix& sum, const Matrix& add) {
  for (std::size_t r = 0; r < sum.rows(); ++r) {
    for (std::size_t c = 0; c < sum.cols(); ++c) {
      sum(r, c) += add(r, c);
    }
  }
}

void normalize_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double total = 0.0;
    for (double v : m.row(r)) {
      total += v;
    }
    for (double& v : m.row(r)) {
      v /= total;
    }
  }
}

}  // namespace

TopicModel train_lda(const std::vector<std::vector<std::string>>& corpus, const LdaOptions& options) {
  if (corpus.empty()) {
    throw Error("lda: empty corpus");
  }
  std::map<std::string, std::size_t> ids;
  for (const auto& doc : corpus) {
    for (const auto& tag : doc) {
      ids.emplace(tag, 0);
    }
  }
  if (ids.empty()) {
    throw Error("lda: empty vocabulary");
  }
  TopicModel model;
  for (auto& [tag, id] : ids) {
    id = model.vocab.size();
    model.vocab.push_back(tag);
  }
  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus) {
    auto& coded = docs.emplace_back();
    for (const auto& tag : doc) {
      coded.push_back(ids.at(tag));
    }
  }

  model.n_topics = options.n_topics;
  model.alpha = options.resolved_alpha();
  model.beta = options.beta;
  model.seed = options.seed;
  LdaSampler sampler(std::move(docs), model.vocab.size(), options.n_topics, model.alpha, model.beta, options.seed);

  Matrix phi_sum(sampler.n_topics(), sampler.vocab_size());
  Matrix theta_sum(sampler.n_docs(), sampler.n_topics());
  const std::size_t lag = std::max<std::size_t>(options.sample_lag, 1);
  for (std::size_t s = 1; s <= options.iters; ++s) {
    sampler.sweep();
    if (s > options.burn_in && (s - options.burn_in) % lag == 0) {
      accumulate(phi_sum, sampler.phi());
      accumulate(theta_sum, sampler.theta());
      ++model.samples;
    }
  }
  if (model.samples == 0) {
    phi_sum = sampler.phi();
    theta_sum = sampler.theta();
  }
  normalize_rows(phi_sum);
  normalize_rows(theta_sum);
  model.topic_word = std::move(phi_sum);
  model.doc_topic = std::move(theta_sum);
  return model;
}

std::vector<std::string> TopicModel::default_labels() const {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < topic_word.rows(); ++k) {
    const auto row = topic_word.row(k);
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    labels.push_back(vocab[static_cast<std::size_t>(best)]);
  }
  return labels;
}

void TopicModel::write_topic_word(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "topic";
  for (const auto& tag : vocab) {
    out << ',' << tag;
  }
  out << '\n';
  for (std::size_t k = 0; k < topic_word.rows(); ++k) {
    out << k;
    for (double v : topic_word.row(k)) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  write_file(path, out.str());
}

void TopicModel::write_doc_topic(const std::filesystem::path& path, const std::vector<std::string>& doc_ids) const {
  std::ostringstream out;
  out << "user_id";
  for (std::size_t k = 0; k < n_topics; ++k) {
    out << ",topic" << k;
  }
  out << '\n';
  for (std::size_t d = 0; d < doc_topic.rows(); ++d) {
    out << (d < doc_ids.size() ? doc_ids[d] : std::to_string(d));
    for (double v : doc_topic.row(d)) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  write_file(path, out.str());
}

}  // namespace lifeprof
