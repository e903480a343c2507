#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lifeprof/matrix.hpp"
#include "lifeprof/rng.hpp"

namespace lifeprof {

struct LdaOptions {
  std::size_t n_topics = 12;
  std::optional<double> alpha;  // defaults to 50 / n_topics
  double beta = 0.01;
  std::size_t iters = 1000;
  std::size_t burn_in = 500;
  std::size_t sample_lag = 10;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha ? *alpha : 50.0 / static_cast<double>(n_topics); }
};

struct TopicModel {
  std::size_t n_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;  // sorted
  Matrix topic_word;               // n_topics x vocab
  Matrix doc_topic;                // n_docs x n_topics
  std::size_t samples = 0;         // count-snapshots averaged

  /// Highest-probability tag of each topic; ties go to the earlier tag.
  std::vector<std::string> default_labels() const;

  void write_topic_word(const std::filesystem::path& path) const;
  void write_doc_topic(const std::filesystem::path& path, const std::vector<std::string>& doc_ids) const;
};

/// Collapsed Gibbs state over integer-coded documents.
class LdaSampler {
 public:
  LdaSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size, std::size_t n_topics,
             double alpha, double beta, std::uint64_t seed);

  /// One pass over every token in document order.
  void sweep();

  std::size_t n_topics() const { return n_topics_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t n_docs() const { return docs_.size(); }
  std::size_t n_tokens() const { return n_tokens_; }

  std::size_t doc_topic_count(std::size_t d, std::size_t k) const { return n_dk_[d * n_topics_ + k]; }
  std::size_t topic_word_count(std::size_t k, std::size_t w) const { return n_kw_[k * vocab_size_ + w]; }
  std::size_t topic_count(std::size_t k) const { return n_k_[k]; }
  const std::vector<std::size_t>& assignments(std::size_t d) const { return z_[d]; }

  /// Point estimates from the current counts.
  Matrix phi() const;
  Matrix theta() const;

 private:
  std::vector<std::vector<std::size_t>> docs_;
  std::vector<std::vector<std::size_t>> z_;
  std::size_t vocab_size_;
  std::size_t n_topics_;
  double alpha_;
  double beta_;
  std::size_t n_tokens_ = 0;
  std::vector<std::size_t> n_dk_;
  std::vector<std::size_t> n_kw_;
  std::vector<std::size_t> n_k_;
  std::vector<double> weights_;
  Rng rng_;
};

/// Trains on one tag document per user. Estimates are averaged over every
/// `sample_lag`-th sweep after `burn_in`; without any such sweep the final
/// state is used. Throws on an empty corpus or vocabulary.
TopicModel train_lda(const std::vector<std::vector<std::string>>& corpus, const LdaOptions& options);

}  // namespace lifeprof
