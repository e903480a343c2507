#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lifeprof/matrix.hpp"

namespace lifeprof {

struct CbowOptions {
  std::size_t dim = 80;
  std::size_t window = 2;
  std::size_t negatives = 5;
  std::size_t epochs = 10;
  double lr0 = 0.025;
  std::uint64_t seed = 1;
};

/// Tag vectors; row i of `vectors` belongs to vocab[i].
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> vocab, Matrix vectors, std::uint64_t seed);

  std::size_t dim() const noexcept { return vectors_.cols(); }
  std::size_t size() const noexcept { return vocab_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  const Matrix& vectors() const noexcept { return vectors_; }

  bool contains(const std::string& tag) const { return index_.contains(tag); }
  /// Throws Error naming the tag when absent.
  std::span<const double> vector(const std::string& tag) const;

  /// Header `dim=D vocab=N seed=S`, then one `tag,v1,...,vD` row per tag.
  void write(std::ostream& out) const;
  static EmbeddingTable read(std::istream& in);

  bool operator==(const EmbeddingTable& other) const {
    return vocab_ == other.vocab_ && vectors_ == other.vectors_ && seed_ == other.seed_;
  }

 private:
  std::vector<std::string> vocab_;
  Matrix vectors_;
  std::uint64_t seed_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

struct CbowResult {
  EmbeddingTable table;
  std::vector<double> epoch_loss;  // mean negative log-likelihood per prediction
};

/// Continuous bag-of-words with negative sampling, single-threaded and
/// deterministic for a fixed seed. Each sequence is one user's tag list;
/// contexts never cross sequences.
CbowResult train_cbow(const std::vector<std::vector<std::string>>& corpus, const CbowOptions& options = {});

}  // namespace lifeprof
