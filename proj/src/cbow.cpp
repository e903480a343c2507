#include "lifeprof/cbow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lifeprof/error.hpp"
#include "lifeprof/rng.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, Matrix vectors, std::uint64_t seed)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), seed_(seed) {
  if (vectors_.rows() != vocab_.size()) {
    throw Error("embedding table: vocabulary and vector count differ");
  }
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    index_.emplace(vocab_[i], i);
  }
}

std::span<const double> EmbeddingTable::vector(const std::string& tag) const {
  const auto it = index_.find(tag);
  if (it == index_.end()) {
    throw Error("tag '" + tag + "' has no embedding");
  }
  return vectors_.row(it->second);
}

void EmbeddingTable::write(std::ostream& out) const {
  out << "dim=" << dim() << " vocab=" << size() << " seed=" << seed_ << '\n';
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out << vocab_[i];
    for (double v : vectors_.row(i)) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::read(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) {
    throw ParseError(1, "missing embedding header");
  }
  std::int64_t dim = -1;
  std::int64_t vocab = -1;
  std::int64_t seed = -1;
  for (std::string_view token : split(line, ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(1, "malformed embedding header");
    }
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    std::int64_t* slot = key == "dim" ? &dim : key == "vocab" ? &vocab : key == "seed" ? &seed : nullptr;
    if (slot == nullptr || !parse_int(value, *slot)) {
      throw ParseError(1, "malformed embedding header");
    }
  }
  if (dim <= 0 || vocab < 0 || seed < 0) {
    throw ParseError(1, "embedding header needs dim, vocab and seed");
  }
  std::vector<std::string> tags;
  Matrix vectors(static_cast<std::size_t>(vocab), static_cast<std::size_t>(dim));
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != static_cast<std::size_t>(dim) + 1 || tags.size() >= vectors.rows()) {
      throw ParseError(line_no, "embedding row has the wrong width or exceeds the vocabulary");
    }
    auto row = vectors.row(tags.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!parse_double(fields[c + 1], row[c])) {
        throw ParseError(line_no, "invalid embedding value");
      }
    }
    tags.emplace_back(fields[0]);
  }
  if (tags.size() != vectors.rows()) {
    throw ParseError(line_no, "embedding file is truncated");
  }
  return EmbeddingTable(std::move(tags), std::move(vectors), static_cast<std::uint64_t>(seed));
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow
double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<std::size_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0.0;
    for (std::size_t c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

CbowResult train_cbow(const std::vector<std::vector<std::string>>& corpus, const CbowOptions& options) {
  if (options.dim == 0 || options.window == 0) {
    throw Error("cbow: dim and window must be positive");
  }
  std::map<std::string, std::size_t> counts_by_tag;
  for (const auto& seq : corpus) {
    for (const auto& tag : seq) {
      ++counts_by_tag[tag];
    }
  }
  if (counts_by_tag.size() < 2) {
    throw Error("degenerate vocabulary");
  }

  // Vocabulary by descending frequency; tag text breaks ties.
  std::vector<std::pair<std::string, std::size_t>> ordered(counts_by_tag.begin(), counts_by_tag.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab;
  std::vector<std::size_t> counts;
  std::map<std::string, std::size_t> index;
  for (const auto& [tag, count] : ordered) {
    index.emplace(tag, vocab.size());
    vocab.push_back(tag);
    counts.push_back(count);
  }

  std::vector<std::vector<std::size_t>> sequences;
  std::size_t tokens = 0;
  for (const auto& seq : corpus) {
    if (seq.size() < 2) {
      continue;  // no context available
    }
    std::vector<std::size_t> ids;
    ids.reserve(seq.size());
    for (const auto& tag : seq) {
      ids.push_back(index.at(tag));
    }
    tokens += ids.size();
    sequences.push_back(std::move(ids));
  }

  const std::size_t dim = options.dim;
  const std::size_t v = vocab.size();
  Rng rng(options.seed);
  Matrix input(v, dim);
  Matrix output(v, dim, 0.0);
  for (double& x : input.data()) {
    x = (rng.uniform() - 0.5) / static_cast<double>(dim);
  }
  const NoiseSampler noise(counts);

  CbowResult result;
  const double total_steps = static_cast<double>(tokens * options.epochs);
  const double lr_min = options.lr0 / 100.0;
  std::size_t step = 0;
  std::vector<double> hidden(dim);
  std::vector<double> grad(dim);
  std::vector<std::size_t> context;

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t predictions = 0;
    for (const auto& seq : sequences) {
      for (std::size_t pos = 0; pos < seq.size(); ++pos, ++step) {
        const double progress = total_steps > 0 ? static_cast<double>(step) / total_steps : 0.0;
        const double lr = options.lr0 - (options.lr0 - lr_min) * progress;

        context.clear();
        const std::size_t lo = pos >= options.window ? pos - options.window : 0;
        const std::size_t hi = std::min(seq.size() - 1, pos + options.window);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c != pos) {
            context.push_back(seq[c]);
          }
        }
        std::fill(hidden.begin(), hidden.end(), 0.0);
        for (std::size_t c : context) {
          const auto row = input.row(c);
          for (std::size_t d = 0; d < dim; ++d) {
            hidden[d] += row[d];
          }
        }
        for (double& h : hidden) {
          h /= static_cast<double>(context.size());
        }
        std::fill(grad.begin(), grad.end(), 0.0);

        const std::size_t center = seq[pos];
        for (std::size_t s = 0; s <= options.negatives; ++s) {
          std::size_t target = center;
          double label = 1.0;
          if (s > 0) {
            target = noise.draw(rng);
            if (target == center) {
              continue;
            }
            label = 0.0;
          }
          auto out_row = output.row(target);
          double f = 0.0;
          for (std::size_t d = 0; d < dim; ++d) {
            f += hidden[d] * out_row[d];
          }
          loss -= label > 0.0 ? log_sigmoid(f) : log_sigmoid(-f);
          const double g = (label - sigmoid(f)) * lr;
          for (std::size_t d = 0; d < dim; ++d) {
            grad[d] += g * out_row[d];
            out_row[d] += g * hidden[d];
          }
        }
        ++predictions;
        for (std::size_t c : context) {
          auto row = input.row(c);
          for (std::size_t d = 0; d < dim; ++d) {
            row[d] += grad[d];
          }
        }
      }
    }
    result.epoch_loss.push_back(predictions > 0 ? loss / static_cast<double>(predictions) : 0.0);
  }
  result.table = EmbeddingTable(std::move(vocab), std::move(input), options.seed);
  return result;
}

}  // namespace lifeprof
