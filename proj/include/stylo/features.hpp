#pragma once

// Character n-gram TF-IDF vocabulary and vectors, external sentence
// embeddings, and their fusion into a single style vector.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stylo/corpus.hpp"
#include "stylo/vector_view.hpp"

namespace stylo::features {

inline constexpr std::size_t kEmbeddingDim = 384;

struct VocabularyOptions {
  int n_min = 3;
  int n_max = 5;
  std::size_t max_grams = 10'000;
  bool lowercase = true;
};

// Top grams by document frequency (ties lexicographic on UTF-8 bytes), with
// the statistics needed for the IDF factor log(N / df).
class NGramVocabulary {
 public:
  NGramVocabulary() = default;
  // Validates ordering, gram lengths and df bounds; throws Error{malformed_record}.
  NGramVocabulary(int n_min, int n_max, bool lowercase, std::uint64_t corpus_size,
                  std::vector<std::string> grams, std::vector<std::uint32_t> doc_freq);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  bool lowercase() const { return lowercase_; }
  std::uint64_t corpus_size() const { return corpus_size_; }
  std::size_t size() const { return grams_.size(); }
  const std::vector<std::string>& grams() const { return grams_; }
  const std::vector<std::uint32_t>& doc_freq() const { return doc_freq_; }
  double idf(std::uint32_t index) const { return idf_[index]; }

  std::optional<std::uint32_t> find(std::string_view gram) const;
  std::optional<std::uint32_t> find_packed(std::uint64_t key) const;

  nlohmann::json to_json() const;
  static NGramVocabulary from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static NGramVocabulary load(const std::filesystem::path& path);

  // SHA-256 of the canonical JSON serialization.
  std::string hash() const;

  bool operator==(const NGramVocabulary& o) const {
    return n_min_ == o.n_min_ && n_max_ == o.n_max_ && lowercase_ == o.lowercase_ &&
           corpus_size_ == o.corpus_size_ && grams_ == o.grams_ && doc_freq_ == o.doc_freq_;
  }

 private:
  int n_min_ = 3;
  int n_max_ = 5;
  bool lowercase_ = true;
  std::uint64_t corpus_size_ = 0;
  std::vector<std::string> grams_;
  std::vector<std::uint32_t> doc_freq_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> by_string_;
  std::unordered_map<std::uint64_t, std::uint32_t> by_key_;
};

// Sparse TF-IDF weights, ascending by vocabulary index, zero weights omitted.
struct TfIdfVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> weights;
  std::size_t doc_char_count = 0;

  std::size_t nnz() const { return indices.size(); }
  double weight(std::uint32_t index) const;
  bool operator==(const TfIdfVector&) const = default;
};

struct EmbeddingVector {
  std::array<double, kEmbeddingDim> values{};
  bool operator==(const EmbeddingVector&) const = default;
};

// Both blocks unit-L2 (zero blocks stay zero); the embedding block is then
// scaled by alpha. Logical dimension = vocabulary size + kEmbeddingDim.
struct StyleVector {
  TfIdfVector tfidf;
  EmbeddingVector embedding;
  double alpha = 1.0;

  FusedView view() const {
    return {tfidf.indices, tfidf.weights, std::span<const double>(embedding.values)};
  }
};

NGramVocabulary fit_vocabulary(std::span<const std::string> texts, const VocabularyOptions& options = {});
NGramVocabulary fit_vocabulary(std::span<const corpus::Segment> segments, const VocabularyOptions& options = {});

TfIdfVector vectorize_tfidf(std::string_view text, const NGramVocabulary& vocab);
inline TfIdfVector vectorize_tfidf(const corpus::Segment& segment, const NGramVocabulary& vocab) {
  return vectorize_tfidf(segment.text, vocab);
}

// alpha must be finite and >= 0; alpha == 0 yields TF-IDF-only distances.
StyleVector fuse(const TfIdfVector& tfidf, const EmbeddingVector& embedding, double alpha = 1.0);
StyleVector fuse_tfidf_only(const TfIdfVector& tfidf);

// ---- embedding interchange ----------------------------------------------

using EmbeddingTable = std::unordered_map<std::string, EmbeddingVector>;

// JSONL {"id", "dim": 384, "vec": [...]}. Throws Error{malformed_record} or
// Error{duplicate_id}.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path,
                      std::span<const std::pair<std::string, EmbeddingVector>> records);

// JSONL {"id", "text"}, one line per segment, in input order.
void write_embed_manifest(const std::filesystem::path& path, std::span<const corpus::Segment> segments);

}  // namespace stylo::features

namespace stylo::features {

// TF-IDF of `text` fused with the embedding stored under `id`. With alpha == 0
// the embedding is not needed; otherwise a missing id throws
// Error{missing_embedding}.
StyleVector style_vector(std::string_view text, const std::string& id, const NGramVocabulary& vocab,
                         double alpha, const EmbeddingTable* embeddings);

}  // namespace stylo::features
