#include "stylo/features.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "stylo/digest.hpp"
#include "stylo/error.hpp"
#include "stylo/gram_key.hpp"
#include "stylo/jsonl.hpp"
#include "stylo/kernels.hpp"
#include "stylo/text.hpp"

namespace stylo::features {

using nlohmann::json;

NGramVocabulary::NGramVocabulary(int n_min, int n_max, bool lowercase, std::uint64_t corpus_size,
                                 std::vector<std::string> grams, std::vector<std::uint32_t> doc_freq)
    : n_min_(n_min),
      n_max_(n_max),
      lowercase_(lowercase),
      corpus_size_(corpus_size),
      grams_(std::move(grams)),
      doc_freq_(std::move(doc_freq)) {
  auto bad = [](const std::string& why) { throw Error(ErrorKind::malformed_record, "vocabulary: " + why); };
  if (n_min_ < 1 || n_max_ < n_min_) bad("invalid n-gram range");
  if (grams_.size() != doc_freq_.size()) bad("grams and doc_freq differ in length");
  if (!grams_.empty() && corpus_size_ == 0) bad("N must be positive");
  idf_.reserve(grams_.size());
  by_string_.reserve(grams_.size());
  for (std::size_t i = 0; i < grams_.size(); ++i) {
    const auto& g = grams_[i];
    const auto cps = text::decode(g);
    if (cps.size() < static_cast<std::size_t>(n_min_) || cps.size() > static_cast<std::size_t>(n_max_)) {
      bad("gram '" + g + "' has length outside [n_min, n_max]");
    }
    if (doc_freq_[i] < 1 || doc_freq_[i] > corpus_size_) bad("doc_freq outside [1, N] for '" + g + "'");
    if (i > 0 && (doc_freq_[i - 1] < doc_freq_[i] ||
                  (doc_freq_[i - 1] == doc_freq_[i] && !(grams_[i - 1] < g)))) {
      bad("grams not in rank order at '" + g + "'");
    }
    const auto index = static_cast<std::uint32_t>(i);
    by_string_.emplace(g, index);
    std::vector<char32_t> raw;
    for (const auto& cp : cps) raw.push_back(cp.value);
    if (auto key = gram_key::pack(raw)) by_key_.emplace(*key, index);
    idf_.push_back(std::log(static_cast<double>(corpus_size_) / static_cast<double>(doc_freq_[i])));
  }
}

std::optional<std::uint32_t> NGramVocabulary::find(std::string_view gram) const {
  auto it = by_string_.find(std::string(gram));
  if (it == by_string_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> NGramVocabulary::find_packed(std::uint64_t key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

json NGramVocabulary::to_json() const {
  return {{"n_min", n_min_},   {"n_max", n_max_},         {"N", corpus_size_},
          {"grams", grams_},   {"doc_freq", doc_freq_},   {"lowercase", lowercase_}};
}

NGramVocabulary NGramVocabulary::from_json(const json& j) {
  try {
    return {j.at("n_min").get<int>(),
            j.at("n_max").get<int>(),
            j.value("lowercase", true),
            j.at("N").get<std::uint64_t>(),
            j.at("grams").get<std::vector<std::string>>(),
            j.at("doc_freq").get<std::vector<std::uint32_t>>()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::malformed_record, std::string("vocabulary: ") + e.what());
  }
}

void NGramVocabulary::save(const std::filesystem::path& path) const {
  jsonl::write_file(path, to_json().dump() + "\n");
}

NGramVocabulary NGramVocabulary::load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(jsonl::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::malformed_record, path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string NGramVocabulary::hash() const { return sha256_hex(to_json().dump()); }

double TfIdfVector::weight(std::uint32_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return 0.0;
  return weights[static_cast<std::size_t>(it - indices.begin())];
}

NGramVocabulary fit_vocabulary(std::span<const std::string> texts, const VocabularyOptions& options) {
  if (options.max_grams == 0) throw Error(ErrorKind::invalid_config, "max_grams must be >= 1");
  return kernels::parallel::fit_vocabulary(texts, options);
}

NGramVocabulary fit_vocabulary(std::span<const corpus::Segment> segments, const VocabularyOptions& options) {
  std::vector<std::string> texts;
  texts.reserve(segments.size());
  for (const auto& s : segments) texts.push_back(s.text);
  return fit_vocabulary(texts, options);
}

TfIdfVector vectorize_tfidf(std::string_view text, const NGramVocabulary& vocab) {
  return kernels::parallel::vectorize_one(text, vocab);
}

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::non_finite, std::string(what) + " contains a non-finite value");
  }
}

double l2(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

StyleVector fuse(const TfIdfVector& tfidf, const EmbeddingVector& embedding, double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorKind::non_finite, "alpha is not finite");
  if (alpha < 0.0) throw Error(ErrorKind::invalid_config, "alpha must be >= 0");
  require_finite(tfidf.weights, "tf-idf block");
  require_finite(embedding.values, "embedding block");

  StyleVector out{tfidf, embedding, alpha};
  if (const double n = l2(out.tfidf.weights); n > 0.0) {
    for (double& w : out.tfidf.weights) w /= n;
  }
  const double n = l2(out.embedding.values);
  for (double& v : out.embedding.values) v = n > 0.0 ? (v / n) * alpha : 0.0;
  return out;
}

StyleVector fuse_tfidf_only(const TfIdfVector& tfidf) { return fuse(tfidf, EmbeddingVector{}, 0.0); }

// ---- embedding interchange ----------------------------------------------

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  EmbeddingTable table;
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    const auto where = path.string() + ":" + std::to_string(line);
    const auto id = jsonl::string_field(r, "id", line);
    if (auto it = r.find("dim"); it != r.end()) {
      if (!it->is_number_integer() || it->get<long long>() != static_cast<long long>(kEmbeddingDim)) {
        throw Error(ErrorKind::malformed_record, where + ": dim must be " + std::to_string(kEmbeddingDim));
      }
    }
    const auto& vec = jsonl::field(r, "vec", line);
    if (!vec.is_array() || vec.size() != kEmbeddingDim) {
      throw Error(ErrorKind::malformed_record, where + ": vec must hold " + std::to_string(kEmbeddingDim) +
                                                   " values, got " + std::to_string(vec.size()));
    }
    EmbeddingVector e;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
      if (!vec[i].is_number()) throw Error(ErrorKind::malformed_record, where + ": non-numeric value");
      e.values[i] = vec[i].get<double>();
      if (!std::isfinite(e.values[i])) throw Error(ErrorKind::malformed_record, where + ": non-finite value");
    }
    if (!table.emplace(id, e).second) throw Error(ErrorKind::duplicate_id, where + ": duplicate id '" + id + "'");
  });
  return table;
}

void write_embeddings(const std::filesystem::path& path,
                      std::span<const std::pair<std::string, EmbeddingVector>> records) {
  jsonl::Writer w(path);
  for (const auto& [id, e] : records) {
    w.write({{"id", id}, {"dim", kEmbeddingDim}, {"vec", e.values}});
  }
}

void write_embed_manifest(const std::filesystem::path& path, std::span<const corpus::Segment> segments) {
  jsonl::Writer w(path);
  for (const auto& s : segments) w.write({{"id", s.id()}, {"text", s.text}});
}

}  // namespace stylo::features

namespace stylo::features {

StyleVector style_vector(std::string_view text, const std::string& id, const NGramVocabulary& vocab,
                         double alpha, const EmbeddingTable* embeddings) {
  auto tfidf = vectorize_tfidf(text, vocab);
  if (alpha == 0.0) return fuse_tfidf_only(tfidf);
  if (embeddings == nullptr) throw Error(ErrorKind::missing_embedding, "alpha > 0 requires embeddings");
  auto it = embeddings->find(id);
  if (it == embeddings->end()) throw Error(ErrorKind::missing_embedding, "no embedding for '" + id + "'");
  return fuse(tfidf, it->second, alpha);
}

}  // namespace stylo::features
