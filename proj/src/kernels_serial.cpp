#include <algorithm>
#include <map>
#include <set>

#include "stylo/error.hpp"
#include "stylo/kernels.hpp"
#include "stylo/text.hpp"

namespace stylo::kernels::serial {

namespace {

// All n-gram strings of the (optionally lowercased) text, by code point.
template <typename Fn>
void for_each_gram(std::string_view raw, int n_min, int n_max, bool lowercase, Fn&& fn) {
  const std::string s = lowercase ? text::lowercase(raw) : std::string(raw);
  const auto cps = text::decode(s);
  for (int n = n_min; n <= n_max; ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= cps.size(); ++i) {
      const std::size_t begin = cps[i].offset;
      const std::size_t end = cps[i + len - 1].offset + cps[i + len - 1].length;
      fn(s.substr(begin, end - begin));
    }
  }
}

}  // namespace

features::NGramVocabulary fit_vocabulary(std::span<const std::string> texts,
                                         const features::VocabularyOptions& options) {
  if (texts.empty()) throw Error(ErrorKind::empty_corpus, "cannot fit a vocabulary on an empty corpus");
  std::map<std::string, std::uint32_t> df;
  for (const auto& t : texts) {
    std::set<std::string> seen;
    for_each_gram(t, options.n_min, options.n_max, options.lowercase,
                  [&](std::string g) { seen.insert(std::move(g)); });
    for (const auto& g : seen) ++df[g];
  }
  std::vector<std::pair<std::string, std::uint32_t>> ranked(df.begin(), df.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > options.max_grams) ranked.resize(options.max_grams);
  std::vector<std::string> grams;
  std::vector<std::uint32_t> freq;
  for (auto& [g, c] : ranked) {
    grams.push_back(g);
    freq.push_back(c);
  }
  return {options.n_min, options.n_max, options.lowercase, texts.size(), std::move(grams), std::move(freq)};
}

std::vector<features::TfIdfVector> vectorize(std::span<const std::string> texts,
                                             const features::NGramVocabulary& vocab) {
  std::vector<features::TfIdfVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    std::map<std::uint32_t, std::size_t> counts;
    for_each_gram(t, vocab.n_min(), vocab.n_max(), vocab.lowercase(), [&](const std::string& g) {
      if (auto idx = vocab.find(g)) ++counts[*idx];
    });
    features::TfIdfVector v;
    v.doc_char_count = text::count_code_points(t);
    for (const auto& [idx, f] : counts) {
      const double w = (static_cast<double>(f) / static_cast<double>(v.doc_char_count)) * vocab.idf(idx);
      if (w > 0.0) {
        v.indices.push_back(idx);
        v.weights.push_back(w);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> pair_distances(std::span<const features::StyleVector> vectors,
                                   std::span<const IndexPair> pairs, distance::Metric metric) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(distance::compute(metric, vectors[p.a], vectors[p.b]));
  return out;
}

std::vector<corpus::CleanedDocument> clean(std::span<const corpus::RawDocument> docs,
                                           const corpus::CleaningConfig& config) {
  std::vector<corpus::CleanedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(corpus::clean(d, config));
  return out;
}

}  // namespace stylo::kernels::serial
