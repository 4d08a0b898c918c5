#include <omp.h>

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>

#include "stylo/error.hpp"
#include "stylo/gram_key.hpp"
#include "stylo/kernels.hpp"
#include "stylo/text.hpp"

namespace stylo::kernels::parallel {

namespace {

// Keeps the exception of the lowest failing item so errors are reproducible
// across thread counts.
class FirstError {
 public:
  void capture(std::size_t index) {
    std::lock_guard lock(mu_);
    if (!error_ || index < index_) {
      error_ = std::current_exception();
      index_ = index;
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
  std::size_t index_ = 0;
};

struct DecodedText {
  std::string utf8;
  std::vector<char32_t> cps;
  std::vector<std::size_t> offsets;  // byte offset of each code point, plus end
};

DecodedText decode_for_grams(std::string_view raw, bool lowercase) {
  DecodedText d;
  d.utf8 = lowercase ? text::lowercase(raw) : std::string(raw);
  const auto cps = text::decode(d.utf8);
  d.cps.reserve(cps.size());
  d.offsets.reserve(cps.size() + 1);
  for (const auto& cp : cps) {
    d.cps.push_back(cp.value);
    d.offsets.push_back(cp.offset);
  }
  d.offsets.push_back(d.utf8.size());
  return d;
}

std::string unpack(std::uint64_t key) {
  const auto n = static_cast<int>(key >> 60);
  std::string out;
  int shift = 48;
  for (int i = 0; i < n; ++i, shift -= 12) {
    text::append_utf8(out, static_cast<char32_t>((key >> shift) & gram_key::kMaxPackedCodePoint));
  }
  return out;
}

struct DocGrams {
  std::vector<std::uint64_t> keys;
  std::vector<std::string> strings;
};

DocGrams unique_grams(std::string_view raw, const features::VocabularyOptions& o) {
  const auto d = decode_for_grams(raw, o.lowercase);
  DocGrams g;
  for (int n = o.n_min; n <= o.n_max; ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= d.cps.size(); ++i) {
      if (auto key = gram_key::pack(std::span(d.cps).subspan(i, len))) {
        g.keys.push_back(*key);
      } else {
        g.strings.push_back(d.utf8.substr(d.offsets[i], d.offsets[i + len] - d.offsets[i]));
      }
    }
  }
  std::sort(g.keys.begin(), g.keys.end());
  g.keys.erase(std::unique(g.keys.begin(), g.keys.end()), g.keys.end());
  std::sort(g.strings.begin(), g.strings.end());
  g.strings.erase(std::unique(g.strings.begin(), g.strings.end()), g.strings.end());
  return g;
}

}  // namespace

features::NGramVocabulary fit_vocabulary(std::span<const std::string> texts,
                                         const features::VocabularyOptions& options) {
  if (texts.empty()) throw Error(ErrorKind::empty_corpus, "cannot fit a vocabulary on an empty corpus");
  if (options.n_min < 1 || options.n_max < options.n_min) {
    throw Error(ErrorKind::invalid_config, "invalid n-gram range");
  }

  std::vector<std::uint64_t> all_keys;
  std::map<std::string, std::uint32_t> string_df;
  const auto n_texts = static_cast<std::int64_t>(texts.size());

#pragma omp parallel
  {
    std::vector<std::uint64_t> local_keys;
    std::map<std::string, std::uint32_t> local_strings;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::int64_t i = 0; i < n_texts; ++i) {
      auto g = unique_grams(texts[static_cast<std::size_t>(i)], options);
      local_keys.insert(local_keys.end(), g.keys.begin(), g.keys.end());
      for (auto& s : g.strings) ++local_strings[std::move(s)];
    }
#pragma omp critical(stylo_fit_merge)
    {
      all_keys.insert(all_keys.end(), local_keys.begin(), local_keys.end());
      for (auto& [s, c] : local_strings) string_df[s] += c;
    }
  }

  // Each document contributes a key at most once, so run length = df.
  std::sort(all_keys.begin(), all_keys.end());
  struct Candidate {
    std::uint32_t df;
    std::uint64_t key;                    // valid when str == nullptr
    const std::string* str = nullptr;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < all_keys.size();) {
    std::size_t j = i;
    while (j < all_keys.size() && all_keys[j] == all_keys[i]) ++j;
    cands.push_back({static_cast<std::uint32_t>(j - i), all_keys[i], nullptr});
    i = j;
  }
  for (const auto& [s, c] : string_df) cands.push_back({c, 0, &s});

  // Everything strictly above the k-th df, plus all grams tied with it; only
  // those need materialized strings for the lexicographic tie-break.
  const std::size_t k = std::min(options.max_grams, cands.size());
  std::vector<std::pair<std::uint32_t, std::string>> ranked;
  if (k > 0) {
    std::nth_element(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k - 1), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.df > b.df; });
    const std::uint32_t cutoff = cands[k - 1].df;
    for (const auto& c : cands) {
      if (c.df >= cutoff) ranked.emplace_back(c.df, c.str ? *c.str : unpack(c.key));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    ranked.resize(k);
  }
  std::vector<std::string> grams;
  std::vector<std::uint32_t> df;
  grams.reserve(k);
  df.reserve(k);
  for (auto& [c, g] : ranked) {
    df.push_back(c);
    grams.push_back(std::move(g));
  }
  return {options.n_min, options.n_max, options.lowercase, texts.size(), std::move(grams), std::move(df)};
}

features::TfIdfVector vectorize_one(std::string_view text, const features::NGramVocabulary& vocab) {
  const auto d = decode_for_grams(text, vocab.lowercase());
  std::vector<std::uint32_t> hits;
  for (int n = vocab.n_min(); n <= vocab.n_max(); ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= d.cps.size(); ++i) {
      std::optional<std::uint32_t> idx;
      if (auto key = gram_key::pack(std::span(d.cps).subspan(i, len))) {
        idx = vocab.find_packed(*key);
      } else {
        idx = vocab.find(std::string_view(d.utf8).substr(d.offsets[i], d.offsets[i + len] - d.offsets[i]));
      }
      if (idx) hits.push_back(*idx);
    }
  }
  std::sort(hits.begin(), hits.end());
  features::TfIdfVector v;
  v.doc_char_count = d.cps.size();
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    const double w =
        (static_cast<double>(j - i) / static_cast<double>(v.doc_char_count)) * vocab.idf(hits[i]);
    if (w > 0.0) {
      v.indices.push_back(hits[i]);
      v.weights.push_back(w);
    }
    i = j;
  }
  return v;
}

std::vector<features::TfIdfVector> vectorize(std::span<const std::string> texts,
                                             const features::NGramVocabulary& vocab) {
  std::vector<features::TfIdfVector> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = vectorize_one(texts[static_cast<std::size_t>(i)], vocab);
  }
  return out;
}

std::vector<double> pair_distances(std::span<const features::StyleVector> vectors,
                                   std::span<const IndexPair> pairs, distance::Metric metric) {
  std::vector<double> out(pairs.size());
  FirstError err;
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    try {
      out[static_cast<std::size_t>(i)] = distance::compute(metric, vectors[p.a], vectors[p.b]);
    } catch (...) {
      err.capture(static_cast<std::size_t>(i));
    }
  }
  err.rethrow();
  return out;
}

std::vector<corpus::CleanedDocument> clean(std::span<const corpus::RawDocument> docs,
                                           const corpus::CleaningConfig& config) {
  config.validate();
  std::vector<corpus::CleanedDocument> out(docs.size());
  FirstError err;
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = corpus::clean(docs[static_cast<std::size_t>(i)], config);
    } catch (...) {
      err.capture(static_cast<std::size_t>(i));
    }
  }
  err.rethrow();
  return out;
}

}  // namespace stylo::kernels::parallel
