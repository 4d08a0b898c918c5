#pragma once

// Batch kernels behind the public pipeline. `parallel` is the OpenMP
// implementation used in production; `serial` is a straightforward reference
// kept for equivalence tests and benchmarks. Both return identical results
// (bit-for-bit) for identical inputs, regardless of thread count.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/distance.hpp"
#include "stylo/features.hpp"

namespace stylo::kernels {

struct IndexPair {
  std::uint32_t a;
  std::uint32_t b;
};

namespace serial {

features::NGramVocabulary fit_vocabulary(std::span<const std::string> texts,
                                         const features::VocabularyOptions& options);
std::vector<features::TfIdfVector> vectorize(std::span<const std::string> texts,
                                             const features::NGramVocabulary& vocab);
std::vector<double> pair_distances(std::span<const features::StyleVector> vectors,
                                   std::span<const IndexPair> pairs, distance::Metric metric);
std::vector<corpus::CleanedDocument> clean(std::span<const corpus::RawDocument> docs,
                                           const corpus::CleaningConfig& config);

}  // namespace serial

namespace parallel {

features::NGramVocabulary fit_vocabulary(std::span<const std::string> texts,
                                         const features::VocabularyOptions& options);
std::vector<features::TfIdfVector> vectorize(std::span<const std::string> texts,
                                             const features::NGramVocabulary& vocab);
std::vector<double> pair_distances(std::span<const features::StyleVector> vectors,
                                   std::span<const IndexPair> pairs, distance::Metric metric);
std::vector<corpus::CleanedDocument> clean(std::span<const corpus::RawDocument> docs,
                                           const corpus::CleaningConfig& config);

// Single-document TF-IDF on the packed-key path.
features::TfIdfVector vectorize_one(std::string_view text, const features::NGramVocabulary& vocab);

}  // namespace parallel

}  // namespace stylo::kernels
