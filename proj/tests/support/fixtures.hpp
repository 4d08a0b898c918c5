#pragma once

// Test-only corpus generators and brute-force oracles. Nothing here calls
// into the library paths it is used to check.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"

namespace stylo::fixtures {

// Dictionary words arranged into sentences; no word type exceeds ~3% of tokens.
std::string english_text(std::size_t n_words, std::uint64_t seed);

struct MarkovCorpusOptions {
  std::size_t n_authors = 2;
  std::size_t docs_per_author = 400;
  std::size_t words_per_doc = 1200;
  std::uint64_t seed = 7;
};

// Each author is an order-2 character Markov chain over [a-z .,] sharing one
// base table; per state, each author boosts its own disjoint set of three
// letters. Documents carry author_id "author<k>".
std::vector<corpus::RawDocument> markov_corpus(const MarkovCorpusOptions& options);

// One document of `n_words` words from author `author` of the chain family.
std::string markov_text(std::size_t author, std::size_t n_words, std::uint64_t seed,
                        std::uint64_t family_seed = 7);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Oracles.
std::size_t count_overlapping(const std::string& haystack, const std::string& needle);
double brute_force_s(const std::vector<double>& same, double d_star);
double brute_force_d(const std::vector<double>& diff, double d_star);
double brute_force_auc(const std::vector<double>& pos, const std::vector<double>& neg);

}  // namespace stylo::fixtures
