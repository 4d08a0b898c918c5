#include <gtest/gtest.h>

#include <omp.h>

#include "fixtures.hpp"
#include "stylo/error.hpp"
#include "stylo/kernels.hpp"

using namespace stylo;

namespace {

std::vector<std::string> mixed_texts() {
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) texts.push_back(fixtures::english_text(150, 500 + i));
  for (int i = 0; i < 20; ++i) texts.push_back(fixtures::markov_text(i % 3, 150, 900 + i));
  texts.push_back("\xC3\x89T\xC3\x89 caf\xC3\xA9 \xD0\x9F\xD1\x80\xD0\xB8\xD0\xB2\xD0\xB5\xD1\x82 \xF0\x9F\x98\x80\xF0\x9F\x98\x80\xF0\x9F\x98\x80 \xE4\xB8\xAD\xE6\x96\x87\xE5\xAD\x97");
  texts.push_back("");
  texts.push_back("ab");
  return texts;
}

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

}  // namespace

TEST_P(ThreadCounts, FitVocabularyMatchesSerial) {
  const auto texts = mixed_texts();
  for (std::size_t cap : {10u, 1000u, 10000u}) {
    features::VocabularyOptions opts;
    opts.max_grams = cap;
    EXPECT_EQ(kernels::parallel::fit_vocabulary(texts, opts), kernels::serial::fit_vocabulary(texts, opts));
  }
  features::VocabularyOptions cased;
  cased.lowercase = false;
  cased.n_min = 2;
  cased.n_max = 7;
  EXPECT_EQ(kernels::parallel::fit_vocabulary(texts, cased), kernels::serial::fit_vocabulary(texts, cased));
}

TEST_P(ThreadCounts, VectorizeMatchesSerial) {
  const auto texts = mixed_texts();
  const auto vocab = kernels::serial::fit_vocabulary(texts, {});
  const auto p = kernels::parallel::vectorize(texts, vocab);
  const auto s = kernels::serial::vectorize(texts, vocab);
  ASSERT_EQ(p.size(), s.size());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], s[i]) << i;
}

TEST_P(ThreadCounts, PairDistancesMatchSerial) {
  const auto texts = mixed_texts();
  const auto vocab = kernels::serial::fit_vocabulary(texts, {});
  std::vector<features::StyleVector> vecs;
  for (const auto& t : kernels::serial::vectorize(texts, vocab)) {
    if (t.nnz() > 0) vecs.push_back(features::fuse_tfidf_only(t));
  }
  std::vector<kernels::IndexPair> pairs;
  for (std::uint32_t a = 0; a < vecs.size(); ++a) {
    for (std::uint32_t b = a + 1; b < vecs.size(); b += 3) pairs.push_back({a, b});
  }
  for (auto m : {distance::Metric::cosine, distance::Metric::euclidean}) {
    EXPECT_EQ(kernels::parallel::pair_distances(vecs, pairs, m), kernels::serial::pair_distances(vecs, pairs, m));
  }
}

TEST_P(ThreadCounts, PairDistancesReportFirstError) {
  std::vector<features::StyleVector> vecs{features::fuse_tfidf_only({{0}, {1.0}, 0}),
                                          features::fuse_tfidf_only({})};
  std::vector<kernels::IndexPair> pairs{{0, 0}, {0, 1}, {1, 1}};
  try {
    kernels::parallel::pair_distances(vecs, pairs, distance::Metric::cosine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::zero_vector);
  }
}

TEST_P(ThreadCounts, CleanMatchesSerial) {
  std::vector<corpus::RawDocument> docs;
  for (int i = 0; i < 30; ++i) {
    std::string t = "Page " + std::to_string(i) + "\n" + fixtures::english_text(300 + 20 * i, 70 + i);
    if (i % 4 == 0) t += "\nReferences\nA. B. 2001";
    if (i % 5 == 0) t += " 1234 5678 ### $$$";
    docs.push_back({"d" + std::to_string(i), t});
  }
  corpus::CleaningConfig cfg;
  cfg.dictionary = corpus::Dictionary::load_default();
  const auto p = kernels::parallel::clean(docs, cfg);
  const auto s = kernels::serial::clean(docs, cfg);
  ASSERT_EQ(p.size(), s.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p[i].report, s[i].report);
    EXPECT_EQ(p[i].text, s[i].text);
  }
}

INSTANTIATE_TEST_SUITE_P(Threads, ThreadCounts, ::testing::Values(1, 2, 4, 7));
