#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "stylo/error.hpp"
#include "stylo/evaluation.hpp"

using namespace stylo;
using namespace stylo::evaluation;

TEST(ConfusionTest, TableCounts) {
  const ConfusionMatrix same{24'373, 627, 628, 24'372};
  EXPECT_NEAR(same.accuracy(), 0.9749, 5e-5);
  const ConfusionMatrix cross{3'651, 1'349, 113, 4'887};
  EXPECT_NEAR(cross.accuracy(), 0.8538, 5e-5);
  EXPECT_DOUBLE_EQ(cross.f1(), 2.0 * 3651 / (2.0 * 3651 + 113 + 1349));
  EXPECT_NEAR(cross.f1(), 0.8333, 5e-4);  // 7302 / 8764 = 0.83318
  EXPECT_EQ(ConfusionMatrix{}.f1(), 0.0);
}

namespace {

LabeledVerdict lv(PairLabel predicted, double confidence, PairLabel truth) {
  verifier::Verdict v;
  v.predicted = predicted;
  v.confidence = confidence;
  return {v, truth};
}

}  // namespace

TEST(EvaluateTest, AllCorrect) {
  std::vector<LabeledVerdict> vs{lv(PairLabel::same_author, 0.9, PairLabel::same_author),
                                 lv(PairLabel::different_author, 0.5, PairLabel::different_author)};
  const auto r = evaluate(vs);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.f1, 1.0);
  EXPECT_EQ(r.roc_auc, 1.0);
  EXPECT_DOUBLE_EQ(r.confidence_mean, 0.7);
  EXPECT_DOUBLE_EQ(r.confidence_std, 0.2);
  EXPECT_THROW(evaluate({}), Error);
}

TEST(EvaluateTest, ReportFieldsMatchConfusion) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LabeledVerdict> vs;
    std::vector<double> pos, neg;
    for (int i = 0; i < 200; ++i) {
      const auto truth = i % 2 ? PairLabel::same_author : PairLabel::different_author;
      const auto pred = u(rng) < 0.7 ? truth : (truth == PairLabel::same_author ? PairLabel::different_author : PairLabel::same_author);
      vs.push_back(lv(pred, std::round(u(rng) * 10) / 10, truth));
      (truth == PairLabel::same_author ? pos : neg).push_back(same_author_score(vs.back().verdict));
    }
    const auto r = evaluate(vs);
    EXPECT_EQ(r.accuracy, r.confusion.accuracy());
    EXPECT_EQ(r.f1, r.confusion.f1());
    EXPECT_EQ(r.n, 200u);
    EXPECT_EQ(r.confusion.total(), 200u);
    EXPECT_NEAR(r.roc_auc, fixtures::brute_force_auc(pos, neg), 1e-12);
  }
}

TEST(AucTest, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.8}, std::vector<double>{0.7, 0.1}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.8, 0.4}, std::vector<double>{0.6, 0.2}), 0.75);
  EXPECT_EQ(roc_auc(std::vector<double>{0.3, 0.5, 0.5}, std::vector<double>{0.5, 0.3, 0.5}), 0.5);
  EXPECT_THROW(roc_auc(std::vector<double>{}, std::vector<double>{0.1}), Error);
}

TEST(AucTest, MatchesEnumerationAndIsRankInvariant) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> len(1, 500);
    std::uniform_int_distribution<int> level(0, trial % 2 ? 5 : 1'000'000);
    std::vector<double> pos(static_cast<std::size_t>(len(rng))), neg(static_cast<std::size_t>(len(rng)));
    for (auto& x : pos) x = level(rng) / 5.0 + 0.3;
    for (auto& x : neg) x = level(rng) / 5.0;
    const double auc = roc_auc(pos, neg);
    EXPECT_NEAR(auc, fixtures::brute_force_auc(pos, neg), 1e-9);
    auto tp = pos, tn = neg;
    for (auto& x : tp) x = std::log1p(x) * 3 + 1;
    for (auto& x : tn) x = std::log1p(x) * 3 + 1;
    EXPECT_NEAR(roc_auc(tp, tn), auc, 1e-12);
  }
}

TEST(McNemarTest, Examples) {
  const auto a = mcnemar_from_counts(10, 2);
  EXPECT_NEAR(a.chi2, 49.0 / 12.0, 1e-12);
  EXPECT_TRUE(a.significant_at_05);
  const auto b = mcnemar_from_counts(5, 5);
  EXPECT_NEAR(b.chi2, 0.1, 1e-12);
  EXPECT_FALSE(b.significant_at_05);
  const auto c = mcnemar_from_counts(0, 0);
  EXPECT_EQ(c.chi2, 0.0);
  EXPECT_FALSE(c.significant_at_05);
}

TEST(McNemarTest, CountsDiscordantPredictionsAndIsAntisymmetric) {
  using L = PairLabel;
  const std::vector<L> truth{L::same_author, L::same_author, L::different_author, L::different_author, L::same_author};
  const std::vector<L> a{L::same_author, L::different_author, L::different_author, L::same_author, L::different_author};
  const std::vector<L> b{L::different_author, L::same_author, L::different_author, L::different_author, L::same_author};
  const auto ab = mcnemar(a, b, truth);
  EXPECT_EQ(ab.n01, 3u);
  EXPECT_EQ(ab.n10, 1u);
  const auto ba = mcnemar(b, a, truth);
  EXPECT_EQ(ba.n01, ab.n10);
  EXPECT_EQ(ba.n10, ab.n01);
  EXPECT_EQ(ba.chi2, ab.chi2);
  EXPECT_THROW(mcnemar(a, std::span<const L>(b).first(3), truth), Error);
}

TEST(ReportTest, TableAndJson) {
  EvalReport r;
  r.accuracy = 0.9749;
  r.roc_auc = 0.99;
  r.f1 = 0.97;
  r.confidence_mean = 0.971;
  r.confidence_std = 0.11;
  const auto table = to_table(r, mcnemar_from_counts(10, 2));
  for (const char* row : {"Accuracy", "ROC AUC", "F1", "Confidence", "McNemar"}) {
    EXPECT_NE(table.find(row), std::string::npos) << row;
  }
  const auto j = to_json(r);
  EXPECT_EQ(j.at("accuracy"), 0.9749);
  EXPECT_TRUE(j.contains("confusion"));
}
