#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylo/verifier.hpp"

namespace stylo::evaluation {

using corpus::PairLabel;

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fn + fp + tn; }
  double accuracy() const;
  double f1() const;  // 0 when 2tp + fp + fn == 0
};

struct EvalReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  ConfusionMatrix confusion;
  double confidence_mean = 0.0;
  double confidence_std = 0.0;  // population standard deviation
  std::size_t n = 0;
};

struct LabeledVerdict {
  verifier::Verdict verdict;
  PairLabel truth;
};

// Same-author score used for ROC AUC: 0.5 + 0.5 * (+confidence when predicted
// same_author, -confidence otherwise).
double same_author_score(const verifier::Verdict& v);

EvalReport evaluate(std::span<const LabeledVerdict> verdicts);

// Mann-Whitney AUC with ties counted 1/2, via midranks in O(n log n).
double roc_auc(std::span<const double> scores_pos, std::span<const double> scores_neg);

inline constexpr double kChiSquare1Critical05 = 3.841;

struct McNemarResult {
  std::size_t n01 = 0;  // A wrong, B right
  std::size_t n10 = 0;  // A right, B wrong
  double chi2 = 0.0;
  bool significant_at_05 = false;
};

McNemarResult mcnemar(std::span<const PairLabel> preds_a, std::span<const PairLabel> preds_b,
                      std::span<const PairLabel> truth);
McNemarResult mcnemar_from_counts(std::size_t n01, std::size_t n10);

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const McNemarResult& m);
// Aligned plain-text table: Accuracy, ROC AUC, F1, Confidence mean±std, McNemar χ².
std::string to_table(const EvalReport& r, const std::optional<McNemarResult>& mcnemar = std::nullopt);

}  // namespace stylo::evaluation
