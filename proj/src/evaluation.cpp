#include "stylo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stylo/error.hpp"

namespace stylo::evaluation {

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double ConfusionMatrix::f1() const {
  const auto denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
}

double same_author_score(const verifier::Verdict& v) {
  const double signed_conf = v.predicted == PairLabel::same_author ? v.confidence : -v.confidence;
  return 0.5 + 0.5 * signed_conf;
}

EvalReport evaluate(std::span<const LabeledVerdict> verdicts) {
  if (verdicts.empty()) throw Error(ErrorKind::empty_input, "nothing to evaluate");
  EvalReport r;
  r.n = verdicts.size();
  std::vector<double> pos;
  std::vector<double> neg;
  double sum = 0.0;
  for (const auto& [v, truth] : verdicts) {
    const bool predicted_same = v.predicted == PairLabel::same_author;
    if (truth == PairLabel::same_author) {
      (predicted_same ? r.confusion.tp : r.confusion.fn)++;
      pos.push_back(same_author_score(v));
    } else {
      (predicted_same ? r.confusion.fp : r.confusion.tn)++;
      neg.push_back(same_author_score(v));
    }
    sum += v.confidence;
  }
  r.accuracy = r.confusion.accuracy();
  r.f1 = r.confusion.f1();
  r.confidence_mean = sum / static_cast<double>(r.n);
  double sq = 0.0;
  for (const auto& lv : verdicts) {
    const double d = lv.verdict.confidence - r.confidence_mean;
    sq += d * d;
  }
  r.confidence_std = std::sqrt(sq / static_cast<double>(r.n));
  // AUC is undefined with a single class present; report 0.5 (chance).
  r.roc_auc = (pos.empty() || neg.empty()) ? 0.5 : roc_auc(pos, neg);
  return r;
}

double roc_auc(std::span<const double> scores_pos, std::span<const double> scores_neg) {
  if (scores_pos.empty() || scores_neg.empty()) {
    throw Error(ErrorKind::empty_class, "ROC AUC needs at least one score per class");
  }
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(scores_pos.size() + scores_neg.size());
  for (double s : scores_pos) items.push_back({s, true});
  for (double s : scores_neg) items.push_back({s, false});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.score < b.score; });

  // Ranks are 1-based; tied scores share the mean rank of their run.
  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::size_t pos_in_run = 0;
    while (j < items.size() && items[j].score == items[i].score) {
      pos_in_run += items[j].positive;
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum_pos += midrank * static_cast<double>(pos_in_run);
    i = j;
  }
  const auto np = static_cast<double>(scores_pos.size());
  const auto nn = static_cast<double>(scores_neg.size());
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

McNemarResult mcnemar_from_counts(std::size_t n01, std::size_t n10) {
  McNemarResult m{n01, n10, 0.0, false};
  if (n01 + n10 > 0) {
    const double diff = std::abs(static_cast<double>(n01) - static_cast<double>(n10)) - 1.0;
    m.chi2 = diff * diff / static_cast<double>(n01 + n10);
    m.significant_at_05 = m.chi2 > kChiSquare1Critical05;
  }
  return m;
}

McNemarResult mcnemar(std::span<const PairLabel> preds_a, std::span<const PairLabel> preds_b,
                      std::span<const PairLabel> truth) {
  if (preds_a.size() != truth.size() || preds_b.size() != truth.size()) {
    throw Error(ErrorKind::length_mismatch, "prediction and truth lists differ in length");
  }
  if (truth.empty()) throw Error(ErrorKind::empty_input, "McNemar needs at least one prediction");
  std::size_t n01 = 0;
  std::size_t n10 = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = preds_a[i] == truth[i];
    const bool b_ok = preds_b[i] == truth[i];
    n01 += !a_ok && b_ok;
    n10 += a_ok && !b_ok;
  }
  return mcnemar_from_counts(n01, n10);
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"n", r.n},
          {"accuracy", r.accuracy},
          {"f1", r.f1},
          {"roc_auc", r.roc_auc},
          {"confusion", {{"tp", r.confusion.tp}, {"fn", r.confusion.fn}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}}},
          {"confidence_mean", r.confidence_mean},
          {"confidence_std", r.confidence_std}};
}

nlohmann::json to_json(const McNemarResult& m) {
  return {{"n01", m.n01}, {"n10", m.n10}, {"chi2", m.chi2}, {"significant_at_05", m.significant_at_05}};
}

std::string to_table(const EvalReport& r, const std::optional<McNemarResult>& mcnemar) {
  char buf[128];
  std::ostringstream out;
  auto row = [&](const char* name, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-22s %s\n", name, value.c_str());
    out << buf;
  };
  auto fmt = [&](const char* f, auto... args) {
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
  };
  row("Metric", "Value");
  row("Accuracy", fmt("%.2f%%", 100.0 * r.accuracy));
  row("ROC AUC", fmt("%.3f", r.roc_auc));
  row("F1", fmt("%.3f", r.f1));
  row("Confidence", fmt("%.1f%% \xC2\xB1 %.1f", 100.0 * r.confidence_mean, 100.0 * r.confidence_std));
  if (mcnemar) {
    row("McNemar chi2", fmt("%.3f%s", mcnemar->chi2, mcnemar->significant_at_05 ? " (p<0.05)" : ""));
  } else {
    row("McNemar chi2", "-");
  }
  row("Pairs", fmt("%zu (TP %zu, FN %zu, FP %zu, TN %zu)", r.n, r.confusion.tp, r.confusion.fn,
                   r.confusion.fp, r.confusion.tn));
  return out.str();
}

}  // namespace stylo::evaluation
