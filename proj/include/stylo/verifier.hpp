#pragma once

// Training-free verifier: two sorted empirical distance samples (same-author
// and different-author) and a nonparametric comparison against them.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/distance.hpp"
#include "stylo/features.hpp"

namespace stylo::verifier {

using corpus::PairLabel;

struct StoreMeta {
  std::string vocab_hash;
  double alpha = 1.0;
};

class DistanceDistribution {
 public:
  DistanceDistribution() = default;
  // Sorts both samples; throws Error{missing_label_class} if either is empty
  // and Error{non_finite} on NaN, infinite or negative values.
  DistanceDistribution(std::vector<double> same, std::vector<double> diff, distance::Metric metric,
                       StoreMeta meta);

  const std::vector<double>& same_sorted() const { return same_; }
  const std::vector<double>& diff_sorted() const { return diff_; }
  std::size_t n_same() const { return same_.size(); }
  std::size_t n_diff() const { return diff_.size(); }
  distance::Metric metric() const { return metric_; }
  const StoreMeta& meta() const { return meta_; }

 private:
  std::vector<double> same_;
  std::vector<double> diff_;
  distance::Metric metric_ = distance::Metric::cosine;
  StoreMeta meta_;
};

struct LabeledDistance {
  double distance;
  PairLabel label;
};

struct LabeledVectors {
  const features::StyleVector* a;
  const features::StyleVector* b;
  PairLabel label;
};

DistanceDistribution build(std::span<const LabeledDistance> distances, distance::Metric metric,
                           StoreMeta meta = {});
// Computes the pair distances (in parallel) under `metric`, then builds.
DistanceDistribution build(std::span<const LabeledVectors> pairs, distance::Metric metric, StoreMeta meta = {});

struct Scores {
  double s_prob;  // fraction of same-author distances strictly above d*
  double d_prob;  // fraction of different-author distances strictly below d*
};

Scores score(const DistanceDistribution& dist, double d_star);

struct Verdict {
  PairLabel predicted = PairLabel::different_author;
  double s_prob = 0.0;
  double d_prob = 0.0;
  double confidence = 0.0;
  double distance = 0.0;

  bool operator==(const Verdict&) const = default;
};

// same_author iff S > D; confidence |S - D| / max(S, D), 0 when both are 0.
Verdict decide(Scores scores, double d_star);
Verdict classify(const DistanceDistribution& dist, const features::StyleVector& a,
                 const features::StyleVector& b);

// ---- store file ----------------------------------------------------------

inline constexpr int kStoreVersion = 1;

std::string serialize(const DistanceDistribution& dist);
DistanceDistribution deserialize(const std::string& contents);
void save(const DistanceDistribution& dist, const std::filesystem::path& path);
// Throws Error{version_mismatch} or Error{corrupt_store}.
DistanceDistribution load(const std::filesystem::path& path);

// A warning message when the store was built against a different vocabulary.
std::optional<std::string> vocabulary_warning(const DistanceDistribution& dist, const std::string& vocab_hash);

}  // namespace stylo::verifier
