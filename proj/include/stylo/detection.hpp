#pragma once

// Perplexity from externally scored token log-probabilities, and the
// group-wise separability summary (means, histogram, CDF at thresholds).

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace stylo::detection {

struct TokenLogProbs {
  std::string id;
  std::vector<double> logprobs;  // natural log, each <= 0
  std::string scorer_tag;
};

// exp(-mean(logprobs)). Throws Error{empty_sequence}, Error{positive_logprob}
// or Error{non_finite}.
double perplexity(std::span<const double> logprobs);
inline double perplexity(const TokenLogProbs& t) { return perplexity(t.logprobs); }

struct DocPerplexity {
  std::string group;
  std::string id;
  double ppl;
};

struct PerplexityReport {
  std::vector<DocPerplexity> per_doc;             // group order, then input order
  std::map<std::string, double> group_means;
  // threshold -> group -> fraction of documents with ppl <= threshold
  std::map<double, std::map<std::string, double>> cdf_at;
};

using Groups = std::map<std::string, std::vector<TokenLogProbs>>;

PerplexityReport detectability_report(const Groups& groups, std::span<const double> thresholds);

// JSONL of {"id", "scorer_tag", "logprobs"}. An optional first-line header
// {"log_base": "e"} declares the convention; any record or header declaring
// another base is rejected with Error{unsupported_log_base}.
std::vector<TokenLogProbs> load_logprobs(const std::filesystem::path& path);

nlohmann::json to_json(const PerplexityReport& r);

// CSV series for plotting: histogram (bin_lo, bin_hi, group counts...) over
// bins of `bin_width` from 0, and the CDF sampled at `cdf_points`.
std::string histogram_csv(const PerplexityReport& r, double bin_width);
std::string cdf_csv(const PerplexityReport& r, std::span<const double> cdf_points);

}  // namespace stylo::detection
