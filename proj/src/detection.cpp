#include "stylo/detection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stylo/error.hpp"
#include "stylo/jsonl.hpp"

namespace stylo::detection {

using nlohmann::json;

double perplexity(std::span<const double> logprobs) {
  if (logprobs.empty()) throw Error(ErrorKind::empty_sequence, "perplexity of an empty token sequence");
  double sum = 0.0;
  for (double lp : logprobs) {
    if (!std::isfinite(lp)) throw Error(ErrorKind::non_finite, "non-finite token log-probability");
    if (lp > 0.0) throw Error(ErrorKind::positive_logprob, "token log-probability above 0");
    sum += lp;
  }
  return std::exp(-sum / static_cast<double>(logprobs.size()));
}

PerplexityReport detectability_report(const Groups& groups, std::span<const double> thresholds) {
  PerplexityReport r;
  std::map<std::string, std::vector<double>> sorted;
  for (const auto& [group, docs] : groups) {
    if (docs.empty()) throw Error(ErrorKind::empty_group, "group '" + group + "' has no documents");
    auto& values = sorted[group];
    double sum = 0.0;
    for (const auto& d : docs) {
      const double p = perplexity(d);
      r.per_doc.push_back({group, d.id, p});
      values.push_back(p);
      sum += p;
    }
    r.group_means[group] = sum / static_cast<double>(docs.size());
    std::sort(values.begin(), values.end());
  }
  for (double t : thresholds) {
    auto& row = r.cdf_at[t];
    for (const auto& [group, values] : sorted) {
      const auto at_most = std::upper_bound(values.begin(), values.end(), t) - values.begin();
      row[group] = static_cast<double>(at_most) / static_cast<double>(values.size());
    }
  }
  return r;
}

std::vector<TokenLogProbs> load_logprobs(const std::filesystem::path& path) {
  std::vector<TokenLogProbs> out;
  auto check_base = [&](const json& r, std::size_t line) {
    if (auto it = r.find("log_base"); it != r.end()) {
      const auto base = it->is_string() ? it->get<std::string>() : it->dump();
      if (base != "e" && base != "ln") {
        throw Error(ErrorKind::unsupported_log_base,
                    path.string() + ":" + std::to_string(line) + ": log_base '" + base +
                        "' (only natural-log files are accepted)");
      }
    }
  };
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    check_base(r, line);
    if (!r.contains("logprobs")) {
      if (out.empty() && r.contains("log_base")) return;  // header
      throw Error(ErrorKind::malformed_record, path.string() + ":" + std::to_string(line) + ": missing logprobs");
    }
    TokenLogProbs t;
    t.id = jsonl::string_field(r, "id", line);
    if (auto it = r.find("scorer_tag"); it != r.end() && it->is_string()) t.scorer_tag = it->get<std::string>();
    try {
      t.logprobs = r.at("logprobs").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::malformed_record, path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
    out.push_back(std::move(t));
  });
  return out;
}

json to_json(const PerplexityReport& r) {
  json per_doc = json::array();
  for (const auto& d : r.per_doc) per_doc.push_back({{"group", d.group}, {"id", d.id}, {"ppl", d.ppl}});
  json cdf = json::array();
  for (const auto& [t, row] : r.cdf_at) cdf.push_back({{"threshold", t}, {"fraction", row}});
  return {{"per_doc", per_doc}, {"group_means", r.group_means}, {"cdf_at", cdf}};
}

std::string histogram_csv(const PerplexityReport& r, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorKind::invalid_config, "histogram bin width must be positive");
  double max_ppl = 0.0;
  for (const auto& d : r.per_doc) max_ppl = std::max(max_ppl, d.ppl);
  const auto n_bins = static_cast<std::size_t>(std::floor(max_ppl / bin_width)) + 1;
  std::map<std::string, std::vector<std::size_t>> counts;
  for (const auto& [g, _] : r.group_means) counts[g].assign(n_bins, 0);
  for (const auto& d : r.per_doc) {
    const auto bin = std::min(n_bins - 1, static_cast<std::size_t>(std::floor(d.ppl / bin_width)));
    ++counts[d.group][bin];
  }
  std::ostringstream out;
  out << "bin_lo,bin_hi";
  for (const auto& [g, _] : counts) out << ',' << g;
  out << '\n';
  for (std::size_t b = 0; b < n_bins; ++b) {
    out << static_cast<double>(b) * bin_width << ',' << static_cast<double>(b + 1) * bin_width;
    for (const auto& [_, c] : counts) out << ',' << c[b];
    out << '\n';
  }
  return out.str();
}

std::string cdf_csv(const PerplexityReport& r, std::span<const double> cdf_points) {
  std::map<std::string, std::vector<double>> sorted;
  for (const auto& d : r.per_doc) sorted[d.group].push_back(d.ppl);
  for (auto& [_, v] : sorted) std::sort(v.begin(), v.end());
  std::ostringstream out;
  out.precision(17);
  out << "threshold";
  for (const auto& [g, _] : sorted) out << ',' << g;
  out << '\n';
  for (double t : cdf_points) {
    out << t;
    for (const auto& [_, v] : sorted) {
      const auto k = std::upper_bound(v.begin(), v.end(), t) - v.begin();
      out << ',' << static_cast<double>(k) / static_cast<double>(v.size());
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stylo::detection
