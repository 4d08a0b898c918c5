#pragma once
// Subcommand implementations behind the stylo CLI. Each returns a JSON
// summary; the caller decides how to print it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylo/corpus.hpp"
#include "stylo/distance.hpp"
#include "stylo/imitation.hpp"

namespace stylo::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Common {
  bool json_output = false;
  bool force = false;
  std::optional<std::uint64_t> seed;
};

struct CleanOptions {
  fs::path corpus;
  fs::path reports;
  fs::path segments;
  std::string dictionary = "default";  // "default", "none" or a path
  corpus::CleaningConfig cleaning;
  std::size_t block_words = 500;
};
json run_clean(const CleanOptions& o, const Common& c);

struct PairsOptions {
  fs::path segments;
  fs::path out;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::string partition = "all";  // all | construction | evaluation
  double fraction = 0.6;
};
json run_pairs(const PairsOptions& o, const Common& c);

struct ManifestOptions {
  fs::path segments;
  fs::path records;
  fs::path out;
};
json run_embed_manifest(const ManifestOptions& o, const Common& c);

struct BuildOptions {
  fs::path segments;
  fs::path pairs;
  fs::path embeddings;
  fs::path vocab;  // reuse instead of fitting
  fs::path store;
  double alpha = 1.0;
  distance::Metric metric = distance::Metric::cosine;
  std::size_t max_grams = 10'000;
};
json run_build(const BuildOptions& o, const Common& c);

struct VerifyOptions {
  fs::path store;
  fs::path vocab;
  fs::path embeddings;
  fs::path a;
  fs::path b;
  fs::path pairs;
  fs::path segments;
  fs::path out;
};
json run_verify(const VerifyOptions& o, const Common& c);

struct EvaluateOptions {
  fs::path store;
  fs::path vocab;
  fs::path embeddings;
  fs::path pairs;
  fs::path segments;
  fs::path baseline_store;
  fs::path baseline_vocab;
  fs::path out;
  fs::path verdicts_out;
};
json run_evaluate(const EvaluateOptions& o, const Common& c);

struct ImitateOptions {
  fs::path corpus;
  fs::path segments;
  std::vector<std::string> strategies;
  std::size_t sample = 0;
  std::string endpoint;
  std::string model_tag;
  std::size_t max_in_flight = 4;
  int retries = 2;
  int timeout_seconds = 120;
  fs::path offline;
  fs::path prompts_out;
  fs::path records_out;
  fs::path failures_out;
  fs::path store;
  fs::path vocab;
  fs::path embeddings;
  std::string reference = "tail";
  bool reclean = false;
  std::string dictionary = "default";
  corpus::CleaningConfig cleaning;
  fs::path out;
};
json run_imitate(const ImitateOptions& o, const Common& c);

struct DetectOptions {
  std::vector<std::string> groups;  // NAME=FILE
  std::vector<double> thresholds{20.0, 30.0};
  fs::path out;
  fs::path histogram_csv;
  fs::path cdf_csv;
  double bin_width = 5.0;
};
json run_detect(const DetectOptions& o, const Common& c);

struct ReportOptions {
  fs::path store;
  fs::path histogram_csv;
  fs::path cdf_csv;
  double bin_width = 0.02;
  std::vector<std::string> inputs;  // NAME=FILE
  fs::path out;
};
json run_report(const ReportOptions& o, const Common& c);

}  // namespace stylo::cli
