#pragma once

// Style-imitation harness: author style profiles, the four prompting
// strategies, a pluggable generation endpoint (HTTP or recorded offline
// completions), and verifier-based scoring of the generated texts.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stylo/corpus.hpp"
#include "stylo/features.hpp"
#include "stylo/verifier.hpp"

namespace stylo::imitation {

enum class Strategy { zero_shot, one_shot, few_shot, completion };

inline constexpr Strategy kAllStrategies[] = {Strategy::zero_shot, Strategy::one_shot, Strategy::few_shot,
                                              Strategy::completion};

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

inline constexpr std::string_view kSystemPreamble =
    "Output only the requested content. No prefaces, disclaimers, or explanations.";

// Marks tracked in StyleProfile::punctuation_ratios.
inline constexpr std::string_view kProfileMarks[] = {".", ",", ";", ":", "!", "?", "\xE2\x80\x94", "(", ")", "\""};

struct StyleProfile {
  double avg_sentence_words = 0.0;
  double sentence_words_std = 0.0;  // population
  std::map<std::string, double> punctuation_ratios;  // mark -> count per 1,000 characters
  std::vector<std::pair<std::string, std::size_t>> top_bigrams;  // "w1 w2", count desc then lexicographic
  double type_token_ratio = 0.0;
};

// A sentence ends at . ! ? followed by whitespace (or end of text).
std::vector<std::string> sentences(std::string_view text);
// Paragraphs are maximal runs of non-blank lines.
std::vector<std::string> paragraphs(std::string_view text);

StyleProfile extract_style_profile(std::string_view text);
inline StyleProfile extract_style_profile(const corpus::RawDocument& doc) { return extract_style_profile(doc.text); }

// Fixed plain-text rendering embedded in zero-shot prompts.
std::string render_profile(const StyleProfile& profile);

struct WordRange {
  std::size_t min = 0;
  std::size_t max = 0;
  bool operator==(const WordRange&) const = default;
};

struct PromptSpec {
  std::string source_doc_id;
  Strategy strategy = Strategy::zero_shot;
  std::string system_preamble{kSystemPreamble};
  std::string user_prompt;
  WordRange target_words;

  bool operator==(const PromptSpec&) const = default;
};

struct PromptOptions {
  std::size_t min_half_words = 50;  // completion needs at least twice this
};

// zero_shot uses `profile` when given, else profiles the document itself.
PromptSpec make_prompt(const corpus::RawDocument& doc, Strategy strategy,
                       const std::optional<StyleProfile>& profile = std::nullopt, const PromptOptions& options = {});

struct GenerationRecord {
  std::string source_doc_id;
  Strategy strategy = Strategy::zero_shot;
  std::string model_tag;
  std::string text;

  // Embedding-table key for the generated text.
  std::string id() const;
};

// Anything that turns a prompt into text. Implementations must be safe to
// call from several threads at once.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  // Throws Error{endpoint_failure}.
  virtual std::string complete(const PromptSpec& spec) = 0;
  virtual std::string model_tag() const = 0;
};

struct EndpointConfig {
  std::string url;  // http(s)://host[:port]/path
  std::string model_tag = "endpoint";
  int max_retries = 2;
  std::chrono::milliseconds timeout{120'000};
  std::size_t max_in_flight = 4;
  // Bearer token is read from this environment variable when set.
  std::string credential_env = "STYLO_ENDPOINT_TOKEN";
};

// POST {"system","prompt","max_words"} -> {"text"}; non-2xx or empty text fails.
std::unique_ptr<TextGenerator> make_http_generator(const EndpointConfig& config);

// Calls the generator with retries; the returned text is whitespace-trimmed.
GenerationRecord generate(const PromptSpec& spec, TextGenerator& generator, int max_retries = 0);

// Recorded completions: JSONL {"source_doc_id","strategy","model_tag","text"}.
class OfflineCompletions {
 public:
  static OfflineCompletions load(const std::filesystem::path& path);
  void add(GenerationRecord record);
  // All records for (doc, strategy), optionally restricted to one model tag.
  // Throws Error{missing_offline_record} when none match.
  std::vector<GenerationRecord> lookup(const std::string& source_doc_id, Strategy strategy,
                                       const std::optional<std::string>& model_tag = std::nullopt) const;

 private:
  std::map<std::pair<std::string, Strategy>, std::vector<GenerationRecord>> records_;
};

void write_completions(const std::filesystem::path& path, std::span<const GenerationRecord> records);

struct GenerationFailure {
  std::string source_doc_id;
  Strategy strategy;
  std::string message;
};

struct BatchResult {
  std::vector<GenerationRecord> records;
  std::vector<GenerationFailure> failures;
};

// At most `max_in_flight` concurrent calls; results come back in input order.
BatchResult generate_batch(std::span<const PromptSpec> specs, TextGenerator& generator,
                           std::size_t max_in_flight, int max_retries);
BatchResult generate_offline(std::span<const PromptSpec> specs, const OfflineCompletions& offline,
                             const std::optional<std::string>& model_tag = std::nullopt);

struct MatchCell {
  std::size_t matched = 0;
  std::size_t total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total); }
};

struct ImitationTable {
  std::map<std::string, std::map<Strategy, MatchCell>> cells;  // model_tag -> strategy -> cell

  // rows = model_tag, columns = strategy, cells = match accuracy (blank if no records)
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct ScoringContext {
  const verifier::DistanceDistribution* store = nullptr;
  const features::NGramVocabulary* vocab = nullptr;
  const features::EmbeddingTable* embeddings = nullptr;  // required when the store's alpha > 0
  corpus::Position reference = corpus::Position::tail;
};

// Classifies (reference segment of the source, generated text) for every
// record; "match" means the verifier judged them same-author.
ImitationTable score_imitation(std::span<const GenerationRecord> records,
                               std::span<const corpus::Segment> originals, const ScoringContext& context);

}  // namespace stylo::imitation
