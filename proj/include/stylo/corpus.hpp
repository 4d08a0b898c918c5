#pragma once

// Corpus ingestion: paratext stripping, the five deterministic quality
// filters, head/tail segmentation, and seeded balanced pair construction.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace stylo::corpus {

enum class SourceDomain { academic, conversational, synthetic, other };

std::string_view to_string(SourceDomain d);
SourceDomain parse_source_domain(std::string_view s);

struct RawDocument {
  std::string id;
  std::string text;
  SourceDomain source_domain = SourceDomain::other;
  std::optional<std::string> author_id;
};

// Set of correctly spelled lowercase words.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  // One word per line; blank lines ignored; entries lowercased.
  static Dictionary load(const std::filesystem::path& path);
  static std::shared_ptr<const Dictionary> load_default();

  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct CleaningConfig {
  std::size_t min_words = 500;         // accept iff word_count > min_words
  double max_numeric_ratio = 0.10;     // accept iff ratio <  threshold
  double max_misspell_ratio = 0.05;    // accept iff ratio <  threshold
  double max_token_type_ratio = 0.10;  // accept iff ratio <= threshold
  double max_symbol_ratio = 0.05;      // accept iff ratio <  threshold
  bool strip_paratext = true;
  // Without a dictionary the misspelling filter is skipped (ratio reported 0).
  std::shared_ptr<const Dictionary> dictionary;

  // Throws Error{invalid_config}.
  void validate() const;
};

enum class RejectReason { too_short, too_numeric, too_misspelled, token_dominance, too_symbolic };

std::string_view to_string(RejectReason r);

struct CleaningReport {
  std::string doc_id;
  std::size_t word_count = 0;
  double numeric_char_ratio = 0.0;
  double misspell_ratio = 0.0;
  double max_token_type_ratio = 0.0;
  double symbol_ratio = 0.0;
  std::size_t paratext_lines_removed = 0;
  bool accepted = false;
  std::vector<RejectReason> reject_reasons;

  bool operator==(const CleaningReport&) const = default;
};

struct ParatextResult {
  std::string text;
  std::size_t lines_removed = 0;
};

// Default rules, applied until a fixpoint:
//  - "Page N" / "Page N of M" lines and bare integers of at most 4 digits;
//  - everything from a "References" / "Bibliography" / "Works Cited" line on;
//  - for form-feed paginated text, first/last lines repeated on two or more
//    pages (running headers and footers).
ParatextResult strip_paratext(std::string_view text);

struct CleanedDocument {
  CleaningReport report;
  std::string text;  // paratext-stripped
};

CleanedDocument clean(const RawDocument& doc, const CleaningConfig& config);
CleaningReport clean_document(const RawDocument& doc, const CleaningConfig& config);

enum class Position { head, tail };

std::string_view to_string(Position p);
Position parse_position(std::string_view s);

struct Segment {
  std::string doc_id;
  Position position = Position::head;
  std::string text;
  std::size_t word_count = 0;
  std::optional<std::string> author_id;

  // "<doc_id>#<head|tail>", the key used by the embedding interchange.
  std::string id() const;
};

// First and last block_words words; requires at least 2 * block_words words.
std::pair<Segment, Segment> segment_document(const RawDocument& doc, std::size_t block_words = 500);

struct SegmentRef {
  std::string doc_id;
  Position position = Position::head;

  std::string id() const;
  auto operator<=>(const SegmentRef&) const = default;
};

enum class PairLabel { same_author, different_author };

std::string_view to_string(PairLabel l);
PairLabel parse_label(std::string_view s);

struct TextPair {
  SegmentRef a;
  SegmentRef b;
  PairLabel label = PairLabel::same_author;

  bool operator==(const TextPair&) const = default;
};

// Positives are unordered pairs of distinct segments sharing an author
// (author_id when present, otherwise the document). Negatives are unordered
// document pairs with different authors, one segment drawn from each.
// Output order: positives then negatives, each in sampling-index order.
std::vector<TextPair> build_pairs(std::span<const Segment> segments, std::size_t n_positive,
                                  std::size_t n_negative, std::uint64_t seed);

struct Partition {
  std::vector<std::string> construction;
  std::vector<std::string> evaluation;
};

// Seeded shuffle of the distinct doc ids, first `construction_fraction`
// (rounded down) go to construction. Both lists are returned sorted.
Partition partition_documents(std::span<const std::string> doc_ids, double construction_fraction,
                              std::uint64_t seed);

// ---- file formats --------------------------------------------------------

// Directory of .txt files (stem = id) or JSONL {"id","text","source_domain"?,"author_id"?}.
std::vector<RawDocument> load_corpus(const std::filesystem::path& path);

void write_reports(const std::filesystem::path& path, std::span<const CleaningReport> reports);
std::vector<CleaningReport> read_reports(const std::filesystem::path& path);

void write_segments(const std::filesystem::path& path, std::span<const Segment> segments);
std::vector<Segment> read_segments(const std::filesystem::path& path);

void write_pairs(const std::filesystem::path& path, std::span<const TextPair> pairs);
std::vector<TextPair> read_pairs(const std::filesystem::path& path);

}  // namespace stylo::corpus
