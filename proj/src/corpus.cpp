#include "stylo/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>

#include "stylo/error.hpp"
#include "stylo/rng.hpp"
#include "stylo/text.hpp"

namespace stylo::corpus {

std::string_view to_string(SourceDomain d) {
  switch (d) {
    case SourceDomain::academic: return "academic";
    case SourceDomain::conversational: return "conversational";
    case SourceDomain::synthetic: return "synthetic";
    case SourceDomain::other: return "other";
  }
  return "other";
}

SourceDomain parse_source_domain(std::string_view s) {
  if (s == "academic") return SourceDomain::academic;
  if (s == "conversational") return SourceDomain::conversational;
  if (s == "synthetic") return SourceDomain::synthetic;
  if (s == "other") return SourceDomain::other;
  throw Error(ErrorKind::malformed_record, "unknown source_domain '" + std::string(s) + "'");
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::too_short: return "too_short";
    case RejectReason::too_numeric: return "too_numeric";
    case RejectReason::too_misspelled: return "too_misspelled";
    case RejectReason::token_dominance: return "token_dominance";
    case RejectReason::too_symbolic: return "too_symbolic";
  }
  return "";
}

std::string_view to_string(Position p) { return p == Position::head ? "head" : "tail"; }

Position parse_position(std::string_view s) {
  if (s == "head") return Position::head;
  if (s == "tail") return Position::tail;
  throw Error(ErrorKind::malformed_record, "unknown segment position '" + std::string(s) + "'");
}

std::string_view to_string(PairLabel l) {
  return l == PairLabel::same_author ? "same_author" : "different_author";
}

PairLabel parse_label(std::string_view s) {
  if (s == "same_author") return PairLabel::same_author;
  if (s == "different_author") return PairLabel::different_author;
  throw Error(ErrorKind::malformed_record, "unknown pair label '" + std::string(s) + "'");
}

std::string Segment::id() const { return doc_id + "#" + std::string(to_string(position)); }
std::string SegmentRef::id() const { return doc_id + "#" + std::string(to_string(position)); }

// ---- dictionary ----------------------------------------------------------

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open dictionary " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = text::trim(line);
    if (!w.empty()) words.insert(text::lowercase(w));
  }
  return Dictionary(std::move(words));
}

std::shared_ptr<const Dictionary> Dictionary::load_default() {
  return std::make_shared<const Dictionary>(load(STYLO_DEFAULT_DICTIONARY));
}

void CleaningConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(max_numeric_ratio) || !in_unit(max_misspell_ratio) ||
      !in_unit(max_token_type_ratio) || !in_unit(max_symbol_ratio)) {
    throw Error(ErrorKind::invalid_config, "cleaning thresholds must lie in [0,1]");
  }
  if (min_words < 1) throw Error(ErrorKind::invalid_config, "min_words must be >= 1");
}

// ---- paratext ------------------------------------------------------------

namespace {

bool is_page_number_line(std::string_view line) {
  static const std::regex page(R"(page\s+\d+(\s+of\s+\d+)?)", std::regex::icase);
  static const std::regex bare(R"(\d{1,4})");
  const auto t = text::trim(line);
  if (t.empty()) return false;
  const std::string s(t);
  return std::regex_match(s, page) || std::regex_match(s, bare);
}

bool is_bibliography_heading(std::string_view line) {
  auto t = text::trim(line);
  if (!t.empty() && t.back() == ':') t.remove_suffix(1);
  const auto lower = text::lowercase(t);
  return lower == "references" || lower == "bibliography" || lower == "works cited";
}

struct Line {
  std::string_view text;
  bool keep = true;
};

using Page = std::vector<Line>;

std::size_t strip_once(std::vector<Page>& pages) {
  std::size_t removed = 0;
  bool cut = false;
  for (auto& page : pages) {
    for (auto& line : page) {
      if (!line.keep) continue;
      if (cut || is_bibliography_heading(line.text)) {
        cut = true;
        line.keep = false;
        ++removed;
      } else if (is_page_number_line(line.text)) {
        line.keep = false;
        ++removed;
      }
    }
  }
  if (pages.size() < 2) return removed;

  auto first_kept = [](Page& p) -> Line* {
    for (auto& l : p) {
      if (l.keep && !text::trim(l.text).empty()) return &l;
    }
    return nullptr;
  };
  auto last_kept = [](Page& p) -> Line* {
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      if (it->keep && !text::trim(it->text).empty()) return &*it;
    }
    return nullptr;
  };
  std::map<std::string_view, int> firsts, lasts;
  for (auto& p : pages) {
    if (auto* l = first_kept(p)) ++firsts[text::trim(l->text)];
    if (auto* l = last_kept(p)) ++lasts[text::trim(l->text)];
  }
  for (auto& p : pages) {
    Line* f = first_kept(p);
    Line* l = last_kept(p);
    if (f && firsts[text::trim(f->text)] >= 2) {
      f->keep = false;
      ++removed;
    }
    if (l && l != f && lasts[text::trim(l->text)] >= 2) {
      l->keep = false;
      ++removed;
    }
  }
  return removed;
}

}  // namespace

ParatextResult strip_paratext(std::string_view input) {
  ParatextResult result{std::string(input), 0};
  for (;;) {
    std::vector<Page> pages;
    std::string_view rest = result.text;
    for (;;) {
      const auto ff = rest.find('\f');
      Page page;
      for (auto l : text::split_lines(rest.substr(0, ff))) page.push_back({l});
      pages.push_back(std::move(page));
      if (ff == std::string_view::npos) break;
      rest.remove_prefix(ff + 1);
    }
    const std::size_t removed = strip_once(pages);
    if (removed == 0) return result;

    std::string out;
    out.reserve(result.text.size());
    for (std::size_t p = 0; p < pages.size(); ++p) {
      if (p > 0) out.push_back('\f');
      bool first = true;
      for (const auto& line : pages[p]) {
        if (!line.keep) continue;
        if (!first) out.push_back('\n');
        out.append(line.text);
        first = false;
      }
    }
    result.text = std::move(out);
    result.lines_removed += removed;
  }
}

// ---- cleaning ------------------------------------------------------------

namespace {

bool is_allowed_punctuation(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U';': case U':': case U'\'': case U'"':
    case U'!': case U'?': case U'(': case U')': case U'-': case U'—':
    // typographic forms of the same marks
    case U'‘': case U'’': case U'“': case U'”': case U'–':
      return true;
    default:
      return false;
  }
}

}  // namespace

CleanedDocument clean(const RawDocument& doc, const CleaningConfig& config) {
  config.validate();
  if (doc.text.empty()) throw Error(ErrorKind::empty_document, "document '" + doc.id + "' has no text");

  CleanedDocument out;
  auto& r = out.report;
  r.doc_id = doc.id;
  if (config.strip_paratext) {
    auto stripped = strip_paratext(doc.text);
    out.text = std::move(stripped.text);
    r.paratext_lines_removed = stripped.lines_removed;
  } else {
    out.text = doc.text;
  }

  const auto cps = text::decode(out.text);
  std::size_t digits = 0;
  std::size_t symbols = 0;
  for (const auto& cp : cps) {
    if (text::is_digit(cp.value)) {
      ++digits;
    } else if (!text::is_letter(cp.value) && !text::is_whitespace(cp.value) &&
               !is_allowed_punctuation(cp.value)) {
      ++symbols;
    }
  }
  if (!cps.empty()) {
    r.numeric_char_ratio = static_cast<double>(digits) / static_cast<double>(cps.size());
    r.symbol_ratio = static_cast<double>(symbols) / static_cast<double>(cps.size());
  }

  const auto spans = text::word_spans(out.text);
  r.word_count = spans.size();
  std::unordered_map<std::string, std::size_t> type_counts;
  std::size_t tokens = 0;
  std::size_t checked = 0;
  std::size_t misspelled = 0;
  for (const auto& w : spans) {
    auto token = text::normalize_token(std::string_view(out.text).substr(w.begin, w.end - w.begin));
    if (token.empty()) continue;
    ++tokens;
    if (config.dictionary && !text::contains_digit(token)) {
      ++checked;
      if (!config.dictionary->contains(token)) ++misspelled;
    }
    ++type_counts[std::move(token)];
  }
  if (tokens > 0) {
    std::size_t max_count = 0;
    for (const auto& [_, c] : type_counts) max_count = std::max(max_count, c);
    r.max_token_type_ratio = static_cast<double>(max_count) / static_cast<double>(tokens);
  }
  if (checked > 0) r.misspell_ratio = static_cast<double>(misspelled) / static_cast<double>(checked);

  if (!(r.word_count > config.min_words)) r.reject_reasons.push_back(RejectReason::too_short);
  if (!(r.numeric_char_ratio < config.max_numeric_ratio)) r.reject_reasons.push_back(RejectReason::too_numeric);
  if (config.dictionary && !(r.misspell_ratio < config.max_misspell_ratio)) {
    r.reject_reasons.push_back(RejectReason::too_misspelled);
  }
  if (!(r.max_token_type_ratio <= config.max_token_type_ratio)) {
    r.reject_reasons.push_back(RejectReason::token_dominance);
  }
  if (!(r.symbol_ratio < config.max_symbol_ratio)) r.reject_reasons.push_back(RejectReason::too_symbolic);
  r.accepted = r.reject_reasons.empty();
  return out;
}

CleaningReport clean_document(const RawDocument& doc, const CleaningConfig& config) {
  return clean(doc, config).report;
}

// ---- segmentation --------------------------------------------------------

std::pair<Segment, Segment> segment_document(const RawDocument& doc, std::size_t block_words) {
  if (block_words == 0) throw Error(ErrorKind::invalid_config, "block_words must be >= 1");
  const auto words = text::word_spans(doc.text);
  if (words.size() < 2 * block_words) {
    throw Error(ErrorKind::ineligible_document,
                "document '" + doc.id + "' has " + std::to_string(words.size()) + " words, needs " +
                    std::to_string(2 * block_words));
  }
  auto slice = [&](std::size_t first, std::size_t last) {
    return doc.text.substr(words[first].begin, words[last].end - words[first].begin);
  };
  const std::size_t n = words.size();
  Segment head{doc.id, Position::head, slice(0, block_words - 1), block_words, doc.author_id};
  Segment tail{doc.id, Position::tail, slice(n - block_words, n - 1), block_words, doc.author_id};
  return {std::move(head), std::move(tail)};
}

// ---- pair construction ---------------------------------------------------

namespace {

struct DocEntry {
  std::string doc_id;
  std::string author;
  std::optional<std::size_t> head;
  std::optional<std::size_t> tail;
};

std::uint64_t choose2(std::uint64_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

// Index r in [0, C(k,2)) -> (i, j), i < j, row-major over i.
std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t r, std::size_t k) {
  std::size_t i = 0;
  while (r >= k - 1 - i) {
    r -= k - 1 - i;
    ++i;
  }
  return {i, i + 1 + static_cast<std::size_t>(r)};
}

SegmentRef ref_of(const Segment& s) { return {s.doc_id, s.position}; }

}  // namespace

std::vector<TextPair> build_pairs(std::span<const Segment> segments, std::size_t n_positive,
                                  std::size_t n_negative, std::uint64_t seed) {
  std::map<std::string, DocEntry> by_doc;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string author = s.author_id ? *s.author_id : "\x01" + s.doc_id;
    auto [it, inserted] = by_doc.try_emplace(s.doc_id, DocEntry{s.doc_id, author, {}, {}});
    auto& e = it->second;
    if (!inserted && e.author != author) {
      throw Error(ErrorKind::malformed_record, "segments of '" + s.doc_id + "' disagree on author_id");
    }
    auto& slot = s.position == Position::head ? e.head : e.tail;
    if (slot) throw Error(ErrorKind::duplicate_id, "duplicate segment " + s.id());
    slot = i;
  }

  // Docs ordered by (author, doc_id) so each author's documents are contiguous.
  std::vector<const DocEntry*> docs;
  docs.reserve(by_doc.size());
  for (const auto& [_, e] : by_doc) docs.push_back(&e);
  std::stable_sort(docs.begin(), docs.end(),
                   [](const DocEntry* a, const DocEntry* b) { return a->author < b->author; });

  struct AuthorBlock {
    std::size_t first_doc;
    std::size_t n_docs;
    std::vector<std::size_t> segs;  // segment indices, ordered by (doc, position)
  };
  std::vector<AuthorBlock> authors;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (authors.empty() || docs[authors.back().first_doc]->author != docs[d]->author) {
      authors.push_back({d, 0, {}});
    }
    auto& a = authors.back();
    ++a.n_docs;
    if (docs[d]->head) a.segs.push_back(*docs[d]->head);
    if (docs[d]->tail) a.segs.push_back(*docs[d]->tail);
  }

  std::vector<TextPair> pairs;
  pairs.reserve(n_positive + n_negative);

  // Positives.
  std::vector<std::uint64_t> pos_prefix{0};
  for (const auto& a : authors) pos_prefix.push_back(pos_prefix.back() + choose2(a.segs.size()));
  if (n_positive > pos_prefix.back()) {
    throw Error(ErrorKind::insufficient_corpus,
                "requested " + std::to_string(n_positive) + " same-author pairs but only " +
                    std::to_string(pos_prefix.back()) + " exist");
  }
  if (n_positive > 0) {
    StageRng rng(seed, "pairs.positive");
    for (const auto idx : rng.sample_distinct(pos_prefix.back(), n_positive)) {
      const auto block = static_cast<std::size_t>(
          std::upper_bound(pos_prefix.begin(), pos_prefix.end(), idx) - pos_prefix.begin() - 1);
      const auto& segs = authors[block].segs;
      const auto [i, j] = unrank_pair(idx - pos_prefix[block], segs.size());
      pairs.push_back({ref_of(segments[segs[i]]), ref_of(segments[segs[j]]), PairLabel::same_author});
    }
  }

  // Negatives over unordered document pairs with distinct authors.
  const std::uint64_t n_docs = docs.size();
  std::uint64_t same_author_doc_pairs = 0;
  std::vector<std::size_t> author_of(docs.size());
  for (std::size_t a = 0; a < authors.size(); ++a) {
    same_author_doc_pairs += choose2(authors[a].n_docs);
    for (std::size_t k = 0; k < authors[a].n_docs; ++k) author_of[authors[a].first_doc + k] = a;
  }
  const std::uint64_t neg_space = choose2(n_docs) - same_author_doc_pairs;
  if (n_negative > neg_space) {
    throw Error(ErrorKind::insufficient_corpus,
                "requested " + std::to_string(n_negative) + " different-author pairs but only " +
                    std::to_string(neg_space) + " document pairs qualify");
  }
  if (n_negative == 0) return pairs;

  std::vector<std::pair<std::size_t, std::size_t>> doc_pairs;
  doc_pairs.reserve(n_negative);
  StageRng rng(seed, "pairs.negative");
  if (2 * static_cast<std::uint64_t>(n_negative) > neg_space) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    all.reserve(neg_space);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      for (std::size_t j = i + 1; j < docs.size(); ++j) {
        if (author_of[i] != author_of[j]) all.emplace_back(i, j);
      }
    }
    for (const auto idx : rng.sample_distinct(all.size(), n_negative)) doc_pairs.push_back(all[idx]);
  } else {
    // Ordered pair (i, j) drawn uniformly among cross-author pairs: i weighted
    // by the number of documents outside its author, j uniform among those.
    std::vector<std::uint64_t> weight_prefix{0};
    for (std::size_t d = 0; d < docs.size(); ++d) {
      weight_prefix.push_back(weight_prefix.back() + n_docs - authors[author_of[d]].n_docs);
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (doc_pairs.size() < n_negative) {
      const auto w = rng.below(weight_prefix.back());
      const auto i = static_cast<std::size_t>(
          std::upper_bound(weight_prefix.begin(), weight_prefix.end(), w) - weight_prefix.begin() - 1);
      const auto& blk = authors[author_of[i]];
      auto j = static_cast<std::size_t>(rng.below(n_docs - blk.n_docs));
      if (j >= blk.first_doc) j += blk.n_docs;
      const auto key = std::minmax(i, j);
      if (seen.insert(key).second) doc_pairs.push_back(key);
    }
  }

  StageRng pick(seed, "pairs.segment");
  auto choose_segment = [&](const DocEntry& d) -> std::size_t {
    if (d.head && d.tail) return pick.below(2) == 0 ? *d.head : *d.tail;
    return d.head ? *d.head : *d.tail;
  };
  for (const auto& [i, j] : doc_pairs) {
    const auto sa = choose_segment(*docs[i]);
    const auto sb = choose_segment(*docs[j]);
    pairs.push_back({ref_of(segments[sa]), ref_of(segments[sb]), PairLabel::different_author});
  }
  return pairs;
}

Partition partition_documents(std::span<const std::string> doc_ids, double construction_fraction,
                              std::uint64_t seed) {
  if (!(construction_fraction >= 0.0 && construction_fraction <= 1.0)) {
    throw Error(ErrorKind::invalid_config, "construction fraction must lie in [0,1]");
  }
  std::vector<std::string> ids(doc_ids.begin(), doc_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  StageRng rng(seed, "pairs.partition");
  rng.shuffle(ids);
  const auto cut = static_cast<std::size_t>(construction_fraction * static_cast<double>(ids.size()));
  Partition p;
  p.construction.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(cut));
  p.evaluation.assign(ids.begin() + static_cast<std::ptrdiff_t>(cut), ids.end());
  std::sort(p.construction.begin(), p.construction.end());
  std::sort(p.evaluation.begin(), p.evaluation.end());
  return p;
}

}  // namespace stylo::corpus
