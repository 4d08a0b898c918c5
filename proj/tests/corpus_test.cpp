#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/text.hpp"

using namespace stylo;
using namespace stylo::corpus;

namespace {

std::shared_ptr<const Dictionary> dictionary() {
  static const auto dict = Dictionary::load_default();
  return dict;
}

CleaningConfig default_config() {
  CleaningConfig c;
  c.dictionary = dictionary();
  return c;
}

bool has_reason(const CleaningReport& r, RejectReason reason) {
  return std::find(r.reject_reasons.begin(), r.reject_reasons.end(), reason) != r.reject_reasons.end();
}

std::string words(std::size_t n, const std::string& w = "word") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w + std::to_string(i);
  return s;
}

}  // namespace

TEST(CleaningTest, CleanEssayAccepted) {
  const auto r = clean_document({"ok", fixtures::english_text(700, 1)}, default_config());
  EXPECT_TRUE(r.accepted) << r.misspell_ratio << " " << r.max_token_type_ratio;
  EXPECT_TRUE(r.reject_reasons.empty());
  EXPECT_EQ(r.word_count, 700u);
  EXPECT_EQ(r.misspell_ratio, 0.0);
}

TEST(CleaningTest, ShortEssayRejectedAsTooShortOnly) {
  const auto r = clean_document({"short", fixtures::english_text(400, 2)}, default_config());
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.reject_reasons, std::vector<RejectReason>{RejectReason::too_short});
}

TEST(CleaningTest, ExactlyMinWordsIsRejected) {
  const auto r = clean_document({"edge", fixtures::english_text(500, 3)}, default_config());
  EXPECT_TRUE(has_reason(r, RejectReason::too_short));
  const auto r2 = clean_document({"edge2", fixtures::english_text(501, 3)}, default_config());
  EXPECT_FALSE(has_reason(r2, RejectReason::too_short));
}

TEST(CleaningTest, NumericRatioMatchesCharacterTally) {
  // 600 words, digits are 10-20% of characters.
  std::string text = fixtures::english_text(540, 4);
  for (int i = 0; i < 60; ++i) text += " 2019" + std::to_string(1000 + i);
  std::size_t digits = 0;
  for (char c : text) digits += c >= '0' && c <= '9';
  const double tally = static_cast<double>(digits) / static_cast<double>(text.size());
  ASSERT_GT(tally, 0.10);
  ASSERT_LT(tally, 0.20);

  const auto r = clean_document({"num", text}, default_config());
  EXPECT_DOUBLE_EQ(r.numeric_char_ratio, tally);
  EXPECT_EQ(r.word_count, 600u);
  EXPECT_EQ(r.reject_reasons, std::vector<RejectReason>{RejectReason::too_numeric});
}

TEST(CleaningTest, SingleRepeatedTokenTriggersDominance) {
  std::string text;
  for (int i = 0; i < 600; ++i) text += i ? " hello" : "hello";
  const auto r = clean_document({"hello", text}, default_config());
  EXPECT_FALSE(r.accepted);
  EXPECT_TRUE(has_reason(r, RejectReason::token_dominance));
  EXPECT_DOUBLE_EQ(r.max_token_type_ratio, 1.0);
}

TEST(CleaningTest, MisspellingsCountedAfterLowercasingAndStripping) {
  // 10% of checked tokens are not words; digit tokens are skipped.
  std::string text = fixtures::english_text(540, 5);
  for (int i = 0; i < 60; ++i) text += " Qzxvv" + std::string(1, static_cast<char>('a' + i % 26)) + ",";
  for (int i = 0; i < 10; ++i) text += " 12ab";
  const auto r = clean_document({"typo", text}, default_config());
  EXPECT_NEAR(r.misspell_ratio, 60.0 / 600.0, 1e-12);
  EXPECT_TRUE(has_reason(r, RejectReason::too_misspelled));
}

TEST(CleaningTest, MisspellFilterSkippedWithoutDictionary) {
  CleaningConfig c;
  const auto r = clean_document({"x", fixtures::markov_text(0, 700, 1)}, c);
  EXPECT_EQ(r.misspell_ratio, 0.0);
  EXPECT_FALSE(has_reason(r, RejectReason::too_misspelled));
}

TEST(CleaningTest, SymbolRatioExcludesAllowedPunctuation) {
  std::string text = fixtures::english_text(600, 6);
  const auto clean_r = clean_document({"p", text + " (a) \"b\" c; d: e! f? g-h \xE2\x80\x94 i'j"}, default_config());
  EXPECT_EQ(clean_r.symbol_ratio, 0.0);

  std::string symbols(static_cast<std::size_t>(0.06 * static_cast<double>(text.size())), '*');
  const auto r = clean_document({"s", text + " " + symbols}, default_config());
  const double expected =
      static_cast<double>(symbols.size()) / static_cast<double>(text::count_code_points(text + " " + symbols));
  EXPECT_DOUBLE_EQ(r.symbol_ratio, expected);
  EXPECT_TRUE(has_reason(r, RejectReason::too_symbolic));
}

TEST(CleaningTest, InvalidThresholdIsConfigError) {
  auto c = default_config();
  c.max_numeric_ratio = 1.5;
  try {
    clean_document({"x", "text"}, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_config);
  }
  c = default_config();
  c.min_words = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(CleaningTest, DeterministicReports) {
  const RawDocument d{"d", "Page 1\n" + fixtures::english_text(800, 8) + "\nReferences\n[1] Smith 2020"};
  EXPECT_EQ(clean_document(d, default_config()), clean_document(d, default_config()));
}

TEST(CleaningTest, LoweringThresholdsNeverAccepts) {
  // Filter monotonicity over a grid of documents and threshold reductions.
  std::vector<RawDocument> docs;
  for (int i = 0; i < 6; ++i) {
    std::string t = fixtures::english_text(520 + 40 * i, 100 + i);
    for (int k = 0; k < i * 12; ++k) t += " 99 %%";
    docs.push_back({"d" + std::to_string(i), t});
  }
  for (const auto& d : docs) {
    const auto base = clean_document(d, default_config());
    for (double scale : {0.9, 0.5, 0.1, 0.0}) {
      auto c = default_config();
      c.max_numeric_ratio *= scale;
      c.max_misspell_ratio *= scale;
      c.max_token_type_ratio *= scale;
      c.max_symbol_ratio *= scale;
      const auto r = clean_document(d, c);
      if (!base.accepted) EXPECT_FALSE(r.accepted);
      EXPECT_GE(r.reject_reasons.size(), base.reject_reasons.size());
    }
  }
}

TEST(ParatextTest, PageHeaderLineRemoved) {
  const auto r = strip_paratext("Page 3 of 12\nThe essay body...");
  EXPECT_EQ(r.text, "The essay body...");
  EXPECT_EQ(r.lines_removed, 1u);
}

TEST(ParatextTest, CleanInputUnchanged) {
  const std::string body = "First line of text.\n\nSecond paragraph here.\n";
  const auto r = strip_paratext(body);
  EXPECT_EQ(r.text, body);
  EXPECT_EQ(r.lines_removed, 0u);
}

TEST(ParatextTest, BibliographyBlockRemoved) {
  const auto r = strip_paratext("Body text.\nReferences\n[1] Smith 2020");
  EXPECT_EQ(r.text, "Body text.");
  EXPECT_EQ(r.lines_removed, 2u);
  EXPECT_EQ(strip_paratext("Body.\n  WORKS CITED:  \nA.\nB.").lines_removed, 3u);
  EXPECT_EQ(strip_paratext("Body.\nbibliography\nA.").text, "Body.");
}

TEST(ParatextTest, BareIntegersAndPageNumbers) {
  const auto r = strip_paratext("12\nText 12 more.\npage 4\n12345\n");
  EXPECT_EQ(r.text, "Text 12 more.\n12345\n");
  EXPECT_EQ(r.lines_removed, 2u);
}

TEST(ParatextTest, RunningHeadersAcrossPagesRemoved) {
  const std::string doc = "My Essay Title\nBody one.\nStudent Name\fMy Essay Title\nBody two.\nStudent Name";
  const auto r = strip_paratext(doc);
  EXPECT_EQ(r.text, "Body one.\fBody two.");
  EXPECT_EQ(r.lines_removed, 4u);
  // Single page: the header/footer heuristic does not apply.
  EXPECT_EQ(strip_paratext("My Essay Title\nBody one.\nMy Essay Title").lines_removed, 0u);
}

TEST(ParatextTest, Idempotent) {
  const std::vector<std::string> inputs = {
      "Page 1\nA\nB\nReferences\nX",
      "H\nH\nbody\nF\fH\nH\nbody2\nF\fH\nH\nbody3\nF",
      "1\n2\n3\ntext",
      "plain",
  };
  for (const auto& in : inputs) {
    const auto once = strip_paratext(in);
    const auto twice = strip_paratext(once.text);
    EXPECT_EQ(twice.text, once.text) << in;
    EXPECT_EQ(twice.lines_removed, 0u);
  }
}

TEST(SegmentTest, MeanLengthDocument) {
  const RawDocument d{"doc", words(1561)};
  const auto [head, tail] = segment_document(d);
  EXPECT_EQ(head.word_count, 500u);
  EXPECT_EQ(tail.word_count, 500u);
  EXPECT_EQ(text::word_spans(head.text).size(), 500u);
  EXPECT_TRUE(head.text.starts_with("word0 "));
  EXPECT_TRUE(head.text.ends_with(" word499"));
  // Words 1062..1561 (1-based) are indices 1061..1560.
  EXPECT_TRUE(tail.text.starts_with("word1061 "));
  EXPECT_TRUE(tail.text.ends_with(" word1560"));
  EXPECT_EQ(head.id(), "doc#head");
  EXPECT_EQ(tail.id(), "doc#tail");
}

TEST(SegmentTest, ExactlyTwoBlocksDoNotOverlap) {
  const auto [head, tail] = segment_document({"d", words(1000)});
  EXPECT_TRUE(head.text.ends_with(" word499"));
  EXPECT_TRUE(tail.text.starts_with("word500 "));
  std::set<std::string> h, t;
  for (const auto& w : text::word_spans(head.text)) h.insert(head.text.substr(w.begin, w.end - w.begin));
  for (const auto& w : text::word_spans(tail.text)) t.insert(tail.text.substr(w.begin, w.end - w.begin));
  for (const auto& w : h) EXPECT_EQ(t.count(w), 0u);
}

TEST(SegmentTest, TooShortIsIneligible) {
  try {
    segment_document({"d", words(999)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ineligible_document);
  }
}

namespace {

std::vector<Segment> segments_for(std::size_t n_docs, bool with_authors = false, std::size_t authors = 2) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::optional<std::string> author;
    if (with_authors) author = "au" + std::to_string(i % authors);
    const auto id = "doc" + std::to_string(i);
    segs.push_back({id, Position::head, "h" + std::to_string(i), 1, author});
    segs.push_back({id, Position::tail, "t" + std::to_string(i), 1, author});
  }
  return segs;
}

std::size_t count_label(const std::vector<TextPair>& pairs, PairLabel l) {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [&](const auto& p) { return p.label == l; }));
}

}  // namespace

TEST(PairsTest, SingleDocumentSinglePositive) {
  const auto pairs = build_pairs(segments_for(1), 1, 0, 42);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].label, PairLabel::same_author);
  EXPECT_EQ(pairs[0].a, (SegmentRef{"doc0", Position::head}));
  EXPECT_EQ(pairs[0].b, (SegmentRef{"doc0", Position::tail}));
}

TEST(PairsTest, SeededRunsAreIdentical) {
  const auto segs = segments_for(3);
  EXPECT_EQ(build_pairs(segs, 2, 3, 9), build_pairs(segs, 2, 3, 9));
  auto reversed = segs;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(build_pairs(reversed, 2, 3, 9), build_pairs(segs, 2, 3, 9));
}

TEST(PairsTest, BalanceAndInvariants) {
  for (bool authors : {false, true}) {
    const auto segs = segments_for(200, authors, 5);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto pairs = build_pairs(segs, 150, 170, seed);
      EXPECT_EQ(count_label(pairs, PairLabel::same_author), 150u);
      EXPECT_EQ(count_label(pairs, PairLabel::different_author), 170u);
      std::set<std::pair<SegmentRef, SegmentRef>> unique;
      for (const auto& p : pairs) {
        EXPECT_NE(p.a, p.b);
        unique.insert(std::minmax(p.a, p.b));
        const auto da = std::stoul(p.a.doc_id.substr(3));
        const auto db = std::stoul(p.b.doc_id.substr(3));
        const bool same_author = authors ? da % 5 == db % 5 : da == db;
        EXPECT_EQ(p.label == PairLabel::same_author, same_author);
      }
      EXPECT_EQ(unique.size(), pairs.size());
    }
  }
}

TEST(PairsTest, ExhaustiveNegativeRequestUsesEveryDocumentPair) {
  const auto pairs = build_pairs(segments_for(4), 0, 6, 5);
  std::set<std::pair<std::string, std::string>> docs;
  for (const auto& p : pairs) docs.insert(std::minmax(p.a.doc_id, p.b.doc_id));
  EXPECT_EQ(docs.size(), 6u);
}

TEST(PairsTest, InsufficientCorpus) {
  auto expect_insufficient = [](auto&& fn) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::insufficient_corpus);
    }
  };
  expect_insufficient([] { build_pairs(segments_for(3), 4, 0, 1); });
  expect_insufficient([] { build_pairs(segments_for(1), 0, 1, 1); });
  expect_insufficient([] { build_pairs(segments_for(3), 0, 4, 1); });
  // Two documents by one author: no different-author pair exists.
  expect_insufficient([] { build_pairs(segments_for(2, true, 1), 0, 1, 1); });
}

TEST(PairsTest, PartitionIsSeededAndDisjoint) {
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("d" + std::to_string(i));
  const auto p = partition_documents(ids, 0.6, 11);
  EXPECT_EQ(p.construction.size(), 60u);
  EXPECT_EQ(p.evaluation.size(), 40u);
  std::set<std::string> all(p.construction.begin(), p.construction.end());
  for (const auto& e : p.evaluation) EXPECT_TRUE(all.insert(e).second);
  const auto again = partition_documents(ids, 0.6, 11);
  EXPECT_EQ(again.construction, p.construction);
  EXPECT_NE(partition_documents(ids, 0.6, 12).construction, p.construction);
}

TEST(CorpusIoTest, JsonlAndDirectoryLoaders) {
  fixtures::TempDir dir;
  {
    std::ofstream out(dir / "c.jsonl");
    out << R"({"id":"a","text":"hello there","source_domain":"academic","author_id":"x"})" << "\n\n"
        << R"({"id":"b","text":"second"})" << "\n";
  }
  const auto docs = load_corpus(dir / "c.jsonl");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].source_domain, SourceDomain::academic);
  EXPECT_EQ(docs[0].author_id, std::optional<std::string>("x"));
  EXPECT_FALSE(docs[1].author_id);

  std::filesystem::create_directories(dir / "txt");
  std::ofstream(dir / "txt" / "z.txt") << "zed";
  std::ofstream(dir / "txt" / "m.txt") << "em";
  std::ofstream(dir / "txt" / "ignore.md") << "no";
  const auto dd = load_corpus(dir / "txt");
  ASSERT_EQ(dd.size(), 2u);
  EXPECT_EQ(dd[0].id, "m");
  EXPECT_EQ(dd[1].text, "zed");

  {
    std::ofstream out(dir / "dup.jsonl");
    out << R"({"id":"a","text":"x"})" << "\n" << R"({"id":"a","text":"y"})" << "\n";
  }
  EXPECT_THROW(load_corpus(dir / "dup.jsonl"), Error);
}

TEST(CorpusIoTest, PairsAndSegmentsRoundTrip) {
  fixtures::TempDir dir;
  const auto segs = segments_for(5, true);
  write_segments(dir / "s.jsonl", segs);
  const auto back = read_segments(dir / "s.jsonl");
  ASSERT_EQ(back.size(), segs.size());
  EXPECT_EQ(back[3].id(), segs[3].id());
  EXPECT_EQ(back[3].author_id, segs[3].author_id);

  const auto pairs = build_pairs(segs, 4, 4, 3);
  write_pairs(dir / "p.jsonl", pairs);
  EXPECT_EQ(read_pairs(dir / "p.jsonl"), pairs);

  const auto r = clean_document({"d", fixtures::english_text(600, 1)}, default_config());
  const std::vector<CleaningReport> reports{r};
  write_reports(dir / "r.jsonl", reports);
  EXPECT_EQ(read_reports(dir / "r.jsonl"), reports);
}
