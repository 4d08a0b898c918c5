#include "stylo/imitation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "stylo/error.hpp"
#include "stylo/jsonl.hpp"
#include "stylo/text.hpp"

namespace stylo::imitation {

using nlohmann::json;

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::zero_shot: return "zero_shot";
    case Strategy::one_shot: return "one_shot";
    case Strategy::few_shot: return "few_shot";
    case Strategy::completion: return "completion";
  }
  return "";
}

Strategy parse_strategy(std::string_view s) {
  for (auto st : kAllStrategies) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorKind::malformed_record, "unknown strategy '" + std::string(s) + "'");
}

// ---- text units ----------------------------------------------------------

std::vector<std::string> sentences(std::string_view t) {
  std::vector<std::string> out;
  const auto cps = text::decode(t);
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const auto s = text::trim(t.substr(start, end - start));
    if (text::count_words(s) > 0) out.emplace_back(s);
    start = end;
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i].value;
    if ((c == U'.' || c == U'!' || c == U'?') && (i + 1 == cps.size() || text::is_whitespace(cps[i + 1].value))) {
      flush(cps[i].offset + cps[i].length);
    }
  }
  flush(t.size());
  return out;
}

std::vector<std::string> paragraphs(std::string_view t) {
  std::vector<std::string> out;
  std::string current;
  for (auto line : text::split_lines(t)) {
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (!current.empty()) current.push_back('\n');
    current.append(trimmed);
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

namespace {

std::vector<std::string> normalized_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  for (const auto& w : text::word_spans(s)) {
    auto tok = text::normalize_token(s.substr(w.begin, w.end - w.begin));
    if (!tok.empty()) tokens.push_back(std::move(tok));
  }
  return tokens;
}

const char* mark_name(std::string_view mark) {
  if (mark == ".") return "period";
  if (mark == ",") return "comma";
  if (mark == ";") return "semicolon";
  if (mark == ":") return "colon";
  if (mark == "!") return "exclamation mark";
  if (mark == "?") return "question mark";
  if (mark == "(") return "opening parenthesis";
  if (mark == ")") return "closing parenthesis";
  if (mark == "\"") return "double quote";
  return "em dash";
}

}  // namespace

StyleProfile extract_style_profile(std::string_view t) {
  if (text::count_words(t) == 0) throw Error(ErrorKind::empty_document, "cannot profile an empty document");
  StyleProfile p;

  const auto sents = sentences(t);
  std::vector<double> lengths;
  for (const auto& s : sents) lengths.push_back(static_cast<double>(text::count_words(s)));
  double sum = 0.0;
  for (double l : lengths) sum += l;
  p.avg_sentence_words = sum / static_cast<double>(lengths.size());
  double sq = 0.0;
  for (double l : lengths) sq += (l - p.avg_sentence_words) * (l - p.avg_sentence_words);
  p.sentence_words_std = std::sqrt(sq / static_cast<double>(lengths.size()));

  const auto cps = text::decode(t);
  std::map<std::string, std::size_t> marks;
  for (auto m : kProfileMarks) marks[std::string(m)] = 0;
  for (const auto& cp : cps) {
    switch (cp.value) {
      case U'.': ++marks["."]; break;
      case U',': ++marks[","]; break;
      case U';': ++marks[";"]; break;
      case U':': ++marks[":"]; break;
      case U'!': ++marks["!"]; break;
      case U'?': ++marks["?"]; break;
      case U'—': ++marks["\xE2\x80\x94"]; break;
      case U'(': ++marks["("]; break;
      case U')': ++marks[")"]; break;
      case U'"': case U'“': case U'”': ++marks["\""]; break;
      default: break;
    }
  }
  for (const auto& [m, c] : marks) {
    p.punctuation_ratios[m] = 1000.0 * static_cast<double>(c) / static_cast<double>(cps.size());
  }

  std::size_t n_tokens = 0;
  std::unordered_set<std::string> types;
  std::map<std::string, std::size_t> bigrams;
  for (const auto& s : sents) {
    const auto toks = normalized_tokens(s);
    n_tokens += toks.size();
    types.insert(toks.begin(), toks.end());
    for (std::size_t i = 1; i < toks.size(); ++i) ++bigrams[toks[i - 1] + " " + toks[i]];
  }
  p.type_token_ratio = n_tokens == 0 ? 0.0 : static_cast<double>(types.size()) / static_cast<double>(n_tokens);
  p.top_bigrams.assign(bigrams.begin(), bigrams.end());
  std::stable_sort(p.top_bigrams.begin(), p.top_bigrams.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (p.top_bigrams.size() > 20) p.top_bigrams.resize(20);
  return p;
}

std::string render_profile(const StyleProfile& p) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "Average sentence length: %.1f words (standard deviation %.1f)\n",
                p.avg_sentence_words, p.sentence_words_std);
  out += buf;
  std::snprintf(buf, sizeof buf, "Type-token ratio: %.3f\n", p.type_token_ratio);
  out += buf;
  out += "Punctuation per 1,000 characters:";
  bool first = true;
  for (auto m : kProfileMarks) {
    auto it = p.punctuation_ratios.find(std::string(m));
    std::snprintf(buf, sizeof buf, "%s %s %.2f", first ? "" : ",", mark_name(m),
                  it == p.punctuation_ratios.end() ? 0.0 : it->second);
    out += buf;
    first = false;
  }
  out += "\nMost common word pairs:";
  first = true;
  for (const auto& [bigram, count] : p.top_bigrams) {
    out += (first ? " \"" : ", \"") + bigram + "\" (" + std::to_string(count) + ")";
    first = false;
  }
  out += "\n";
  return out;
}

// ---- prompts -------------------------------------------------------------

namespace {

constexpr WordRange kEssayWords{300, 500};

// Indices of paragraphs ordered by descending word count, earliest first on ties.
std::vector<std::size_t> rank_paragraphs(const std::vector<std::string>& paras) {
  std::vector<std::size_t> order(paras.size());
  std::vector<std::size_t> words(paras.size());
  for (std::size_t i = 0; i < paras.size(); ++i) {
    order[i] = i;
    words[i] = text::count_words(paras[i]);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return words[a] > words[b]; });
  return order;
}

}  // namespace

PromptSpec make_prompt(const corpus::RawDocument& doc, Strategy strategy,
                       const std::optional<StyleProfile>& profile, const PromptOptions& options) {
  PromptSpec spec;
  spec.source_doc_id = doc.id;
  spec.strategy = strategy;
  spec.target_words = kEssayWords;

  switch (strategy) {
    case Strategy::zero_shot: {
      const auto prof = profile ? *profile : extract_style_profile(doc.text);
      spec.user_prompt =
          "Write an original essay of 300 to 500 words on any topic. Imitate the writing style of an author "
          "with the following statistical profile.\n\n" +
          render_profile(prof);
      break;
    }
    case Strategy::one_shot:
    case Strategy::few_shot: {
      const auto paras = paragraphs(doc.text);
      const std::size_t need = strategy == Strategy::one_shot ? 1 : 2;
      if (paras.size() < need) {
        throw Error(ErrorKind::insufficient_paragraphs, "document '" + doc.id + "' has " +
                                                            std::to_string(paras.size()) + " paragraph(s), needs " +
                                                            std::to_string(need));
      }
      const auto order = rank_paragraphs(paras);
      if (strategy == Strategy::one_shot) {
        spec.user_prompt = "Below is a paragraph written by the target author.\n\n" + paras[order[0]] +
                           "\n\nWrite an original essay of 300 to 500 words on a different topic, imitating this "
                           "author's writing style.";
      } else {
        spec.user_prompt = "Below are two paragraphs written by the target author.\n\nParagraph 1:\n" +
                           paras[order[0]] + "\n\nParagraph 2:\n" + paras[order[1]] +
                           "\n\nWrite an original essay of 300 to 500 words imitating this author's writing style.";
      }
      break;
    }
    case Strategy::completion: {
      const auto words = text::word_spans(doc.text);
      if (words.size() < 2 * options.min_half_words || words.size() < 2) {
        throw Error(ErrorKind::too_short_for_completion,
                    "document '" + doc.id + "' has " + std::to_string(words.size()) + " words");
      }
      const std::size_t first_half = words.size() / 2;
      const std::size_t second_half = words.size() - first_half;
      const auto prefix = doc.text.substr(words.front().begin, words[first_half - 1].end - words.front().begin);
      spec.target_words = {second_half, second_half};
      spec.user_prompt = "Continue the following text with a passage of similar length (about " +
                         std::to_string(second_half) +
                         " words) in the same style, without repetition or explicit reference to the original "
                         "passage.\n\n" +
                         prefix;
      break;
    }
  }
  return spec;
}

// ---- generation ----------------------------------------------------------

std::string GenerationRecord::id() const {
  return source_doc_id + "#gen:" + std::string(to_string(strategy)) + ":" + model_tag;
}

GenerationRecord generate(const PromptSpec& spec, TextGenerator& generator, int max_retries) {
  for (int attempt = 0;; ++attempt) {
    try {
      auto text = std::string(text::trim(generator.complete(spec)));
      if (text.empty()) throw Error(ErrorKind::endpoint_failure, "endpoint returned empty text");
      return {spec.source_doc_id, spec.strategy, generator.model_tag(), std::move(text)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::endpoint_failure || attempt >= max_retries) throw;
    }
  }
}

OfflineCompletions OfflineCompletions::load(const std::filesystem::path& path) {
  OfflineCompletions oc;
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    GenerationRecord rec;
    rec.source_doc_id = jsonl::string_field(r, "source_doc_id", line);
    rec.strategy = parse_strategy(jsonl::string_field(r, "strategy", line));
    rec.model_tag = jsonl::string_field(r, "model_tag", line);
    rec.text = jsonl::string_field(r, "text", line);
    oc.add(std::move(rec));
  });
  return oc;
}

void OfflineCompletions::add(GenerationRecord record) {
  records_[{record.source_doc_id, record.strategy}].push_back(std::move(record));
}

std::vector<GenerationRecord> OfflineCompletions::lookup(const std::string& source_doc_id, Strategy strategy,
                                                         const std::optional<std::string>& model_tag) const {
  std::vector<GenerationRecord> out;
  if (auto it = records_.find({source_doc_id, strategy}); it != records_.end()) {
    for (const auto& r : it->second) {
      if (!model_tag || r.model_tag == *model_tag) out.push_back(r);
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::missing_offline_record, "no recorded completion for (" + source_doc_id + ", " +
                                                       std::string(to_string(strategy)) + ")");
  }
  for (auto& r : out) r.text = std::string(text::trim(r.text));
  return out;
}

void write_completions(const std::filesystem::path& path, std::span<const GenerationRecord> records) {
  jsonl::Writer w(path);
  for (const auto& r : records) {
    w.write({{"source_doc_id", r.source_doc_id},
             {"strategy", std::string(to_string(r.strategy))},
             {"model_tag", r.model_tag},
             {"text", r.text}});
  }
}

BatchResult generate_batch(std::span<const PromptSpec> specs, TextGenerator& generator, std::size_t max_in_flight,
                           int max_retries) {
  std::vector<std::optional<GenerationRecord>> done(specs.size());
  std::vector<std::string> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        done[i] = generate(specs[i], generator, max_retries);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  {
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(max_in_flight, specs.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  BatchResult result;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (done[i]) {
      result.records.push_back(std::move(*done[i]));
    } else {
      result.failures.push_back({specs[i].source_doc_id, specs[i].strategy, errors[i]});
    }
  }
  return result;
}

BatchResult generate_offline(std::span<const PromptSpec> specs, const OfflineCompletions& offline,
                             const std::optional<std::string>& model_tag) {
  BatchResult result;
  for (const auto& spec : specs) {
    try {
      for (auto& r : offline.lookup(spec.source_doc_id, spec.strategy, model_tag)) {
        result.records.push_back(std::move(r));
      }
    } catch (const Error& e) {
      result.failures.push_back({spec.source_doc_id, spec.strategy, e.what()});
    }
  }
  return result;
}

// ---- scoring -------------------------------------------------------------

ImitationTable score_imitation(std::span<const GenerationRecord> records, std::span<const corpus::Segment> originals,
                               const ScoringContext& ctx) {
  if (ctx.store == nullptr || ctx.vocab == nullptr) {
    throw Error(ErrorKind::invalid_config, "score_imitation needs a store and a vocabulary");
  }
  std::unordered_map<std::string, const corpus::Segment*> reference;
  for (const auto& s : originals) {
    if (s.position == ctx.reference) reference[s.doc_id] = &s;
  }
  const double alpha = ctx.store->meta().alpha;

  std::vector<features::StyleVector> ref_vectors(records.size());
  std::vector<features::StyleVector> gen_vectors(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = reference.find(records[i].source_doc_id);
    if (it == reference.end()) {
      throw Error(ErrorKind::malformed_record, "no " + std::string(corpus::to_string(ctx.reference)) +
                                                   " segment for source document '" + records[i].source_doc_id + "'");
    }
  }
  const auto n = static_cast<std::int64_t>(records.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const auto* seg = reference.at(records[k].source_doc_id);
      ref_vectors[k] = features::style_vector(seg->text, seg->id(), *ctx.vocab, alpha, ctx.embeddings);
      gen_vectors[k] = features::style_vector(records[k].text, records[k].id(), *ctx.vocab, alpha, ctx.embeddings);
    } catch (...) {
#pragma omp critical(stylo_imitation_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ImitationTable table;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto v = verifier::classify(*ctx.store, ref_vectors[i], gen_vectors[i]);
    auto& cell = table.cells[records[i].model_tag][records[i].strategy];
    ++cell.total;
    cell.matched += v.predicted == corpus::PairLabel::same_author;
  }
  return table;
}

std::string ImitationTable::to_csv() const {
  std::ostringstream out;
  out << "model_tag";
  for (auto s : kAllStrategies) out << ',' << to_string(s);
  out << '\n';
  char buf[32];
  for (const auto& [model, row] : cells) {
    out << model;
    for (auto s : kAllStrategies) {
      out << ',';
      if (auto it = row.find(s); it != row.end() && it->second.total > 0) {
        std::snprintf(buf, sizeof buf, "%.4f", it->second.accuracy());
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

json ImitationTable::to_json() const {
  json j = json::object();
  for (const auto& [model, row] : cells) {
    for (const auto& [s, cell] : row) {
      j[model][std::string(to_string(s))] = {
          {"matched", cell.matched}, {"total", cell.total}, {"accuracy", cell.accuracy()}};
    }
  }
  return j;
}

}  // namespace stylo::imitation
