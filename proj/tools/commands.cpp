#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stylo/detection.hpp"
#include "stylo/digest.hpp"
#include "stylo/error.hpp"
#include "stylo/evaluation.hpp"
#include "stylo/features.hpp"
#include "stylo/jsonl.hpp"
#include "stylo/kernels.hpp"
#include "stylo/rng.hpp"
#include "stylo/verifier.hpp"

namespace stylo::cli {

namespace {

void require(const fs::path& p, const char* flag) {
  if (p.empty()) throw Error(ErrorKind::invalid_config, std::string(flag) + " is required");
}

std::uint64_t require_seed(const Common& c) {
  if (!c.seed) throw Error(ErrorKind::invalid_config, "--seed is required for sampling");
  return *c.seed;
}

// Outputs are write-once unless --force.
void claim_output(const fs::path& p, const Common& c) {
  if (p.empty()) return;
  if (fs::exists(p) && !c.force) {
    throw Error(ErrorKind::invalid_config, "refusing to overwrite " + p.string() + " (pass --force)");
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::shared_ptr<const corpus::Dictionary> dictionary_for(const std::string& choice) {
  if (choice == "none") return nullptr;
  if (choice == "default") return corpus::Dictionary::load_default();
  return std::make_shared<const corpus::Dictionary>(corpus::Dictionary::load(choice));
}

fs::path vocab_path(const fs::path& store, const fs::path& explicit_path) {
  return explicit_path.empty() ? fs::path(store.string() + ".vocab.json") : explicit_path;
}

std::map<std::string, const corpus::Segment*> index_segments(const std::vector<corpus::Segment>& segments) {
  std::map<std::string, const corpus::Segment*> by_id;
  for (const auto& s : segments) {
    if (!by_id.emplace(s.id(), &s).second) throw Error(ErrorKind::duplicate_id, "duplicate segment " + s.id());
  }
  return by_id;
}

const corpus::Segment& lookup(const std::map<std::string, const corpus::Segment*>& by_id, const std::string& id) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw Error(ErrorKind::malformed_record, "pair references unknown segment " + id);
  return *it->second;
}

std::optional<features::EmbeddingTable> maybe_embeddings(const fs::path& p, double alpha) {
  if (p.empty()) {
    if (alpha > 0.0) throw Error(ErrorKind::invalid_config, "--embeddings is required when alpha > 0");
    return std::nullopt;
  }
  return features::load_embeddings(p);
}

// TF-IDF in one parallel batch, then fusion with the looked-up embeddings.
std::unordered_map<std::string, features::StyleVector> vectorize_segments(
    const std::vector<const corpus::Segment*>& segs, const features::NGramVocabulary& vocab, double alpha,
    const features::EmbeddingTable* table) {
  std::vector<std::string> texts;
  texts.reserve(segs.size());
  for (const auto* s : segs) texts.push_back(s->text);
  const auto tfidf = kernels::parallel::vectorize(texts, vocab);
  std::unordered_map<std::string, features::StyleVector> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto id = segs[i]->id();
    if (alpha == 0.0) {
      out[id] = features::fuse_tfidf_only(tfidf[i]);
      continue;
    }
    auto it = table->find(id);
    if (it == table->end()) throw Error(ErrorKind::missing_embedding, "no embedding for " + id);
    out[id] = features::fuse(tfidf[i], it->second, alpha);
  }
  return out;
}

std::vector<const corpus::Segment*> referenced(const std::vector<corpus::TextPair>& pairs,
                                               const std::map<std::string, const corpus::Segment*>& by_id) {
  std::map<std::string, const corpus::Segment*> used;
  for (const auto& p : pairs) {
    used[p.a.id()] = &lookup(by_id, p.a.id());
    used[p.b.id()] = &lookup(by_id, p.b.id());
  }
  std::vector<const corpus::Segment*> out;
  for (const auto& [id, s] : used) out.push_back(s);
  return out;
}

json verdict_json(const verifier::Verdict& v) {
  return {{"predicted", corpus::to_string(v.predicted)},
          {"s_prob", v.s_prob},
          {"d_prob", v.d_prob},
          {"confidence", v.confidence},
          {"distance", v.distance}};
}

void warn_vocabulary(const verifier::DistanceDistribution& store, const features::NGramVocabulary& vocab) {
  if (auto w = verifier::vocabulary_warning(store, vocab.hash())) std::cerr << "warning: " << *w << "\n";
}

std::pair<std::string, fs::path> split_named(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    throw Error(ErrorKind::invalid_config, "expected NAME=FILE, got '" + s + "'");
  }
  return {s.substr(0, eq), fs::path(s.substr(eq + 1))};
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

// ---- clean ---------------------------------------------------------------

json run_clean(const CleanOptions& o, const Common& c) {
  require(o.corpus, "--corpus");
  require(o.reports, "--reports");
  require(o.segments, "--segments");
  auto cfg = o.cleaning;
  cfg.dictionary = dictionary_for(o.dictionary);
  cfg.validate();
  if (o.block_words == 0) throw Error(ErrorKind::invalid_config, "--block-words must be positive");
  claim_output(o.reports, c);
  claim_output(o.segments, c);

  const auto docs = corpus::load_corpus(o.corpus);
  if (docs.empty()) throw Error(ErrorKind::empty_corpus, "no documents in " + o.corpus.string());
  const auto cleaned = kernels::parallel::clean(docs, cfg);

  std::vector<corpus::CleaningReport> reports;
  std::vector<corpus::Segment> segments;
  std::map<std::string, std::size_t> reasons;
  std::size_t accepted = 0, ineligible = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    reports.push_back(cleaned[i].report);
    for (auto r : cleaned[i].report.reject_reasons) ++reasons[std::string(corpus::to_string(r))];
    if (!cleaned[i].report.accepted) continue;
    ++accepted;
    auto doc = docs[i];
    doc.text = cleaned[i].text;
    try {
      auto [head, tail] = corpus::segment_document(doc, o.block_words);
      segments.push_back(std::move(head));
      segments.push_back(std::move(tail));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ineligible_document) throw;
      ++ineligible;
    }
  }
  corpus::write_reports(o.reports, reports);
  corpus::write_segments(o.segments, segments);
  return {{"command", "clean"},          {"documents", docs.size()},     {"accepted", accepted},
          {"rejected", docs.size() - accepted}, {"reject_reasons", reasons}, {"ineligible", ineligible},
          {"segments", segments.size()}, {"misspell_filter", cfg.dictionary != nullptr}};
}

// ---- pairs ---------------------------------------------------------------

json run_pairs(const PairsOptions& o, const Common& c) {
  require(o.segments, "--segments");
  require(o.out, "--out");
  const auto seed = require_seed(c);
  claim_output(o.out, c);
  auto segments = corpus::read_segments(o.segments);

  std::size_t n_docs = 0;
  if (o.partition != "all") {
    if (o.partition != "construction" && o.partition != "evaluation") {
      throw Error(ErrorKind::invalid_config, "--partition must be all, construction or evaluation");
    }
    std::vector<std::string> ids;
    for (const auto& s : segments) ids.push_back(s.doc_id);
    const auto part = corpus::partition_documents(ids, o.fraction, seed);
    const auto& keep = o.partition == "construction" ? part.construction : part.evaluation;
    std::erase_if(segments, [&](const auto& s) { return !std::binary_search(keep.begin(), keep.end(), s.doc_id); });
    n_docs = keep.size();
  } else {
    std::vector<std::string> ids;
    for (const auto& s : segments) ids.push_back(s.doc_id);
    std::sort(ids.begin(), ids.end());
    n_docs = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  }
  const auto pairs = corpus::build_pairs(segments, o.positive, o.negative, seed);
  corpus::write_pairs(o.out, pairs);
  return {{"command", "pairs"}, {"partition", o.partition}, {"documents", n_docs},
          {"positive", o.positive}, {"negative", o.negative}, {"seed", seed}};
}

// ---- embed-manifest ------------------------------------------------------

json run_embed_manifest(const ManifestOptions& o, const Common& c) {
  require(o.out, "--out");
  if (o.segments.empty() == o.records.empty()) {
    throw Error(ErrorKind::invalid_config, "give exactly one of --segments or --records");
  }
  claim_output(o.out, c);
  std::size_t n = 0;
  if (!o.segments.empty()) {
    const auto segments = corpus::read_segments(o.segments);
    features::write_embed_manifest(o.out, segments);
    n = segments.size();
  } else {
    jsonl::Writer w(o.out);
    jsonl::for_each(o.records, [&](const json& r, std::size_t line) {
      imitation::GenerationRecord rec;
      rec.source_doc_id = jsonl::string_field(r, "source_doc_id", line);
      rec.strategy = imitation::parse_strategy(jsonl::string_field(r, "strategy", line));
      rec.model_tag = jsonl::string_field(r, "model_tag", line);
      w.write({{"id", rec.id()}, {"text", jsonl::string_field(r, "text", line)}});
      ++n;
    });
  }
  return {{"command", "embed-manifest"}, {"entries", n}};
}

// ---- build ---------------------------------------------------------------

json run_build(const BuildOptions& o, const Common& c) {
  require(o.segments, "--segments");
  require(o.pairs, "--pairs");
  require(o.store, "--store");
  if (!std::isfinite(o.alpha) || o.alpha < 0.0) throw Error(ErrorKind::invalid_config, "--alpha must be >= 0");
  const auto vocab_out = vocab_path(o.store, {});
  claim_output(o.store, c);
  if (o.vocab.empty()) claim_output(vocab_out, c);

  const auto segments = corpus::read_segments(o.segments);
  const auto by_id = index_segments(segments);
  const auto pairs = corpus::read_pairs(o.pairs);
  const auto used = referenced(pairs, by_id);

  features::NGramVocabulary vocab;
  if (o.vocab.empty()) {
    std::vector<std::string> texts;
    for (const auto* s : used) texts.push_back(s->text);
    features::VocabularyOptions vo;
    vo.max_grams = o.max_grams;
    vocab = features::fit_vocabulary(texts, vo);
  } else {
    vocab = features::NGramVocabulary::load(o.vocab);
  }
  const auto table = maybe_embeddings(o.embeddings, o.alpha);
  const auto vectors = vectorize_segments(used, vocab, o.alpha, table ? &*table : nullptr);

  std::vector<verifier::LabeledVectors> labeled;
  labeled.reserve(pairs.size());
  for (const auto& p : pairs) labeled.push_back({&vectors.at(p.a.id()), &vectors.at(p.b.id()), p.label});
  const auto store = verifier::build(labeled, o.metric, {vocab.hash(), o.alpha});
  verifier::save(store, o.store);
  if (o.vocab.empty()) vocab.save(vocab_out);
  const auto envelope = json::parse(verifier::serialize(store));
  return {{"command", "build"},       {"store", o.store.string()},   {"vocab", o.vocab.empty() ? vocab_out.string() : o.vocab.string()},
          {"n_same", store.n_same()}, {"n_diff", store.n_diff()},   {"metric", distance::to_string(o.metric)},
          {"alpha", o.alpha},         {"vocab_size", vocab.size()}, {"vocab_hash", vocab.hash()},
          {"checksum", envelope.at("checksum")}};
}

// ---- verify / evaluate -----------------------------------------------------

namespace {

struct LoadedStore {
  verifier::DistanceDistribution store;
  features::NGramVocabulary vocab;
};

LoadedStore load_store(const fs::path& store, const fs::path& vocab) {
  require(store, "--store");
  LoadedStore s{verifier::load(store), features::NGramVocabulary::load(vocab_path(store, vocab))};
  warn_vocabulary(s.store, s.vocab);
  return s;
}

std::vector<verifier::Verdict> classify_pairs(const LoadedStore& s, const std::vector<corpus::TextPair>& pairs,
                                              const std::map<std::string, const corpus::Segment*>& by_id,
                                              const features::EmbeddingTable* table) {
  const auto used = referenced(pairs, by_id);
  const auto vectors = vectorize_segments(used, s.vocab, s.store.meta().alpha, table);
  std::vector<verifier::Verdict> out(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = verifier::classify(s.store, vectors.at(p.a.id()), vectors.at(p.b.id()));
  }
  return out;
}

}  // namespace

json run_verify(const VerifyOptions& o, const Common& c) {
  const auto s = load_store(o.store, o.vocab);
  const double alpha = s.store.meta().alpha;
  const auto table = maybe_embeddings(o.embeddings, alpha);
  const auto* tp = table ? &*table : nullptr;

  if (!o.a.empty() || !o.b.empty()) {
    require(o.a, "--a");
    require(o.b, "--b");
    // Embedding ids for free-standing files are their stems.
    const auto va = features::style_vector(jsonl::read_file(o.a), o.a.stem().string(), s.vocab, alpha, tp);
    const auto vb = features::style_vector(jsonl::read_file(o.b), o.b.stem().string(), s.vocab, alpha, tp);
    auto j = verdict_json(verifier::classify(s.store, va, vb));
    j["a"] = o.a.string();
    j["b"] = o.b.string();
    return j;
  }
  require(o.pairs, "--pairs (or --a/--b)");
  require(o.segments, "--segments");
  const auto segments = corpus::read_segments(o.segments);
  const auto by_id = index_segments(segments);
  const auto pairs = corpus::read_pairs(o.pairs);
  const auto verdicts = classify_pairs(s, pairs, by_id, tp);
  std::size_t same = 0;
  if (!o.out.empty()) {
    claim_output(o.out, c);
    jsonl::Writer w(o.out);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto j = verdict_json(verdicts[i]);
      j["a"] = pairs[i].a.id();
      j["b"] = pairs[i].b.id();
      w.write(j);
    }
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto j = verdict_json(verdicts[i]);
      j["a"] = pairs[i].a.id();
      j["b"] = pairs[i].b.id();
      std::cout << j.dump() << "\n";
    }
  }
  for (const auto& v : verdicts) same += v.predicted == corpus::PairLabel::same_author;
  return {{"command", "verify"}, {"pairs", pairs.size()}, {"same_author", same}};
}

json run_evaluate(const EvaluateOptions& o, const Common& c) {
  require(o.pairs, "--pairs");
  require(o.segments, "--segments");
  claim_output(o.out, c);
  claim_output(o.verdicts_out, c);
  const auto s = load_store(o.store, o.vocab);
  const auto table = maybe_embeddings(o.embeddings, s.store.meta().alpha);
  const auto segments = corpus::read_segments(o.segments);
  const auto by_id = index_segments(segments);
  const auto pairs = corpus::read_pairs(o.pairs);
  const auto verdicts = classify_pairs(s, pairs, by_id, table ? &*table : nullptr);

  std::vector<evaluation::LabeledVerdict> labeled;
  std::vector<corpus::PairLabel> truth, preds;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    labeled.push_back({verdicts[i], pairs[i].label});
    truth.push_back(pairs[i].label);
    preds.push_back(verdicts[i].predicted);
  }
  const auto report = evaluation::evaluate(labeled);
  std::optional<evaluation::McNemarResult> mc;
  if (!o.baseline_store.empty()) {
    const auto b = load_store(o.baseline_store, o.baseline_vocab);
    std::optional<features::EmbeddingTable> btable;
    if (b.store.meta().alpha > 0.0) btable = table ? table : maybe_embeddings(o.embeddings, b.store.meta().alpha);
    const auto bverdicts = classify_pairs(b, pairs, by_id, btable ? &*btable : nullptr);
    std::vector<corpus::PairLabel> bpreds;
    for (const auto& v : bverdicts) bpreds.push_back(v.predicted);
    mc = evaluation::mcnemar(preds, bpreds, truth);
  }

  json j = evaluation::to_json(report);
  if (mc) j["mcnemar"] = evaluation::to_json(*mc);
  if (!o.out.empty()) jsonl::write_file(o.out, j.dump(2) + "\n");
  if (!o.verdicts_out.empty()) {
    jsonl::Writer w(o.verdicts_out);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto v = verdict_json(verdicts[i]);
      v["a"] = pairs[i].a.id();
      v["b"] = pairs[i].b.id();
      v["truth"] = corpus::to_string(pairs[i].label);
      w.write(v);
    }
  }
  if (!c.json_output) std::cout << evaluation::to_table(report, mc);
  j["command"] = "evaluate";
  return j;
}

// ---- imitate ---------------------------------------------------------------

json run_imitate(const ImitateOptions& o, const Common& c) {
  require(o.corpus, "--corpus");
  if (o.endpoint.empty() == o.offline.empty()) {
    throw Error(ErrorKind::invalid_config, "give exactly one of --endpoint or --offline");
  }
  for (const auto& p : {o.prompts_out, o.records_out, o.failures_out, o.out}) claim_output(p, c);

  std::vector<imitation::Strategy> strategies;
  if (o.strategies.empty()) {
    strategies.assign(std::begin(imitation::kAllStrategies), std::end(imitation::kAllStrategies));
  } else {
    for (const auto& s : o.strategies) strategies.push_back(imitation::parse_strategy(s));
  }

  auto docs = corpus::load_corpus(o.corpus);
  std::vector<corpus::Segment> segments;
  if (!o.segments.empty()) {
    segments = corpus::read_segments(o.segments);
    std::set<std::string> have;
    for (const auto& s : segments) have.insert(s.doc_id);
    std::erase_if(docs, [&](const auto& d) { return !have.count(d.id); });
  }
  if (o.sample > 0 && o.sample < docs.size()) {
    StageRng rng(require_seed(c), "imitate.sample");
    std::vector<corpus::RawDocument> picked;
    for (auto i : rng.sample_distinct(docs.size(), o.sample)) picked.push_back(docs[i]);
    docs = std::move(picked);
  }

  std::vector<imitation::PromptSpec> specs;
  std::vector<imitation::GenerationFailure> failures;
  for (const auto& d : docs) {
    for (auto s : strategies) {
      try {
        specs.push_back(imitation::make_prompt(d, s));
      } catch (const Error& e) {
        failures.push_back({d.id, s, e.what()});
      }
    }
  }
  if (!o.prompts_out.empty()) {
    jsonl::Writer w(o.prompts_out);
    for (const auto& p : specs) {
      w.write({{"source_doc_id", p.source_doc_id},
               {"strategy", imitation::to_string(p.strategy)},
               {"system", p.system_preamble},
               {"prompt", p.user_prompt},
               {"target_words", {p.target_words.min, p.target_words.max}}});
    }
  }

  imitation::BatchResult batch;
  std::optional<std::string> tag_filter;
  if (!o.model_tag.empty()) tag_filter = o.model_tag;
  if (!o.offline.empty()) {
    batch = imitation::generate_offline(specs, imitation::OfflineCompletions::load(o.offline), tag_filter);
  } else {
    imitation::EndpointConfig ec;
    ec.url = o.endpoint;
    if (!o.model_tag.empty()) ec.model_tag = o.model_tag;
    ec.max_retries = o.retries;
    ec.timeout = std::chrono::seconds(o.timeout_seconds);
    ec.max_in_flight = o.max_in_flight;
    auto gen = imitation::make_http_generator(ec);
    batch = imitation::generate_batch(specs, *gen, ec.max_in_flight, ec.max_retries);
  }
  failures.insert(failures.end(), batch.failures.begin(), batch.failures.end());
  if (!o.records_out.empty()) imitation::write_completions(o.records_out, batch.records);
  if (!o.failures_out.empty()) {
    jsonl::Writer w(o.failures_out);
    for (const auto& f : failures) {
      w.write({{"source_doc_id", f.source_doc_id}, {"strategy", imitation::to_string(f.strategy)}, {"error", f.message}});
    }
  }

  json summary = {{"command", "imitate"},
                  {"documents", docs.size()},
                  {"prompts", specs.size()},
                  {"records", batch.records.size()},
                  {"failures", failures.size()}};
  // Generation failures are surfaced after every output has been written.
  auto surface_failures = [&] {
    if (batch.failures.empty()) return;
    const auto kind = o.offline.empty() ? ErrorKind::endpoint_failure : ErrorKind::missing_offline_record;
    throw Error(kind, std::to_string(batch.failures.size()) + " of " + std::to_string(specs.size()) +
                          " generations failed, first: " + batch.failures.front().message);
  };
  if (o.store.empty()) {
    surface_failures();
    return summary;
  }

  require(o.segments, "--segments (reference segments for scoring)");
  auto records = batch.records;
  if (o.reclean) {
    auto cfg = o.cleaning;
    cfg.dictionary = dictionary_for(o.dictionary);
    std::vector<corpus::RawDocument> gen_docs;
    for (const auto& r : records) gen_docs.push_back({r.id(), r.text});
    const auto cleaned = kernels::parallel::clean(gen_docs, cfg);
    std::vector<imitation::GenerationRecord> kept;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!cleaned[i].report.accepted) continue;
      kept.push_back(records[i]);
      kept.back().text = cleaned[i].text;
    }
    summary["reclean_rejected"] = records.size() - kept.size();
    records = std::move(kept);
  }
  const auto s = load_store(o.store, o.vocab);
  const auto table = maybe_embeddings(o.embeddings, s.store.meta().alpha);
  const imitation::ScoringContext ctx{&s.store, &s.vocab, table ? &*table : nullptr, corpus::parse_position(o.reference)};
  const auto result = imitation::score_imitation(records, segments, ctx);
  if (!o.out.empty()) jsonl::write_file(o.out, result.to_csv());
  if (!c.json_output) std::cout << result.to_csv();
  summary["table"] = result.to_json();
  surface_failures();
  return summary;
}

// ---- detect ----------------------------------------------------------------

json run_detect(const DetectOptions& o, const Common& c) {
  if (o.groups.empty()) throw Error(ErrorKind::invalid_config, "at least one --group NAME=FILE is required");
  for (const auto& p : {o.out, o.histogram_csv, o.cdf_csv}) claim_output(p, c);
  detection::Groups groups;
  for (const auto& g : o.groups) {
    const auto [name, path] = split_named(g);
    auto recs = detection::load_logprobs(path);
    auto& dst = groups[name];
    dst.insert(dst.end(), recs.begin(), recs.end());
  }
  const auto report = detection::detectability_report(groups, o.thresholds);
  auto j = detection::to_json(report);
  if (!o.out.empty()) jsonl::write_file(o.out, j.dump(2) + "\n");
  if (!o.histogram_csv.empty()) jsonl::write_file(o.histogram_csv, detection::histogram_csv(report, o.bin_width));
  if (!o.cdf_csv.empty()) {
    double hi = 0;
    for (const auto& d : report.per_doc) hi = std::max(hi, d.ppl);
    std::vector<double> pts;
    for (double t = 0; t <= std::ceil(hi); t += 1.0) pts.push_back(t);
    jsonl::write_file(o.cdf_csv, detection::cdf_csv(report, pts));
  }
  if (!c.json_output) {
    for (const auto& [g, m] : report.group_means) std::cout << g << " mean perplexity " << number(m) << "\n";
    for (const auto& [t, row] : report.cdf_at) {
      std::cout << "ppl <= " << number(t) << ":";
      for (const auto& [g, f] : row) std::cout << " " << g << "=" << number(f);
      std::cout << "\n";
    }
  }
  return {{"command", "detect"}, {"group_means", j.at("group_means")}, {"cdf_at", j.at("cdf_at")},
          {"documents", report.per_doc.size()}};
}

// ---- report ----------------------------------------------------------------

json run_report(const ReportOptions& o, const Common& c) {
  for (const auto& p : {o.out, o.histogram_csv, o.cdf_csv}) claim_output(p, c);
  json summary = {{"command", "report"}};
  if (!o.store.empty()) {
    if (!(o.bin_width > 0.0)) throw Error(ErrorKind::invalid_config, "--bin-width must be positive");
    const auto store = verifier::load(o.store);
    const auto& same = store.same_sorted();
    const auto& diff = store.diff_sorted();
    const double hi = std::max(same.back(), diff.back());
    const auto bins = static_cast<std::size_t>(std::floor(hi / o.bin_width)) + 1;
    if (!o.histogram_csv.empty()) {
      std::vector<std::size_t> hs(bins), hd(bins);
      for (double x : same) ++hs[std::min(bins - 1, static_cast<std::size_t>(x / o.bin_width))];
      for (double x : diff) ++hd[std::min(bins - 1, static_cast<std::size_t>(x / o.bin_width))];
      std::ostringstream out;
      out << "bin_lo,bin_hi,same_author,different_author\n";
      for (std::size_t b = 0; b < bins; ++b) {
        out << number(static_cast<double>(b) * o.bin_width) << ',' << number(static_cast<double>(b + 1) * o.bin_width)
            << ',' << hs[b] << ',' << hd[b] << '\n';
      }
      jsonl::write_file(o.histogram_csv, out.str());
    }
    if (!o.cdf_csv.empty()) {
      std::ostringstream out;
      out << "distance,same_author,different_author\n";
      for (std::size_t b = 0; b <= bins; ++b) {
        const double t = static_cast<double>(b) * o.bin_width;
        const auto fs = std::upper_bound(same.begin(), same.end(), t) - same.begin();
        const auto fd = std::upper_bound(diff.begin(), diff.end(), t) - diff.begin();
        out << number(t) << ',' << number(static_cast<double>(fs) / static_cast<double>(same.size())) << ','
            << number(static_cast<double>(fd) / static_cast<double>(diff.size())) << '\n';
      }
      jsonl::write_file(o.cdf_csv, out.str());
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    summary["store"] = {{"metric", distance::to_string(store.metric())},
                        {"n_same", store.n_same()},
                        {"n_diff", store.n_diff()},
                        {"same_mean", mean(same)},
                        {"diff_mean", mean(diff)}};
  }
  if (!o.inputs.empty()) {
    json bundle = json::object();
    for (const auto& in : o.inputs) {
      const auto [name, path] = split_named(in);
      const auto text = jsonl::read_file(path);
      if (path.extension() == ".json") {
        bundle[name] = json::parse(text);
      } else if (path.extension() == ".jsonl") {
        json rows = json::array();
        jsonl::for_each(path, [&](const json& r, std::size_t) { rows.push_back(r); });
        bundle[name] = rows;
      } else {
        bundle[name] = text;
      }
    }
    if (!o.out.empty()) jsonl::write_file(o.out, bundle.dump(2) + "\n");
    summary["bundled"] = o.inputs.size();
  }
  return summary;
}

}  // namespace stylo::cli
