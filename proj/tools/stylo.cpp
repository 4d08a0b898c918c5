#include <omp.h>

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "stylo/error.hpp"

using namespace stylo;
using namespace stylo::cli;

namespace {

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

void add_cleaning_options(CLI::App* cmd, corpus::CleaningConfig& cfg, std::string& dictionary) {
  cmd->add_option("--min-words", cfg.min_words, "Accept documents with more words than this");
  cmd->add_option("--max-numeric", cfg.max_numeric_ratio, "Numeric character ratio must stay below");
  cmd->add_option("--max-misspell", cfg.max_misspell_ratio, "Misspelled token ratio must stay below");
  cmd->add_option("--max-token-type", cfg.max_token_type_ratio, "Most frequent token share may not exceed");
  cmd->add_option("--max-symbol", cfg.max_symbol_ratio, "Symbol character ratio must stay below");
  cmd->add_option("--dictionary", dictionary, "Word list path, 'default' (bundled) or 'none' (skip misspelling filter)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylo: training-free authorship verification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI config file; command-line flags override it");

  Common common;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_flag("--json", common.json_output, "Print a one-line JSON summary");
  app.add_flag("--force", common.force, "Overwrite existing output files");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every sampling stage");
  app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)")->check(CLI::NonNegativeNumber);

  CleanOptions clean;
  bool no_paratext = false;
  auto* c_clean = app.add_subcommand("clean", "Strip paratext, filter, and segment a corpus");
  c_clean->add_option("--corpus", clean.corpus, "Directory of .txt files or JSONL corpus")->required();
  c_clean->add_option("--reports", clean.reports, "Output JSONL of cleaning reports")->required();
  c_clean->add_option("--segments", clean.segments, "Output JSONL of head/tail segments")->required();
  c_clean->add_option("--block-words", clean.block_words, "Words per segment");
  c_clean->add_flag("--no-paratext", no_paratext, "Do not strip page numbers, headers or bibliographies");
  add_cleaning_options(c_clean, clean.cleaning, clean.dictionary);

  PairsOptions pairs;
  auto* c_pairs = app.add_subcommand("pairs", "Sample balanced labeled segment pairs");
  c_pairs->add_option("--segments", pairs.segments)->required();
  c_pairs->add_option("--out", pairs.out)->required();
  c_pairs->add_option("--positive", pairs.positive, "Same-author pairs")->required();
  c_pairs->add_option("--negative", pairs.negative, "Different-author pairs")->required();
  c_pairs->add_option("--partition", pairs.partition, "all | construction | evaluation (document-level split)");
  c_pairs->add_option("--fraction", pairs.fraction, "Construction share of documents for --partition");

  ManifestOptions manifest;
  auto* c_manifest = app.add_subcommand("embed-manifest", "List texts the embedding sidecar must embed");
  c_manifest->add_option("--segments", manifest.segments);
  c_manifest->add_option("--records", manifest.records, "Generated-text records instead of segments");
  c_manifest->add_option("--out", manifest.out)->required();

  BuildOptions build;
  std::string build_metric = "cosine";
  auto* c_build = app.add_subcommand("build", "Build a verifier store from construction pairs");
  c_build->add_option("--segments", build.segments)->required();
  c_build->add_option("--pairs", build.pairs)->required();
  c_build->add_option("--store", build.store, "Output store; the vocabulary goes to <store>.vocab.json")->required();
  c_build->add_option("--embeddings", build.embeddings, "Embedding JSONL (required when alpha > 0)");
  c_build->add_option("--vocab", build.vocab, "Reuse an existing vocabulary instead of fitting one");
  c_build->add_option("--alpha", build.alpha, "Embedding block weight; 0 = TF-IDF only");
  c_build->add_option("--metric", build_metric, "cosine | euclidean");
  c_build->add_option("--max-grams", build.max_grams, "Vocabulary size cap");

  VerifyOptions verify;
  auto* c_verify = app.add_subcommand("verify", "Classify two texts or a pair file");
  c_verify->add_option("--store", verify.store)->required();
  c_verify->add_option("--vocab", verify.vocab);
  c_verify->add_option("--embeddings", verify.embeddings);
  c_verify->add_option("--a", verify.a, "First text file");
  c_verify->add_option("--b", verify.b, "Second text file");
  c_verify->add_option("--pairs", verify.pairs);
  c_verify->add_option("--segments", verify.segments);
  c_verify->add_option("--out", verify.out, "Verdict JSONL (default: stdout)");

  EvaluateOptions evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "Score a store on labeled held-out pairs");
  c_eval->add_option("--store", evaluate.store)->required();
  c_eval->add_option("--vocab", evaluate.vocab);
  c_eval->add_option("--embeddings", evaluate.embeddings);
  c_eval->add_option("--pairs", evaluate.pairs)->required();
  c_eval->add_option("--segments", evaluate.segments)->required();
  c_eval->add_option("--baseline-store", evaluate.baseline_store, "Second system for McNemar's test");
  c_eval->add_option("--baseline-vocab", evaluate.baseline_vocab);
  c_eval->add_option("--out", evaluate.out, "EvalReport JSON");
  c_eval->add_option("--verdicts-out", evaluate.verdicts_out);

  ImitateOptions imitate;
  auto* c_imitate = app.add_subcommand("imitate", "Generate style imitations and score them");
  c_imitate->add_option("--corpus", imitate.corpus, "Source documents")->required();
  c_imitate->add_option("--segments", imitate.segments, "Reference segments (restricts sources, needed for scoring)");
  c_imitate->add_option("--strategy", imitate.strategies, "zero_shot | one_shot | few_shot | completion (repeatable)");
  c_imitate->add_option("--sample", imitate.sample, "Seeded sample of source documents");
  c_imitate->add_option("--endpoint", imitate.endpoint, "Generation endpoint URL");
  c_imitate->add_option("--model-tag", imitate.model_tag, "Endpoint tag, or offline filter");
  c_imitate->add_option("--max-in-flight", imitate.max_in_flight);
  c_imitate->add_option("--retries", imitate.retries);
  c_imitate->add_option("--timeout", imitate.timeout_seconds, "Per-request timeout in seconds");
  c_imitate->add_option("--offline", imitate.offline, "Recorded completions JSONL");
  c_imitate->add_option("--prompts-out", imitate.prompts_out);
  c_imitate->add_option("--records-out", imitate.records_out);
  c_imitate->add_option("--failures-out", imitate.failures_out);
  c_imitate->add_option("--store", imitate.store, "Score generated texts against this store");
  c_imitate->add_option("--vocab", imitate.vocab);
  c_imitate->add_option("--embeddings", imitate.embeddings);
  c_imitate->add_option("--reference", imitate.reference, "Source segment compared with the generation: head | tail");
  c_imitate->add_flag("--reclean", imitate.reclean, "Run the cleaning filters over generated texts before scoring");
  add_cleaning_options(c_imitate, imitate.cleaning, imitate.dictionary);
  c_imitate->add_option("--out", imitate.out, "Match-accuracy CSV (rows model_tag, columns strategy)");

  DetectOptions detect;
  auto* c_detect = app.add_subcommand("detect", "Perplexity separability from token log-probabilities");
  c_detect->add_option("--group", detect.groups, "NAME=FILE (repeatable)")->required();
  c_detect->add_option("--threshold", detect.thresholds, "CDF thresholds (repeatable)");
  c_detect->add_option("--out", detect.out);
  c_detect->add_option("--histogram-csv", detect.histogram_csv);
  c_detect->add_option("--cdf-csv", detect.cdf_csv);
  c_detect->add_option("--bin-width", detect.bin_width);

  ReportOptions rep;
  auto* c_report = app.add_subcommand("report", "Store distance series and output bundles");
  c_report->add_option("--store", rep.store);
  c_report->add_option("--histogram-csv", rep.histogram_csv);
  c_report->add_option("--cdf-csv", rep.cdf_csv);
  c_report->add_option("--bin-width", rep.bin_width);
  c_report->add_option("--input", rep.inputs, "NAME=FILE to bundle (repeatable)");
  c_report->add_option("--out", rep.out, "Bundle JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("invalid-config", e.what());
    return 2;
  }

  if (seed_opt->count() > 0) common.seed = seed;
  if (threads > 0) omp_set_num_threads(threads);
  clean.cleaning.strip_paratext = !no_paratext;

  try {
    json summary;
    if (*c_clean) summary = run_clean(clean, common);
    else if (*c_pairs) summary = run_pairs(pairs, common);
    else if (*c_manifest) summary = run_embed_manifest(manifest, common);
    else if (*c_build) {
      build.metric = distance::parse_metric(build_metric);
      summary = run_build(build, common);
    } else if (*c_verify) summary = run_verify(verify, common);
    else if (*c_eval) summary = run_evaluate(evaluate, common);
    else if (*c_imitate) summary = run_imitate(imitate, common);
    else if (*c_detect) summary = run_detect(detect, common);
    else if (*c_report) summary = run_report(rep, common);

    const bool verdict_only = *c_verify && !verify.a.empty();
    const bool streamed = *c_verify && verify.a.empty() && verify.out.empty();
    if (verdict_only || (common.json_output && !streamed)) {
      std::cout << summary.dump() << "\n";
    } else if (!common.json_output && !*c_eval && !*c_detect && !*c_imitate) {
      std::cerr << summary.dump(2) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    print_error(std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    print_error("io", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    print_error("malformed-record", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 3;
  }
}
