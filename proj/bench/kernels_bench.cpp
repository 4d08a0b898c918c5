// Serial reference vs OpenMP kernels on a synthetic corpus.
#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "stylo/kernels.hpp"

using namespace stylo;

namespace {

const std::vector<corpus::RawDocument>& docs() {
  static const auto d = fixtures::markov_corpus({2, 100, 1200, 7});
  return d;
}

const std::vector<std::string>& texts() {
  static const auto t = [] {
    std::vector<std::string> out;
    for (const auto& d : docs()) out.push_back(d.text);
    return out;
  }();
  return t;
}

const features::NGramVocabulary& vocab() {
  static const auto v = kernels::parallel::fit_vocabulary(texts(), {});
  return v;
}

const std::vector<features::StyleVector>& vectors() {
  static const auto v = [] {
    std::vector<features::StyleVector> out;
    for (const auto& t : kernels::parallel::vectorize(texts(), vocab())) out.push_back(features::fuse_tfidf_only(t));
    return out;
  }();
  return v;
}

const std::vector<kernels::IndexPair>& pairs() {
  static const auto p = [] {
    std::vector<kernels::IndexPair> out;
    const auto n = static_cast<std::uint32_t>(vectors().size());
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) out.push_back({a, b});
    }
    return out;
  }();
  return p;
}

template <auto Fn>
void BM_FitVocabulary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(texts(), features::VocabularyOptions{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts().size()));
}

template <auto Fn>
void BM_Vectorize(benchmark::State& state) {
  vocab();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(texts(), vocab()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts().size()));
}

template <auto Fn>
void BM_PairDistances(benchmark::State& state) {
  pairs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(vectors(), pairs(), distance::Metric::cosine));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs().size()));
}

template <auto Fn>
void BM_Clean(benchmark::State& state) {
  corpus::CleaningConfig cfg;
  cfg.dictionary = corpus::Dictionary::load_default();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(docs(), cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs().size()));
}

}  // namespace

BENCHMARK(BM_FitVocabulary<kernels::serial::fit_vocabulary>)->Name("fit_vocabulary/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitVocabulary<kernels::parallel::fit_vocabulary>)->Name("fit_vocabulary/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Vectorize<kernels::serial::vectorize>)->Name("vectorize/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Vectorize<kernels::parallel::vectorize>)->Name("vectorize/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairDistances<kernels::serial::pair_distances>)->Name("pair_distances/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairDistances<kernels::parallel::pair_distances>)->Name("pair_distances/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Clean<kernels::serial::clean>)->Name("clean/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Clean<kernels::parallel::clean>)->Name("clean/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
