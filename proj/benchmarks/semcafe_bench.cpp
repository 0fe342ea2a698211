#include <benchmark/benchmark.h>

#include <random>

#include "semcafe/classifier.hpp"
#include "semcafe/entity_linker.hpp"
#include "semcafe/eval_harness.hpp"
#include "semcafe/fingerprint.hpp"
#include "semcafe/text_pipeline.hpp"
#include "../tests/support/generators.hpp"

using namespace semcafe;
using namespace semcafe::testing;

namespace {

SyntheticData& shared_data() {
  static SyntheticData data = [] {
    std::mt19937_64 gen(1);
    SyntheticSpec spec;
    spec.n_docs = 500;
    return make_synthetic(gen, spec);
  }();
  return data;
}

void bm_clean_text(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 200; ++i)
    text += "Visit https://example.org/a?b=c NOW!! NATO & Russia again, ";
  for (auto _ : state) benchmark::DoNotOptimize(clean_text(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_clean_text);

void bm_strip_boilerplate(benchmark::State& state) {
  std::string html;
  for (int i = 0; i < 100; ++i) {
    html += "<p>A paragraph of genuine article content, long enough to "
            "clear the block floor.</p>";
    html += "<div><a href=x>Nav</a> <a href=y>Links</a></div>";
  }
  for (auto _ : state) benchmark::DoNotOptimize(strip_boilerplate(html));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(html.size()));
}
BENCHMARK(bm_strip_boilerplate);

void bm_spot(benchmark::State& state) {
  SyntheticData& data = shared_data();
  Matcher matcher = Matcher::build(data.kb);
  std::vector<CleanDocument> docs;
  for (std::size_t i = 0; i < 50; ++i)
    docs.push_back(preprocess(data.corpus[i]));
  std::int64_t tokens = 0;
  for (const CleanDocument& doc : docs)
    tokens += static_cast<std::int64_t>(doc.body_tokens.size());
  for (auto _ : state)
    for (const CleanDocument& doc : docs)
      benchmark::DoNotOptimize(matcher.spot(doc.body_tokens));
  state.SetItemsProcessed(state.iterations() * tokens);
}
BENCHMARK(bm_spot);

void bm_fingerprint_corpus(benchmark::State& state) {
  SyntheticData& data = shared_data();
  Matcher matcher = Matcher::build(data.kb);
  std::vector<CleanDocument> docs;
  for (const RawDocument& raw : data.corpus) docs.push_back(preprocess(raw));

  std::unordered_map<std::string, TypeDag> memo;
  std::vector<TypeDag> dags;
  for (const CleanDocument& doc : docs)
    for (const EntityTypes& et : link_and_close(data.kb, matcher, doc, &memo))
      dags.push_back(et.dag);
  TypeVocabulary vocab = TypeVocabulary::build(dags);

  for (auto _ : state)
    benchmark::DoNotOptimize(fingerprint_corpus(
        docs, data.kb, matcher, vocab, FingerprintMode::unique_entity));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(bm_fingerprint_corpus);

void bm_evaluate_pipeline(benchmark::State& state) {
  SyntheticData& data = shared_data();
  PipelineConfig config;
  config.classifier.seed = 42;
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_pipeline(data.corpus, data.kb, config));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.corpus.size()));
}
BENCHMARK(bm_evaluate_pipeline);

}  // namespace

BENCHMARK_MAIN();
