#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semcafe/classifier.hpp"
#include "semcafe/kb_store.hpp"
#include "semcafe/text_pipeline.hpp"

namespace semcafe {

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

// Within each label, documents are shuffled by a seeded generator and the
// first round(fraction * n_label) go to train. Union is a partition.
std::pair<std::vector<RawDocument>, std::vector<RawDocument>> stratified_split(
    std::span<const RawDocument> corpus, const SplitSpec& spec);

struct ConfusionCounts {
  // Cells for the "unreliable" class; the "reliable" cells are the mirror
  // (tp_reliable = tn_unreliable and so on).
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  ClassMetrics unreliable;
  ClassMetrics reliable;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  ConfusionCounts counts;
  // metrics whose denominator was 0 and were defined as 0
  std::size_t zero_denominator_metrics = 0;
};

// Per-class precision/recall/F1 with the 0-when-undefined convention,
// macro F1 as the unweighted mean of the two class F1s, micro F1 from
// globally pooled counts.
EvalReport compute_metrics(std::span<const Label> gold,
                           std::span<const Label> pred);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

struct PipelineConfig {
  ClassifierConfig classifier;
  double train_fraction = 0.7;
  Strictness strictness = Strictness::lenient;
};

struct PipelineOutcome {
  EvalReport report;
  ModelParams model;
  TypeVocabulary vocab;
  std::size_t train_documents = 0;
  std::size_t test_documents = 0;
  std::size_t dropped_test_types = 0;  // test-time types outside the vocabulary
};

// split -> fit vocabulary and model on train only -> predict on test ->
// metrics. No test-set information reaches vocabulary or model fitting.
PipelineOutcome evaluate_pipeline(std::span<const RawDocument> corpus,
                                  const KnowledgeBase& kb,
                                  const PipelineConfig& config);

}  // namespace semcafe
