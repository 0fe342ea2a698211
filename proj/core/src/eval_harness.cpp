#include "semcafe/eval_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "semcafe/entity_linker.hpp"
#include "semcafe/errors.hpp"
#include "semcafe/fingerprint.hpp"
#include "semcafe/type_dag.hpp"

namespace semcafe {

std::pair<std::vector<RawDocument>, std::vector<RawDocument>> stratified_split(
    std::span<const RawDocument> corpus, const SplitSpec& spec) {
  std::vector<const RawDocument*> groups[2];
  for (const RawDocument& doc : corpus) {
    if (!doc.label) throw errors::unlabeled_document(doc.doc_id);
    groups[static_cast<int>(*doc.label)].push_back(&doc);
  }
  for (Label label : {Label::unreliable, Label::reliable}) {
    std::size_t n = groups[static_cast<int>(label)].size();
    if (n < 2) throw errors::degenerate_class(to_string(label), n);
  }

  std::pair<std::vector<RawDocument>, std::vector<RawDocument>> out;
  std::mt19937_64 gen(spec.seed);
  for (Label label : {Label::unreliable, Label::reliable}) {
    auto& group = groups[static_cast<int>(label)];
    for (std::size_t i = group.size(); i > 1; --i)
      std::swap(group[i - 1], group[gen() % i]);
    // round-half-up; the remainder goes to test
    std::size_t train_count = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(group.size()) +
                   0.5));
    for (std::size_t i = 0; i < group.size(); ++i)
      (i < train_count ? out.first : out.second).push_back(*group[i]);
  }
  return out;
}

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn,
                           std::size_t support, std::size_t& zero_denoms) {
  ClassMetrics m;
  m.support = support;
  if (tp + fp == 0) ++zero_denoms;
  m.precision = tp + fp == 0 ? 0.0
                             : static_cast<double>(tp) /
                                   static_cast<double>(tp + fp);
  if (tp + fn == 0) ++zero_denoms;
  m.recall = tp + fn == 0
                 ? 0.0
                 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall == 0.0) ++zero_denoms;
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace

EvalReport compute_metrics(std::span<const Label> gold,
                           std::span<const Label> pred) {
  if (gold.empty()) throw errors::empty_input("no labels to score");
  if (gold.size() != pred.size())
    throw errors::length_mismatch(gold.size(), pred.size());

  EvalReport report;
  ConfusionCounts& c = report.counts;  // cells from the unreliable side
  for (std::size_t i = 0; i < gold.size(); ++i) {
    bool gold_u = gold[i] == Label::unreliable;
    bool pred_u = pred[i] == Label::unreliable;
    if (gold_u && pred_u) ++c.tp;
    else if (!gold_u && pred_u) ++c.fp;
    else if (gold_u && !pred_u) ++c.fn;
    else ++c.tn;
  }

  report.unreliable = class_metrics(c.tp, c.fp, c.fn, c.tp + c.fn,
                                    report.zero_denominator_metrics);
  report.reliable = class_metrics(c.tn, c.fn, c.fp, c.tn + c.fp,
                                  report.zero_denominator_metrics);
  report.macro_f1 = (report.unreliable.f1 + report.reliable.f1) / 2.0;

  // Pooled counts over both classes; for exhaustive binary prediction this
  // equals accuracy.
  std::size_t pooled_tp = c.tp + c.tn;
  std::size_t pooled_fp = c.fp + c.fn;
  std::size_t pooled_fn = c.fn + c.fp;
  double micro_p = pooled_tp + pooled_fp == 0
                       ? 0.0
                       : static_cast<double>(pooled_tp) /
                             static_cast<double>(pooled_tp + pooled_fp);
  double micro_r = pooled_tp + pooled_fn == 0
                       ? 0.0
                       : static_cast<double>(pooled_tp) /
                             static_cast<double>(pooled_tp + pooled_fn);
  report.micro_f1 = micro_p + micro_r == 0.0
                        ? 0.0
                        : 2.0 * micro_p * micro_r / (micro_p + micro_r);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  auto metrics_json = [](const ClassMetrics& m) {
    nlohmann::json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["support"] = m.support;
    return j;
  };
  nlohmann::json j;
  j["unreliable"] = metrics_json(report.unreliable);
  j["reliable"] = metrics_json(report.reliable);
  j["macro_f1"] = report.macro_f1;
  j["micro_f1"] = report.micro_f1;
  j["confusion"] = {{"tp", report.counts.tp},
                    {"fp", report.counts.fp},
                    {"fn", report.counts.fn},
                    {"tn", report.counts.tn}};
  j["zero_denominator_metrics"] = report.zero_denominator_metrics;
  return j.dump();
}

std::string report_to_csv(const EvalReport& report) {
  auto num = [](double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
  };
  std::string csv = "metric,value\n";
  csv += "unreliable_precision," + num(report.unreliable.precision) + "\n";
  csv += "unreliable_recall," + num(report.unreliable.recall) + "\n";
  csv += "unreliable_f1," + num(report.unreliable.f1) + "\n";
  csv += "unreliable_support," + std::to_string(report.unreliable.support) +
         "\n";
  csv += "reliable_precision," + num(report.reliable.precision) + "\n";
  csv += "reliable_recall," + num(report.reliable.recall) + "\n";
  csv += "reliable_f1," + num(report.reliable.f1) + "\n";
  csv += "reliable_support," + std::to_string(report.reliable.support) + "\n";
  csv += "macro_f1," + num(report.macro_f1) + "\n";
  csv += "micro_f1," + num(report.micro_f1) + "\n";
  return csv;
}

PipelineOutcome evaluate_pipeline(std::span<const RawDocument> corpus,
                                  const KnowledgeBase& kb,
                                  const PipelineConfig& config) {
  auto [train_raw, test_raw] = stratified_split(
      corpus, SplitSpec{config.train_fraction, config.classifier.split_seed()});

  Matcher matcher = Matcher::build(kb);
  std::unordered_map<std::string, TypeDag> closure_memo;

  auto prepare = [&](std::span<const RawDocument> raw) {
    std::vector<CleanDocument> docs;
    std::vector<std::vector<EntityTypes>> entities;
    docs.reserve(raw.size());
    entities.reserve(raw.size());
    for (const RawDocument& r : raw) {
      docs.push_back(preprocess(r));
      entities.push_back(link_and_close(kb, matcher, docs.back(),
                                        &closure_memo));
    }
    return std::make_pair(std::move(docs), std::move(entities));
  };

  auto [train_docs, train_entities] = prepare(train_raw);
  auto [test_docs, test_entities] = prepare(test_raw);

  // The vocabulary is frozen on the train split; anything later is dropped.
  std::vector<TypeDag> train_dags;
  for (const auto& doc_entities : train_entities)
    for (const EntityTypes& et : doc_entities) train_dags.push_back(et.dag);
  TypeVocabulary vocab = TypeVocabulary::build(train_dags);

  const FingerprintMode mode = config.classifier.fingerprint_mode;
  auto featurize_all = [&](std::span<const CleanDocument> docs,
                           std::span<const std::vector<EntityTypes>> ents,
                           std::size_t* dropped) {
    std::vector<Example> examples;
    examples.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      Fingerprint fp = fingerprint_document(docs[i].doc_id, ents[i], vocab,
                                            mode, dropped);
      examples.push_back(Example{
          featurize(docs[i], fp, config.classifier, vocab.size()),
          *docs[i].label});
    }
    return examples;
  };

  PipelineOutcome outcome;
  std::size_t train_dropped = 0;
  std::vector<Example> train_examples =
      featurize_all(train_docs, train_entities, &train_dropped);
  outcome.model = train(train_examples, config.classifier);

  std::vector<Example> test_examples =
      featurize_all(test_docs, test_entities, &outcome.dropped_test_types);
  std::vector<Label> gold;
  std::vector<Label> pred;
  gold.reserve(test_examples.size());
  pred.reserve(test_examples.size());
  for (const Example& ex : test_examples) {
    gold.push_back(ex.label);
    pred.push_back(predict(outcome.model, ex.features).label);
  }

  outcome.report = compute_metrics(gold, pred);
  outcome.vocab = std::move(vocab);
  outcome.train_documents = train_docs.size();
  outcome.test_documents = test_docs.size();
  return outcome;
}

}  // namespace semcafe
