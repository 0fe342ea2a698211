// semcafe: knowledge-base-driven news-reliability toolkit.
//
// One binary, subcommand style: kb-validate, ingest, link, fingerprint,
// train, predict, evaluate. Every command prints a single JSON summary
// line on success and a machine-readable {"error":..., "detail":...}
// object on standard error otherwise. Exit codes: 0 success, 1 domain or
// validation failure, 2 I/O or parse failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semcafe/classifier.hpp"
#include "semcafe/entity_linker.hpp"
#include "semcafe/errors.hpp"
#include "semcafe/eval_harness.hpp"
#include "semcafe/fingerprint.hpp"
#include "semcafe/kb_store.hpp"
#include "semcafe/text_pipeline.hpp"
#include "semcafe/type_dag.hpp"

namespace {

using namespace semcafe;
using nlohmann::json;

struct CliOptions {
  std::string kb_dir;
  std::string corpus;
  std::string config_file;
  std::string strictness = "lenient";
  std::string fingerprint_mode = "unique_entity";
  std::uint32_t hash_dim = 1u << 18;
  double learning_rate = 0.5;
  std::uint32_t epochs = 10;
  double l2_penalty = 1e-6;
  std::uint64_t seed = 42;
  double train_fraction = 0.7;
  bool feature_scaling = true;
};

Strictness parse_strictness(const std::string& s) {
  if (s == "strict") return Strictness::strict;
  if (s == "lenient") return Strictness::lenient;
  throw Error("BadFlag", ErrorCategory::io_parse,
              "strictness must be strict or lenient, got \"" + s + "\"");
}

FingerprintMode parse_mode(const std::string& s) {
  auto mode = fingerprint_mode_from_string(s);
  if (!mode)
    throw Error("BadFlag", ErrorCategory::io_parse,
                "fingerprint_mode must be unique_entity or mention_weighted, "
                "got \"" + s + "\"");
  return *mode;
}

ClassifierConfig classifier_config(const CliOptions& opts) {
  ClassifierConfig config;
  config.hash_dim = opts.hash_dim;
  config.learning_rate = opts.learning_rate;
  config.epochs = opts.epochs;
  config.l2_penalty = opts.l2_penalty;
  config.seed = opts.seed;
  config.fingerprint_mode = parse_mode(opts.fingerprint_mode);
  config.feature_scaling = opts.feature_scaling;
  return config;
}

// Flat key=value file; '#' comments. Precedence: defaults < file < flags.
// SEMCAFE_CONFIG, when set, overrides the --config path.
void apply_config_file(CLI::App& app, CliOptions& opts) {
  std::string path = opts.config_file;
  if (const char* env = std::getenv("SEMCAFE_CONFIG")) path = env;
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw errors::missing_file(path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw errors::malformed_line(path, line_number, "expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto flag_given = [&](const std::string& name) {
    const CLI::Option* opt = app.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  auto take = [&](const std::string& key, const std::string& flag,
                  auto& field) {
    auto it = values.find(key);
    if (it == values.end() || flag_given(flag)) {
      values.erase(key);
      return;
    }
    std::istringstream iss(it->second);
    iss >> field;
    if (iss.fail() || !iss.eof())
      throw errors::malformed_line(path, 0,
                                   "bad value for " + key + ": " + it->second);
    values.erase(key);
  };
  auto take_bool = [&](const std::string& key, const std::string& flag,
                       bool& field) {
    auto it = values.find(key);
    if (it == values.end() || flag_given(flag)) {
      values.erase(key);
      return;
    }
    if (it->second == "true" || it->second == "1") field = true;
    else if (it->second == "false" || it->second == "0") field = false;
    else
      throw errors::malformed_line(path, 0,
                                   "bad value for " + key + ": " + it->second);
    values.erase(key);
  };

  take("kb_dir", "--kb", opts.kb_dir);
  take("corpus", "--corpus", opts.corpus);
  take("strictness", "--strictness", opts.strictness);
  take("fingerprint_mode", "--fingerprint-mode", opts.fingerprint_mode);
  take("hash_dim", "--hash-dim", opts.hash_dim);
  take("learning_rate", "--learning-rate", opts.learning_rate);
  take("epochs", "--epochs", opts.epochs);
  take("l2_penalty", "--l2-penalty", opts.l2_penalty);
  take("seed", "--seed", opts.seed);
  take("train_fraction", "--train-fraction", opts.train_fraction);
  take_bool("feature_scaling", "--feature-scaling", opts.feature_scaling);

  if (!values.empty())
    throw errors::malformed_line(path, 0,
                                 "unknown key \"" + values.begin()->first +
                                     "\"");
}

// Outputs are written to a sibling temp file and renamed into place, so a
// failing command never leaves a partial artifact.
class AtomicFile {
 public:
  explicit AtomicFile(const std::filesystem::path& path)
      : final_path_(path), tmp_path_(path.string() + ".tmp") {
    out_.open(tmp_path_, std::ios::trunc);
    if (!out_)
      throw Error("MissingFile", ErrorCategory::io_parse,
                  "cannot open " + tmp_path_.string() + " for writing");
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_path_, ec);
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    std::filesystem::rename(tmp_path_, final_path_);
    committed_ = true;
  }

 private:
  std::filesystem::path final_path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_atomic(const std::filesystem::path& path,
                  const std::string& content) {
  AtomicFile out(path);
  out.stream() << content;
  out.commit();
}

class Timer {
 public:
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

json validation_report_json(const ValidationReport& report) {
  json j;
  j["surface_forms"] = report.surface_form_count;
  j["dbpedia_entities"] = report.dbpedia_entity_count;
  j["yago_entities"] = report.yago_entity_count;
  j["types"] = report.type_count;
  j["subclass_edges"] = report.subclass_edge_count;
  j["roots"] = report.root_count;
  j["dangling_references"] = report.dangling_references;
  json unreachable = json::array();
  for (const TypeId& t : report.unreachable_types) unreachable.push_back(t.value);
  j["unreachable_types"] = std::move(unreachable);
  return j;
}

int cmd_kb_validate(const CliOptions& opts) {
  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  ValidationReport report = validate_kb(kb);
  std::cout << validation_report_json(report).dump() << "\n";
  return 0;
}

int cmd_ingest(const CliOptions& opts, const std::string& out_path) {
  Timer timer;
  std::vector<RawDocument> docs = ingest_corpus(opts.corpus);
  AtomicFile out(out_path);
  for (const RawDocument& doc : docs) out.stream() << corpus_line_json(doc) << '\n';
  out.commit();
  json summary = {{"command", "ingest"},
                  {"documents", docs.size()},
                  {"output", out_path},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_link(const CliOptions& opts, const std::string& out_path) {
  Timer timer;
  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  Matcher matcher = Matcher::build(kb);
  std::vector<RawDocument> docs = ingest_corpus(opts.corpus);

  AtomicFile out(out_path);
  std::size_t entity_total = 0;
  for (const RawDocument& raw : docs) {
    CleanDocument doc = preprocess(raw);
    json entities = json::array();
    for (const LinkedEntity& entity : link_document(kb, matcher, doc)) {
      json e;
      e["dbpedia"] = entity.dbpedia_id.local;
      e["yago"] = entity.yago_id ? json(entity.yago_id->local) : json(nullptr);
      e["mentions"] = entity.mention_count;
      entities.push_back(std::move(e));
      ++entity_total;
    }
    json line = {{"doc_id", doc.doc_id}, {"entities", std::move(entities)}};
    out.stream() << line.dump() << '\n';
  }
  out.commit();
  json summary = {{"command", "link"},
                  {"documents", docs.size()},
                  {"entities", entity_total},
                  {"output", out_path},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_fingerprint(const CliOptions& opts, const std::string& out_path,
                    const std::string& vocab_in,
                    const std::string& vocab_out) {
  Timer timer;
  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  Matcher matcher = Matcher::build(kb);
  std::vector<RawDocument> raw = ingest_corpus(opts.corpus);

  std::vector<CleanDocument> docs;
  docs.reserve(raw.size());
  for (const RawDocument& r : raw) docs.push_back(preprocess(r));

  std::unordered_map<std::string, TypeDag> memo;
  std::vector<std::vector<EntityTypes>> entities;
  entities.reserve(docs.size());
  for (const CleanDocument& doc : docs)
    entities.push_back(link_and_close(kb, matcher, doc, &memo));

  TypeVocabulary vocab;
  if (!vocab_in.empty()) {
    vocab = TypeVocabulary::load(vocab_in);
  } else {
    std::vector<TypeDag> dags;
    for (const auto& doc_entities : entities)
      for (const EntityTypes& et : doc_entities) dags.push_back(et.dag);
    vocab = TypeVocabulary::build(dags);
  }

  FingerprintMode mode = parse_mode(opts.fingerprint_mode);
  std::size_t dropped = 0;
  AtomicFile out(out_path);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Fingerprint fp = fingerprint_document(docs[i].doc_id, entities[i], vocab,
                                          mode, &dropped);
    out.stream() << fingerprint_line_json(fp) << '\n';
  }
  if (vocab_in.empty()) write_atomic(vocab_out, vocab.to_text());
  out.commit();

  json summary = {{"command", "fingerprint"},
                  {"documents", docs.size()},
                  {"vocab_size", vocab.size()},
                  {"dropped_types", dropped},
                  {"output", out_path},
                  {"vocab", vocab_in.empty() ? vocab_out : vocab_in},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_train(const CliOptions& opts, const std::string& model_out,
              const std::string& vocab_out) {
  Timer timer;
  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  Matcher matcher = Matcher::build(kb);
  std::vector<RawDocument> raw = ingest_corpus(opts.corpus);
  for (const RawDocument& doc : raw)
    if (!doc.label) throw errors::unlabeled_document(doc.doc_id);

  ClassifierConfig config = classifier_config(opts);

  std::unordered_map<std::string, TypeDag> memo;
  std::vector<CleanDocument> docs;
  std::vector<std::vector<EntityTypes>> entities;
  for (const RawDocument& r : raw) {
    docs.push_back(preprocess(r));
    entities.push_back(link_and_close(kb, matcher, docs.back(), &memo));
  }
  std::vector<TypeDag> dags;
  for (const auto& doc_entities : entities)
    for (const EntityTypes& et : doc_entities) dags.push_back(et.dag);
  TypeVocabulary vocab = TypeVocabulary::build(dags);

  std::vector<Example> examples;
  examples.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Fingerprint fp = fingerprint_document(docs[i].doc_id, entities[i], vocab,
                                          config.fingerprint_mode);
    examples.push_back(Example{featurize(docs[i], fp, config, vocab.size()),
                               *docs[i].label});
  }

  ModelParams model = train(examples, config);
  write_atomic(vocab_out, vocab.to_text());
  write_atomic(model_out, model_to_json(model));

  json summary = {{"command", "train"},
                  {"documents", docs.size()},
                  {"vocab_size", vocab.size()},
                  {"weights", model.weights.size()},
                  {"model", model_out},
                  {"vocab", vocab_out},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_predict(const CliOptions& opts, const std::string& model_path,
                const std::string& vocab_path, const std::string& out_path) {
  Timer timer;
  ModelParams model = load_model(model_path);
  TypeVocabulary vocab = TypeVocabulary::load(vocab_path);
  if (vocab.size() != model.vocab_size)
    throw errors::layout_mismatch(
        "model was trained against a vocabulary of size " +
        std::to_string(model.vocab_size) + ", got " +
        std::to_string(vocab.size()));

  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  Matcher matcher = Matcher::build(kb);
  std::vector<RawDocument> raw = ingest_corpus(opts.corpus);

  std::unordered_map<std::string, TypeDag> memo;
  AtomicFile out(out_path);
  for (const RawDocument& r : raw) {
    CleanDocument doc = preprocess(r);
    std::vector<EntityTypes> entities = link_and_close(kb, matcher, doc, &memo);
    Fingerprint fp = fingerprint_document(
        doc.doc_id, entities, vocab, model.config.fingerprint_mode);
    Prediction prediction =
        predict(model, featurize(doc, fp, model.config, model.vocab_size));
    json line = {{"doc_id", doc.doc_id},
                 {"label", std::string(to_string(prediction.label))},
                 {"probability", prediction.probability}};
    out.stream() << line.dump() << '\n';
  }
  out.commit();

  json summary = {{"command", "predict"},
                  {"documents", raw.size()},
                  {"output", out_path},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_evaluate(const CliOptions& opts, const std::string& report_out,
                 const std::string& csv_out, const std::string& model_out) {
  Timer timer;
  KnowledgeBase kb = load_kb(opts.kb_dir, parse_strictness(opts.strictness));
  std::vector<RawDocument> corpus = ingest_corpus(opts.corpus);

  PipelineConfig config;
  config.classifier = classifier_config(opts);
  config.train_fraction = opts.train_fraction;
  config.strictness = parse_strictness(opts.strictness);

  PipelineOutcome outcome = evaluate_pipeline(corpus, kb, config);

  write_atomic(report_out, report_to_json(outcome.report) + "\n");
  if (!csv_out.empty()) write_atomic(csv_out, report_to_csv(outcome.report));
  if (!model_out.empty())
    write_atomic(model_out, model_to_json(outcome.model));

  json summary = {{"command", "evaluate"},
                  {"train_documents", outcome.train_documents},
                  {"test_documents", outcome.test_documents},
                  {"macro_f1", outcome.report.macro_f1},
                  {"micro_f1", outcome.report.micro_f1},
                  {"report", report_out},
                  {"elapsed_ms", timer.elapsed_ms()}};
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semcafe: entity-level semantic fingerprinting for news "
               "reliability"};
  app.require_subcommand(1);

  CliOptions opts;
  std::string out_path, vocab_in, vocab_out, model_path, report_out, csv_out,
      model_out;

  auto add_common = [&](CLI::App* cmd, bool needs_kb, bool needs_corpus) {
    cmd->add_option("--config", opts.config_file,
                    "flat key=value config file (SEMCAFE_CONFIG overrides)");
    cmd->add_option("--strictness", opts.strictness,
                    "KB loading mode: strict or lenient (default lenient)");
    if (needs_kb)
      cmd->add_option("--kb", opts.kb_dir, "KB snapshot directory")
          ->required();
    if (needs_corpus)
      cmd->add_option("--corpus", opts.corpus, "JSON-Lines corpus file")
          ->required();
  };
  auto add_model_params = [&](CLI::App* cmd) {
    cmd->add_option("--fingerprint-mode", opts.fingerprint_mode,
                    "unique_entity or mention_weighted");
    cmd->add_option("--hash-dim", opts.hash_dim, "text hashing buckets");
    cmd->add_option("--learning-rate", opts.learning_rate, "SGD step size");
    cmd->add_option("--epochs", opts.epochs, "SGD epochs");
    cmd->add_option("--l2-penalty", opts.l2_penalty, "L2 regularization");
    cmd->add_option("--seed", opts.seed, "top-level seed; split/shuffle/hash "
                                         "seeds derive from it");
    cmd->add_option("--feature-scaling", opts.feature_scaling,
                    "L2-normalize each feature block");
  };

  CLI::App* kb_validate = app.add_subcommand(
      "kb-validate", "load a KB snapshot and print a validation report");
  add_common(kb_validate, true, false);

  CLI::App* ingest =
      app.add_subcommand("ingest", "validate and normalize a corpus file");
  add_common(ingest, false, true);
  ingest->add_option("--out", out_path, "output JSON-Lines path")->required();

  CLI::App* link = app.add_subcommand(
      "link", "spot and disambiguate entities per document");
  add_common(link, true, true);
  link->add_option("--out", out_path, "output JSON-Lines path")->required();

  CLI::App* fingerprint_cmd = app.add_subcommand(
      "fingerprint", "compute semantic fingerprints for a corpus");
  add_common(fingerprint_cmd, true, true);
  fingerprint_cmd->add_option("--out", out_path, "output JSON-Lines path")
      ->required();
  fingerprint_cmd->add_option("--vocab", vocab_in,
                              "existing vocabulary file (frozen)");
  fingerprint_cmd->add_option("--vocab-out", vocab_out,
                              "where to write the built vocabulary "
                              "(default <out>.vocab.tsv)");
  fingerprint_cmd->add_option("--fingerprint-mode", opts.fingerprint_mode,
                              "unique_entity or mention_weighted");

  CLI::App* train_cmd = app.add_subcommand(
      "train", "train the reliability classifier on a labeled corpus");
  add_common(train_cmd, true, true);
  add_model_params(train_cmd);
  train_cmd->add_option("--model-out", model_out, "model JSON path")
      ->required();
  train_cmd->add_option("--vocab-out", vocab_out,
                        "vocabulary path (default <model-out>.vocab.tsv)");

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "score documents with a trained model");
  add_common(predict_cmd, true, true);
  predict_cmd->add_option("--model", model_path, "model JSON path")
      ->required();
  predict_cmd->add_option("--vocab", vocab_in, "vocabulary path")->required();
  predict_cmd->add_option("--out", out_path, "output JSON-Lines path")
      ->required();

  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "stratified split, train, and score the held-out set");
  add_common(evaluate_cmd, true, true);
  add_model_params(evaluate_cmd);
  evaluate_cmd->add_option("--train-fraction", opts.train_fraction,
                           "train split fraction (default 0.7)");
  evaluate_cmd->add_option("--report-out", report_out, "report JSON path")
      ->required();
  evaluate_cmd->add_option("--csv-out", csv_out, "optional CSV report path");
  evaluate_cmd->add_option("--model-out", model_out,
                           "optional trained-model path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_config_file(*cmd, opts);

    if (cmd == kb_validate) return cmd_kb_validate(opts);
    if (cmd == ingest) return cmd_ingest(opts, out_path);
    if (cmd == link) return cmd_link(opts, out_path);
    if (cmd == fingerprint_cmd) {
      if (vocab_out.empty()) vocab_out = out_path + ".vocab.tsv";
      return cmd_fingerprint(opts, out_path, vocab_in, vocab_out);
    }
    if (cmd == train_cmd) {
      if (vocab_out.empty()) vocab_out = model_out + ".vocab.tsv";
      return cmd_train(opts, model_out, vocab_out);
    }
    if (cmd == predict_cmd)
      return cmd_predict(opts, model_path, vocab_in, out_path);
    if (cmd == evaluate_cmd)
      return cmd_evaluate(opts, report_out, csv_out, model_out);
    return 2;
  } catch (const Error& e) {
    json err = {{"error", e.code()}, {"detail", e.detail()}};
    std::cerr << err.dump() << "\n";
    return e.category() == ErrorCategory::io_parse ? 2 : 1;
  } catch (const std::exception& e) {
    json err = {{"error", "Internal"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
}
