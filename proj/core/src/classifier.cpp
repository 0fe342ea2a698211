#include "semcafe/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "semcafe/errors.hpp"
#include "semcafe/hash.hpp"

namespace semcafe {

double sigmoid(double z) {
  // Clamping keeps probabilities strictly inside (0, 1) in double precision.
  z = std::clamp(z, -30.0, 30.0);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

double dot(const std::map<std::uint32_t, double>& weights,
           const FeatureVector& x) {
  double z = 0.0;
  for (const auto& [pos, val] : x.entries) {
    auto it = weights.find(pos);
    if (it != weights.end()) z += it->second * val;
  }
  return z;
}

void l2_normalize(std::map<std::uint32_t, double>& block) {
  double sum_sq = 0.0;
  for (const auto& [pos, val] : block) sum_sq += val * val;
  if (sum_sq == 0.0) return;
  double norm = std::sqrt(sum_sq);
  for (auto& [pos, val] : block) val /= norm;
}

std::string shortest_decimal(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

FeatureVector featurize(const CleanDocument& doc, const Fingerprint& fp,
                        const ClassifierConfig& config,
                        std::optional<std::uint64_t> expected_vocab_size) {
  if (config.hash_dim == 0)
    throw errors::dimension_mismatch("hash_dim must be positive");
  if (expected_vocab_size && fp.dimension != *expected_vocab_size)
    throw errors::dimension_mismatch(
        "fingerprint dimension " + std::to_string(fp.dimension) +
        " does not match vocabulary size " +
        std::to_string(*expected_vocab_size));

  std::map<std::uint32_t, double> text_block;
  const std::uint64_t hash_seed = config.hash_seed();
  auto bucket_tokens = [&](const std::vector<std::string>& tokens) {
    for (const std::string& token : tokens) {
      std::uint32_t pos =
          static_cast<std::uint32_t>(xxh64(token, hash_seed) % config.hash_dim);
      text_block[pos] += 1.0;
    }
  };
  bucket_tokens(doc.title_tokens);
  bucket_tokens(doc.body_tokens);

  std::map<std::uint32_t, double> fp_block;
  for (const auto& [pos, count] : fp.counts)
    fp_block[pos] = static_cast<double>(count);

  if (config.feature_scaling) {
    l2_normalize(text_block);
    l2_normalize(fp_block);
  }

  FeatureVector x;
  x.dimension = config.hash_dim + fp.dimension;
  x.entries.reserve(text_block.size() + fp_block.size());
  for (const auto& [pos, val] : text_block) x.entries.emplace_back(pos, val);
  for (const auto& [pos, val] : fp_block)
    x.entries.emplace_back(static_cast<std::uint32_t>(config.hash_dim + pos),
                           val);
  return x;
}

ModelParams train(std::span<const Example> examples,
                  const ClassifierConfig& config) {
  if (examples.empty()) throw errors::empty_corpus();

  const std::uint64_t dimension = examples.front().features.dimension;
  if (dimension < config.hash_dim)
    throw errors::dimension_mismatch(
        "feature dimension " + std::to_string(dimension) +
        " is smaller than hash_dim " + std::to_string(config.hash_dim));
  bool saw_reliable = false;
  bool saw_unreliable = false;
  for (const Example& ex : examples) {
    if (ex.features.dimension != dimension)
      throw errors::dimension_mismatch(
          "examples disagree on feature dimension: " +
          std::to_string(ex.features.dimension) + " vs " +
          std::to_string(dimension));
    (ex.label == Label::reliable ? saw_reliable : saw_unreliable) = true;
  }
  if (!saw_reliable) throw errors::single_class_corpus("unreliable");
  if (!saw_unreliable) throw errors::single_class_corpus("reliable");

  ModelParams model;
  model.config = config;
  model.vocab_size = dimension - config.hash_dim;

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 gen(config.shuffle_seed());

  const double lr = config.learning_rate;
  const double decay = 1.0 - lr * config.l2_penalty;
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[gen() % i]);

    for (std::size_t idx : order) {
      const Example& ex = examples[idx];
      double y = ex.label == Label::reliable ? 1.0 : 0.0;
      double g = sigmoid(model.bias + dot(model.weights, ex.features)) - y;
      if (config.l2_penalty != 0.0)
        for (auto& [pos, w] : model.weights) w *= decay;
      for (const auto& [pos, val] : ex.features.entries)
        model.weights[pos] -= lr * g * val;
      model.bias -= lr * g;
    }
  }
  return model;
}

Prediction predict(const ModelParams& model, const FeatureVector& x) {
  if (x.dimension != model.dimension())
    throw errors::dimension_mismatch(
        "feature dimension " + std::to_string(x.dimension) +
        " does not match model layout " + std::to_string(model.dimension()));
  double p = sigmoid(model.bias + dot(model.weights, x));
  return Prediction{p >= 0.5 ? Label::reliable : Label::unreliable, p};
}

double logistic_loss(std::span<const Example> examples,
                     const std::map<std::uint32_t, double>& weights,
                     double bias) {
  double loss = 0.0;
  for (const Example& ex : examples) {
    double y = ex.label == Label::reliable ? 1.0 : 0.0;
    double p = sigmoid(bias + dot(weights, ex.features));
    loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return loss;
}

void logistic_loss_gradient(std::span<const Example> examples,
                            const std::map<std::uint32_t, double>& weights,
                            double bias,
                            std::map<std::uint32_t, double>& grad_weights,
                            double& grad_bias) {
  grad_weights.clear();
  grad_bias = 0.0;
  for (const Example& ex : examples) {
    double y = ex.label == Label::reliable ? 1.0 : 0.0;
    double g = sigmoid(bias + dot(weights, ex.features)) - y;
    for (const auto& [pos, val] : ex.features.entries)
      grad_weights[pos] += g * val;
    grad_bias += g;
  }
}

std::string model_to_json(const ModelParams& model) {
  nlohmann::json config;
  config["hash_dim"] = model.config.hash_dim;
  config["learning_rate"] = model.config.learning_rate;
  config["epochs"] = model.config.epochs;
  config["l2_penalty"] = model.config.l2_penalty;
  config["seed"] = model.config.seed;
  config["fingerprint_mode"] =
      std::string(to_string(model.config.fingerprint_mode));
  config["feature_scaling"] = model.config.feature_scaling;

  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [pos, w] : model.weights)
    weights[std::to_string(pos)] = shortest_decimal(w);

  nlohmann::json obj;
  obj["format_version"] = 1;
  obj["config"] = std::move(config);
  obj["vocab_size"] = model.vocab_size;
  obj["bias"] = model.bias;
  obj["weights"] = std::move(weights);
  return obj.dump() + "\n";
}

void save_model(const ModelParams& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error("MissingFile", ErrorCategory::io_parse,
                "cannot open " + path.string() + " for writing");
  out << model_to_json(model);
}

ModelParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw errors::malformed_model_file(e.what());
  }

  ModelParams model;
  try {
    if (obj.at("format_version").get<int>() != 1)
      throw errors::malformed_model_file("unsupported format_version");
    const nlohmann::json& config = obj.at("config");
    model.config.hash_dim = config.at("hash_dim").get<std::uint32_t>();
    model.config.learning_rate = config.at("learning_rate").get<double>();
    model.config.epochs = config.at("epochs").get<std::uint32_t>();
    model.config.l2_penalty = config.at("l2_penalty").get<double>();
    model.config.seed = config.at("seed").get<std::uint64_t>();
    auto mode = fingerprint_mode_from_string(
        config.at("fingerprint_mode").get<std::string>());
    if (!mode) throw errors::malformed_model_file("unknown fingerprint_mode");
    model.config.fingerprint_mode = *mode;
    model.config.feature_scaling = config.at("feature_scaling").get<bool>();
    model.vocab_size = obj.at("vocab_size").get<std::uint64_t>();
    model.bias = obj.at("bias").get<double>();

    for (const auto& [key, value] : obj.at("weights").items()) {
      std::uint32_t pos = 0;
      auto [key_end, key_ec] =
          std::from_chars(key.data(), key.data() + key.size(), pos);
      if (key_ec != std::errc() || key_end != key.data() + key.size())
        throw errors::malformed_model_file("non-integer weight position \"" +
                                           key + "\"");
      if (pos >= model.dimension())
        throw errors::layout_mismatch(
            "weight position " + key + " outside layout of size " +
            std::to_string(model.dimension()));
      const std::string text = value.get<std::string>();
      double w = 0.0;
      auto [w_end, w_ec] =
          std::from_chars(text.data(), text.data() + text.size(), w);
      if (w_ec != std::errc() || w_end != text.data() + text.size())
        throw errors::malformed_model_file("unparseable weight \"" + text +
                                           "\"");
      model.weights.emplace(pos, w);
    }
  } catch (const nlohmann::json::exception& e) {
    throw errors::malformed_model_file(e.what());
  }
  return model;
}

}  // namespace semcafe
