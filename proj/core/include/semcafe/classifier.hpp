#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "semcafe/fingerprint.hpp"
#include "semcafe/text_pipeline.hpp"

namespace semcafe {

struct ClassifierConfig {
  std::uint32_t hash_dim = 1u << 18;
  double learning_rate = 0.5;
  std::uint32_t epochs = 10;
  double l2_penalty = 1e-6;
  std::uint64_t seed = 42;
  FingerprintMode fingerprint_mode = FingerprintMode::unique_entity;
  bool feature_scaling = true;

  // Every random choice in a run derives from the one top-level seed.
  std::uint64_t split_seed() const { return seed + 1; }
  std::uint64_t shuffle_seed() const { return seed + 2; }
  std::uint64_t hash_seed() const { return seed + 3; }
};

// Layout: [0, H) hashed-text block, [H, H + |T|) fingerprint block.
struct FeatureVector {
  std::uint64_t dimension = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;  // sorted, unique
};

// Text tokens (title ++ body) are counted into hash_dim buckets via
// XXH64(token, hash_seed()) mod H; fingerprint counts are copied at offset
// H. With feature_scaling each block is L2-normalized independently.
FeatureVector featurize(const CleanDocument& doc, const Fingerprint& fp,
                        const ClassifierConfig& config,
                        std::optional<std::uint64_t> expected_vocab_size = {});

struct ModelParams {
  ClassifierConfig config;
  std::uint64_t vocab_size = 0;
  double bias = 0.0;
  std::map<std::uint32_t, double> weights;

  std::uint64_t dimension() const { return config.hash_dim + vocab_size; }
};

struct Example {
  FeatureVector features;
  Label label;
};

// Logistic regression by sequential SGD: examples reshuffled every epoch
// with a generator seeded from shuffle_seed(), per-example update
//   w <- w - lr*(sigmoid(w.x + b) - y)*x - lr*l2*w   (bias unregularized).
// Identical inputs and seed give bit-identical parameters.
ModelParams train(std::span<const Example> examples,
                  const ClassifierConfig& config);

struct Prediction {
  Label label;
  double probability;  // strictly inside (0, 1)
};

// p = sigmoid(w.x + b); reliable iff p >= 0.5.
Prediction predict(const ModelParams& model, const FeatureVector& x);

// Mean-free (summed) logistic loss and its analytic gradient, exposed so
// the gradient can be cross-checked against finite differences.
double logistic_loss(std::span<const Example> examples,
                     const std::map<std::uint32_t, double>& weights,
                     double bias);
void logistic_loss_gradient(std::span<const Example> examples,
                            const std::map<std::uint32_t, double>& weights,
                            double bias,
                            std::map<std::uint32_t, double>& grad_weights,
                            double& grad_bias);

double sigmoid(double z);

// Single JSON object; weights keyed by position, serialized as
// shortest-round-trip decimal strings.
std::string model_to_json(const ModelParams& model);
void save_model(const ModelParams& model, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace semcafe
