#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "semcafe/classifier.hpp"
#include "semcafe/errors.hpp"
#include "semcafe/hash.hpp"
#include "support/fixtures.hpp"

using namespace semcafe;
using namespace semcafe::testing;

TEST_CASE("xxh64 matches the reference implementation") {
  struct Vector {
    const char* input;
    std::uint64_t seed;
    std::uint64_t expected;
  };
  // frozen against the reference xxhash implementation
  const Vector vectors[] = {
      {"", 0ull, 0xef46db3751d8e999ull},
      {"", 1ull, 0xd5afba1336a3be4bull},
      {"a", 0ull, 0xd24ec4f1a98c6e5bull},
      {"abc", 0ull, 0x44bc2cf5ad770999ull},
      {"putin", 0ull, 0xd434413e599b2394ull},
      {"russia", 45ull, 0x0a9c502e13716dbfull},
      {"nato", 45ull, 0x881710fbf2766ba9ull},
      {"semantic fingerprint", 12345ull, 0xb87303a705551f11ull},
      {"wordnet_country_108544813", 0ull, 0x3e615e8769162edfull},
      {"the quick brown fox jumps over the lazy dog", 2654435761ull,
       0xe36a763eb68bd590ull},
      {"0123456789abcdef0123456789abcdef0", 7ull, 0x4f54109a9de9ef94ull},
  };
  for (const Vector& v : vectors) CHECK(xxh64(v.input, v.seed) == v.expected);
}

namespace {

ClassifierConfig small_config() {
  ClassifierConfig config;
  config.hash_dim = 16;
  config.seed = 42;  // hash seed 45
  config.feature_scaling = false;
  return config;
}

FeatureVector vec(std::uint64_t dim,
                  std::initializer_list<std::pair<std::uint32_t, double>> e) {
  FeatureVector x;
  x.dimension = dim;
  x.entries.assign(e.begin(), e.end());
  return x;
}

}  // namespace

TEST_CASE("featurize of an empty document is empty") {
  CleanDocument doc;
  Fingerprint fp;
  FeatureVector x = featurize(doc, fp, small_config());
  CHECK(x.entries.empty());
  CHECK(x.dimension == 16);
}

TEST_CASE("featurize buckets one token at hash(token) mod H") {
  CleanDocument doc;
  doc.body_tokens = {"nato"};
  Fingerprint fp;
  FeatureVector x = featurize(doc, fp, small_config());
  REQUIRE(x.entries.size() == 1);
  // xxh64("nato", 45) % 16 == 9, frozen above
  CHECK(x.entries[0].first == 9);
  CHECK(x.entries[0].second == 1.0);

  doc.body_tokens = {"russia", "russia"};
  x = featurize(doc, fp, small_config());
  REQUIRE(x.entries.size() == 1);
  CHECK(x.entries[0].first == 15);
  CHECK(x.entries[0].second == 2.0);
}

TEST_CASE("fingerprint counts land at offset H") {
  CleanDocument doc;
  Fingerprint fp;
  fp.dimension = 3;
  fp.counts = {{1, 2}};
  FeatureVector x = featurize(doc, fp, small_config());
  CHECK(x.dimension == 19);
  REQUIRE(x.entries.size() == 1);
  CHECK(x.entries[0].first == 17);
  CHECK(x.entries[0].second == 2.0);
}

TEST_CASE("feature scaling normalizes each block independently") {
  ClassifierConfig config = small_config();
  config.feature_scaling = true;
  CleanDocument doc;
  doc.title_tokens = {"nato"};
  doc.body_tokens = {"russia"};
  Fingerprint fp;
  fp.dimension = 4;
  fp.counts = {{0, 3}, {2, 4}};  // norm 5
  FeatureVector x = featurize(doc, fp, config);

  double text_sq = 0.0, fp_sq = 0.0;
  for (const auto& [pos, val] : x.entries)
    (pos < 16 ? text_sq : fp_sq) += val * val;
  CHECK(text_sq == doctest::Approx(1.0));
  CHECK(fp_sq == doctest::Approx(1.0));

  auto at = [&](std::uint32_t pos) {
    for (const auto& [p, v] : x.entries)
      if (p == pos) return v;
    return 0.0;
  };
  CHECK(at(16) == doctest::Approx(0.6));
  CHECK(at(18) == doctest::Approx(0.8));
}

TEST_CASE("featurize rejects a fingerprint of the wrong dimension") {
  CleanDocument doc;
  Fingerprint fp;
  fp.dimension = 3;
  CHECK_THROWS_AS(featurize(doc, fp, small_config(), 7), Error);
}

TEST_CASE("training learns the separating feature's sign") {
  ClassifierConfig config = small_config();
  std::vector<Example> examples;
  for (int i = 0; i < 20; ++i) {
    bool bad = i % 2 == 0;
    // feature 0 present exactly on unreliable documents
    examples.push_back(Example{
        bad ? vec(20, {{0, 1.0}, {5, 1.0}}) : vec(20, {{5, 1.0}}),
        bad ? Label::unreliable : Label::reliable});
  }
  ModelParams model = train(examples, config);
  CHECK(model.weights.at(0) < 0.0);
  CHECK(model.vocab_size == 4);
}

TEST_CASE("training twice with one seed is bit-identical") {
  ClassifierConfig config = small_config();
  std::mt19937_64 gen(8);
  std::vector<Example> examples;
  for (int i = 0; i < 30; ++i) {
    FeatureVector x;
    x.dimension = 24;
    for (std::uint32_t pos = 0; pos < 24; ++pos)
      if (gen() % 3 == 0)
        x.entries.emplace_back(pos, static_cast<double>(gen() % 5));
    examples.push_back(
        Example{x, gen() % 2 == 0 ? Label::reliable : Label::unreliable});
  }
  bool both = false;
  for (const Example& ex : examples) both |= ex.label == Label::reliable;
  REQUIRE(both);

  ModelParams a = train(examples, config);
  ModelParams b = train(examples, config);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("degenerate corpora are rejected") {
  ClassifierConfig config = small_config();
  CHECK_THROWS_AS(train({}, config), Error);

  std::vector<Example> one_class = {
      Example{vec(20, {{0, 1.0}}), Label::reliable},
      Example{vec(20, {{1, 1.0}}), Label::reliable}};
  try {
    train(one_class, config);
    FAIL("expected SingleClassCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == "SingleClassCorpus");
  }

  std::vector<Example> ragged = {
      Example{vec(20, {{0, 1.0}}), Label::reliable},
      Example{vec(24, {{1, 1.0}}), Label::unreliable}};
  try {
    train(ragged, config);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "DimensionMismatch");
  }
}

TEST_CASE("predict applies the sigmoid decision rule") {
  ModelParams model;
  model.config = small_config();
  model.vocab_size = 4;

  FeatureVector x = vec(20, {{0, 1.0}});
  Prediction p = predict(model, x);
  CHECK(p.probability == 0.5);
  CHECK(p.label == Label::reliable);  // >= 0.5 rule

  model.bias = 10.0;
  p = predict(model, x);
  CHECK(p.probability == doctest::Approx(0.9999546).epsilon(1e-6));
  CHECK(p.label == Label::reliable);

  model.bias = -10.0;
  p = predict(model, x);
  CHECK(p.probability == doctest::Approx(4.5397868e-05).epsilon(1e-6));
  CHECK(p.label == Label::unreliable);
}

TEST_CASE("probabilities stay strictly inside (0,1)") {
  ModelParams model;
  model.config = small_config();
  model.vocab_size = 4;
  model.weights[0] = 1e6;
  Prediction hi = predict(model, vec(20, {{0, 1e6}}));
  CHECK(hi.probability < 1.0);
  CHECK(hi.probability > 0.0);
  Prediction lo = predict(model, vec(20, {{0, -1e6}}));
  CHECK(lo.probability > 0.0);
  CHECK(lo.probability < 1.0);
}

TEST_CASE("scaling weights and bias by c > 0 never flips labels") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    ModelParams model;
    model.config = small_config();
    model.vocab_size = 4;
    model.bias = (static_cast<double>(gen() % 100) - 50.0) / 10.0;
    for (std::uint32_t pos = 0; pos < 20; ++pos)
      if (gen() % 2 == 0)
        model.weights[pos] = (static_cast<double>(gen() % 100) - 50.0) / 10.0;

    ModelParams scaled = model;
    double c = 0.25 + static_cast<double>(gen() % 40);
    scaled.bias *= c;
    for (auto& [pos, w] : scaled.weights) w *= c;

    for (int rep = 0; rep < 10; ++rep) {
      FeatureVector x;
      x.dimension = 20;
      for (std::uint32_t pos = 0; pos < 20; ++pos)
        if (gen() % 3 == 0)
          x.entries.emplace_back(pos,
                                 (static_cast<double>(gen() % 100) - 50.0) /
                                     25.0);
      CHECK(predict(model, x).label == predict(scaled, x).label);
    }
  }
}

TEST_CASE("predict rejects layout-incompatible vectors") {
  ModelParams model;
  model.config = small_config();
  model.vocab_size = 4;
  CHECK_THROWS_AS(predict(model, vec(33, {{0, 1.0}})), Error);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 gen(20240601);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t dim = 2 + gen() % 19;  // <= 20 features
    std::size_t n = 3 + gen() % 20;
    std::vector<Example> examples;
    for (std::size_t i = 0; i < n; ++i) {
      FeatureVector x;
      x.dimension = dim;
      for (std::uint32_t pos = 0; pos < dim; ++pos)
        if (gen() % 2 == 0)
          x.entries.emplace_back(
              pos, (static_cast<double>(gen() % 400) - 200.0) / 100.0);
      examples.push_back(
          Example{x, gen() % 2 == 0 ? Label::reliable : Label::unreliable});
    }
    std::map<std::uint32_t, double> weights;
    for (std::uint32_t pos = 0; pos < dim; ++pos)
      weights[pos] = (static_cast<double>(gen() % 200) - 100.0) / 100.0;
    double bias = (static_cast<double>(gen() % 200) - 100.0) / 100.0;

    std::map<std::uint32_t, double> analytic;
    double analytic_bias = 0.0;
    logistic_loss_gradient(examples, weights, bias, analytic, analytic_bias);

    const double h = 1e-5;
    double num = 0.0, denom = 0.0;
    for (std::uint32_t pos = 0; pos < dim; ++pos) {
      std::map<std::uint32_t, double> up = weights, down = weights;
      up[pos] += h;
      down[pos] -= h;
      double fd = (logistic_loss(examples, up, bias) -
                   logistic_loss(examples, down, bias)) /
                  (2.0 * h);
      double a = analytic.contains(pos) ? analytic[pos] : 0.0;
      num += (a - fd) * (a - fd);
      denom += a * a + fd * fd;
    }
    double fd_bias = (logistic_loss(examples, weights, bias + h) -
                      logistic_loss(examples, weights, bias - h)) /
                     (2.0 * h);
    num += (analytic_bias - fd_bias) * (analytic_bias - fd_bias);
    denom += analytic_bias * analytic_bias + fd_bias * fd_bias;
    CHECK(std::sqrt(num) <= 1e-4 * std::max(1e-8, std::sqrt(denom)));
  }
}

TEST_CASE("model files round-trip bit-exactly") {
  TempDir tmp;
  std::mt19937_64 gen(4);
  ModelParams model;
  model.config = small_config();
  model.config.feature_scaling = true;
  model.vocab_size = 8;
  model.bias = 0.12345678901234567;
  model.weights[0] = -1.5;
  model.weights[7] = 3.0000000000000004;
  model.weights[21] = 1e-300;

  save_model(model, tmp.file("model.json"));
  ModelParams loaded = load_model(tmp.file("model.json"));
  CHECK(loaded.weights == model.weights);
  CHECK(loaded.bias == model.bias);
  CHECK(loaded.vocab_size == model.vocab_size);
  CHECK(loaded.config.hash_dim == model.config.hash_dim);
  CHECK(loaded.config.feature_scaling == model.config.feature_scaling);

  for (int rep = 0; rep < 100; ++rep) {
    FeatureVector x;
    x.dimension = 24;
    for (std::uint32_t pos = 0; pos < 24; ++pos)
      if (gen() % 2 == 0)
        x.entries.emplace_back(
            pos, (static_cast<double>(gen() % 1000) - 500.0) / 100.0);
    Prediction a = predict(model, x);
    Prediction b = predict(loaded, x);
    CHECK(a.label == b.label);
    CHECK(a.probability == b.probability);
  }
}

TEST_CASE("truncated model files are rejected") {
  TempDir tmp;
  std::ofstream(tmp.file("model.json")) << R"({"format_version":1,"conf)";
  try {
    load_model(tmp.file("model.json"));
    FAIL("expected MalformedModelFile");
  } catch (const Error& e) {
    CHECK(e.code() == "MalformedModelFile");
  }
}

TEST_CASE("weight positions outside the layout are a layout mismatch") {
  TempDir tmp;
  std::ofstream(tmp.file("model.json")) << R"({"format_version":1,
    "config":{"hash_dim":16,"learning_rate":0.5,"epochs":10,
              "l2_penalty":0.0,"seed":42,"fingerprint_mode":"unique_entity",
              "feature_scaling":false},
    "vocab_size":4,"bias":0.0,"weights":{"20":"1.0"}})";
  try {
    load_model(tmp.file("model.json"));
    FAIL("expected LayoutMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "LayoutMismatch");
  }
}
