// Copyright 2026 The seedcls Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "seedcls/corpus.hpp"
#include "seedcls/embedding.hpp"
#include "seedcls/random.hpp"

namespace seedcls {

/// A trainable tensor. Values are row-major; `grad` and `velocity` are sized
/// like `value` while the parameter is trainable and empty otherwise.
struct Parameter {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> velocity;
  bool trainable = true;
};

struct ModelConfig {
  std::vector<std::size_t> windows{2, 3, 4, 5};
  std::size_t filters = 20;
  std::uint64_t rng_seed = 1;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 256;
  std::size_t epochs = 1;
  double momentum = 0.9;
  std::uint64_t rng_seed = 1;
  bool fine_tune_embeddings = false;

  void validate() const;
};

/// KL(L || Y) = sum_ij l_ij ln(l_ij / y_ij); zero targets contribute nothing.
double kl_loss(std::span<const std::vector<double>> targets, std::span<const std::vector<double>> predictions);
double kl_divergence(std::span<const double> target, std::span<const double> prediction);

/// In-place numerically stable softmax.
void softmax(std::span<double> logits);

/// Probabilistic document classifier trained against soft targets.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t num_classes() const = 0;

  /// Softmax output for one document. Throws EmptyDocument.
  virtual std::vector<double> predict_proba(std::span<const WordId> doc) const = 0;

  /// Adds the gradient of KL(target || predict_proba(doc)) to every trainable
  /// parameter's `grad` and returns that loss.
  virtual double accumulate_gradient(std::span<const WordId> doc, std::span<const double> target) = 0;

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }

  /// The word-embedding table is always the first parameter.
  void set_embeddings_trainable(bool trainable);
  void zero_grad();
  void reset_velocity();
  /// velocity = momentum * velocity - lr * scale * grad; value += velocity.
  void sgd_step(double learning_rate, double momentum, double scale);

  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

  /// Versioned checkpoint with config echo and the vocabulary hash.
  nlohmann::json to_json(std::uint64_t vocab_hash, std::uint64_t seed) const;

 protected:
  Parameter& add_parameter(std::string name, std::vector<std::size_t> shape, bool trainable = true);
  virtual nlohmann::json config_json() const = 0;

  std::vector<Parameter> params_;
};

/// Word-level CNN: per window size h, F filters over concatenated word
/// vectors, relu, max-over-time pooling, then a dense softmax layer.
class WordCnn final : public Classifier {
 public:
  WordCnn(const EmbeddingMatrix& embeddings, std::size_t num_classes, const ModelConfig& config);

  std::string kind() const override { return "word_cnn"; }
  std::size_t num_classes() const override { return num_classes_; }
  std::vector<double> predict_proba(std::span<const WordId> doc) const override;
  double accumulate_gradient(std::span<const WordId> doc, std::span<const double> target) override;

  std::size_t feature_count() const { return windows_.size() * filters_; }

  /// Max-pooled relu features, |H| * F entries, window-major.
  std::vector<double> pooled_features(std::span<const WordId> doc) const;

  /// Sets every dense weight and bias to zero.
  void zero_dense_layer();

 private:
  struct Forward {
    std::vector<double> pooled;
    std::vector<std::size_t> argmax;  // winning window start per feature
    std::vector<double> probs;
  };
  Forward forward(std::span<const WordId> doc) const;
  std::vector<double> padded_inputs(std::span<const WordId> doc) const;
  nlohmann::json config_json() const override;

  std::size_t dim_;
  std::size_t vocab_size_;
  std::size_t num_classes_;
  std::vector<std::size_t> windows_;
  std::size_t filters_;
  std::size_t max_window_;
};

/// Mean word vector followed by a dense softmax layer. Token order never
/// affects the output.
class BagOfEmbeddings final : public Classifier {
 public:
  BagOfEmbeddings(const EmbeddingMatrix& embeddings, std::size_t num_classes, std::uint64_t rng_seed);

  std::string kind() const override { return "bag_of_embeddings"; }
  std::size_t num_classes() const override { return num_classes_; }
  std::vector<double> predict_proba(std::span<const WordId> doc) const override;
  double accumulate_gradient(std::span<const WordId> doc, std::span<const double> target) override;

 private:
  std::vector<double> mean_vector(std::span<const WordId> doc, std::vector<WordId>* sorted) const;
  nlohmann::json config_json() const override;

  std::size_t dim_;
  std::size_t vocab_size_;
  std::size_t num_classes_;
};

std::unique_ptr<Classifier> make_classifier(const std::string& kind, const EmbeddingMatrix& embeddings,
                                            std::size_t num_classes, const ModelConfig& config);

/// Rebuilds a model from to_json output. Throws VocabularyMismatch when the
/// stored hash differs from `vocab_hash`.
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j, std::uint64_t vocab_hash);

struct Prediction {
  std::vector<std::vector<double>> probs;
  std::vector<int> labels;
};

/// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> row);

/// Row-wise forward passes, optionally split across threads. Output does not
/// depend on `threads`.
Prediction predict_batch(const Classifier& model, std::span<const std::vector<WordId>> docs,
                         std::size_t threads = 1);

struct TrainingExample {
  std::span<const WordId> tokens;
  std::span<const double> target;
};

/// Mini-batch SGD with momentum. Owns the shuffling stream, so successive
/// calls continue one reproducible sequence of permutations. Momentum starts
/// from zero for every new Trainer.
class Trainer {
 public:
  Trainer(Classifier& model, const TrainConfig& config);

  /// One shuffled pass; returns the mean per-example loss seen during the pass.
  double train_epoch(std::span<const TrainingExample> examples);

  /// `count` mini-batches drawn from a reshuffled stream over `examples`.
  /// The stream restarts whenever `examples` changes size.
  double train_batches(std::span<const TrainingExample> examples, std::size_t count);

 private:
  double run_batch(std::span<const TrainingExample> examples, std::span<const std::size_t> batch);

  Classifier& model_;
  TrainConfig config_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

}  // namespace seedcls
