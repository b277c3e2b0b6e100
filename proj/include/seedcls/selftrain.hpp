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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "seedcls/classifier.hpp"
#include "seedcls/corpus.hpp"
#include "seedcls/pseudogen.hpp"

namespace seedcls {

struct SelfTrainConfig {
  double delta = 0.1;  // percent of documents
  std::size_t update_interval = 50;
  std::size_t max_iterations = 100;
  std::size_t pretrain_epochs = 5;
  std::uint64_t rng_seed = 1;
  std::size_t threads = 1;  // prediction fan-out

  void validate() const;
};

struct Checkpoint {
  std::size_t iteration = 0;
  double change_fraction = 0.0;
  double mean_kl = 0.0;
  std::optional<double> micro_f1;
  std::optional<double> macro_f1;
};

/// Iteration 0 records the pre-trained model's state; later entries follow
/// each round of training.
struct SelfTrainReport {
  std::vector<Checkpoint> checkpoints;
  bool converged = false;
};

/// Real labeled documents used as ground truth (one-hot targets).
struct LabeledExample {
  std::vector<WordId> tokens;
  int label = 0;
  std::optional<std::size_t> corpus_position;  // set when the document is also in the corpus
};

/// Pseudo documents (soft pseudo-labels) followed by labeled documents
/// (one-hot targets). Examples point into `pseudo_docs`, `labeled` and the
/// set's own target storage, so none of them may move while it is in use.
struct PretrainingSet {
  std::vector<std::vector<double>> labeled_targets;
  std::vector<TrainingExample> examples;

  PretrainingSet() = default;
  PretrainingSet(const PretrainingSet&) = delete;
  PretrainingSet& operator=(const PretrainingSet&) = delete;
};

void build_pretraining_set(std::span<const PseudoDocument> pseudo_docs, std::span<const LabeledExample> labeled,
                           std::size_t num_classes, PretrainingSet& out);

/// Trains `pretrain_epochs` shuffled passes over the pseudo documents (soft
/// pseudo-labels) together with any labeled documents (one-hot targets).
/// Returns the mean loss of the last epoch.
double pretrain(Classifier& model, std::span<const PseudoDocument> pseudo_docs,
                std::span<const LabeledExample> labeled, const TrainConfig& train, const SelfTrainConfig& config);

/// l_ij = (y_ij^2 / f_j) / sum_j' (y_ij'^2 / f_j'), f_j = sum_i y_ij.
/// Throws DegenerateFrequency when some f_j < 1e-12.
std::vector<std::vector<double>> self_train_targets(std::span<const std::vector<double>> predictions);

/// Fraction of positions whose label differs. Throws LengthMismatch.
double assignment_change_fraction(std::span<const int> previous, std::span<const int> current);

/// Alternates target recomputation and `update_interval` mini-batches of
/// training on (document, target) pairs until fewer than delta% of the
/// documents change label between checkpoints or `max_iterations` rounds ran.
/// Labeled documents keep one-hot targets. Gold labels, when every document
/// has one, are scored at each checkpoint.
SelfTrainReport self_train(Classifier& model, const Corpus& corpus, std::span<const LabeledExample> labeled,
                           const TrainConfig& train, const SelfTrainConfig& config);

/// One JSON object per checkpoint.
void write_report_jsonl(std::ostream& out, const SelfTrainReport& report, std::uint64_t seed);

}  // namespace seedcls
