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

#include "seedcls/selftrain.hpp"

#include <ostream>

#include "json.hpp"
#include "seedcls/error.hpp"
#include "seedcls/eval.hpp"

namespace seedcls {

namespace {

std::vector<double> one_hot(int label, std::size_t m) {
  if (label < 0 || static_cast<std::size_t>(label) >= m) {
    throw Error(ErrorCode::kLabelOutOfRange, "labeled document class outside [0, m)");
  }
  std::vector<double> v(m, 0.0);
  v[static_cast<std::size_t>(label)] = 1.0;
  return v;
}

}  // namespace

void SelfTrainConfig::validate() const {
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be > 0");
  if (update_interval < 1) throw Error(ErrorCode::kInvalidArgument, "update_interval must be >= 1");
}

void build_pretraining_set(std::span<const PseudoDocument> pseudo_docs, std::span<const LabeledExample> labeled,
                           std::size_t num_classes, PretrainingSet& out) {
  out.labeled_targets.clear();
  out.examples.clear();
  out.labeled_targets.reserve(labeled.size());
  for (const auto& ex : labeled) out.labeled_targets.push_back(one_hot(ex.label, num_classes));
  out.examples.reserve(pseudo_docs.size() + labeled.size());
  for (const auto& d : pseudo_docs) {
    if (d.pseudo_label.size() != num_classes) {
      throw Error(ErrorCode::kDimensionMismatch, "pseudo label width differs from class count");
    }
    out.examples.push_back({d.tokens, d.pseudo_label});
  }
  for (std::size_t i = 0; i < labeled.size(); ++i) out.examples.push_back({labeled[i].tokens, out.labeled_targets[i]});
}

double pretrain(Classifier& model, std::span<const PseudoDocument> pseudo_docs,
                std::span<const LabeledExample> labeled, const TrainConfig& train, const SelfTrainConfig& config) {
  if (pseudo_docs.empty()) throw Error(ErrorCode::kInvalidArgument, "pre-training needs pseudo documents");
  PretrainingSet set;
  build_pretraining_set(pseudo_docs, labeled, model.num_classes(), set);
  Trainer trainer(model, train);
  double loss = 0.0;
  for (std::size_t e = 0; e < config.pretrain_epochs; ++e) loss = trainer.train_epoch(set.examples);
  return loss;
}

std::vector<std::vector<double>> self_train_targets(std::span<const std::vector<double>> predictions) {
  if (predictions.empty()) throw Error(ErrorCode::kInvalidArgument, "self-training targets need predictions");
  const std::size_t m = predictions.front().size();
  std::vector<double> freq(m, 0.0);
  for (const auto& row : predictions) {
    if (row.size() != m) throw Error(ErrorCode::kDimensionMismatch, "prediction rows differ in width");
    for (std::size_t j = 0; j < m; ++j) freq[j] += row[j];
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (freq[j] < 1e-12) {
      throw Error(ErrorCode::kDegenerateFrequency, "class " + std::to_string(j) + " received no probability mass");
    }
  }
  std::vector<std::vector<double>> targets;
  targets.reserve(predictions.size());
  for (const auto& row : predictions) {
    std::vector<double> t(m);
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      t[j] = row[j] * row[j] / freq[j];
      z += t[j];
    }
    for (double& v : t) v /= z;
    targets.push_back(std::move(t));
  }
  return targets;
}

double assignment_change_fraction(std::span<const int> previous, std::span<const int> current) {
  if (previous.size() != current.size()) throw Error(ErrorCode::kLengthMismatch, "label sequences differ in length");
  if (previous.empty()) return 0.0;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < previous.size(); ++i) changed += previous[i] != current[i];
  return static_cast<double>(changed) / static_cast<double>(previous.size());
}

SelfTrainReport self_train(Classifier& model, const Corpus& corpus, std::span<const LabeledExample> labeled,
                           const TrainConfig& train, const SelfTrainConfig& config) {
  config.validate();
  if (corpus.size() == 0) throw Error(ErrorCode::kInvalidArgument, "self-training needs a non-empty corpus");
  const std::size_t m = model.num_classes();
  const std::size_t n = corpus.size();

  std::vector<std::vector<WordId>> docs;
  docs.reserve(n);
  for (const auto& d : corpus.documents()) docs.push_back(d.tokens);

  std::vector<int> gold;
  if (corpus.has_gold_labels()) {
    for (const auto& d : corpus.documents()) gold.push_back(*d.gold_label);
  }

  // Labeled documents inside the corpus override their target row; others are
  // appended as extra training examples.
  std::vector<std::pair<std::size_t, std::vector<double>>> overrides;
  std::vector<std::vector<double>> extra_targets;
  std::vector<std::span<const WordId>> extra_tokens;
  for (const auto& ex : labeled) {
    if (ex.corpus_position) {
      overrides.emplace_back(*ex.corpus_position, one_hot(ex.label, m));
    } else {
      extra_targets.push_back(one_hot(ex.label, m));
      extra_tokens.push_back(ex.tokens);
    }
  }

  SelfTrainReport report;
  auto record = [&](std::size_t iteration, double change, const Prediction& pred,
                    const std::vector<std::vector<double>>& targets) {
    Checkpoint cp;
    cp.iteration = iteration;
    cp.change_fraction = change;
    cp.mean_kl = kl_loss(targets, pred.probs) / static_cast<double>(n);
    if (!gold.empty()) {
      const ConfusionMatrix cm = confusion(gold, pred.labels, m);
      cp.micro_f1 = micro_f1(cm);
      cp.macro_f1 = macro_f1(cm);
    }
    report.checkpoints.push_back(cp);
  };

  Prediction pred = predict_batch(model, docs, config.threads);
  std::vector<std::vector<double>> targets = self_train_targets(pred.probs);
  for (auto& [pos, t] : overrides) targets[pos] = t;
  record(0, 0.0, pred, targets);
  std::vector<int> previous = pred.labels;

  TrainConfig train_cfg = train;
  train_cfg.rng_seed = config.rng_seed;
  Trainer trainer(model, train_cfg);
  std::vector<TrainingExample> examples;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    examples.clear();
    for (std::size_t i = 0; i < n; ++i) examples.push_back({docs[i], targets[i]});
    for (std::size_t i = 0; i < extra_targets.size(); ++i) examples.push_back({extra_tokens[i], extra_targets[i]});
    trainer.train_batches(examples, config.update_interval);

    pred = predict_batch(model, docs, config.threads);
    const double change = assignment_change_fraction(previous, pred.labels);
    targets = self_train_targets(pred.probs);
    for (auto& [pos, t] : overrides) targets[pos] = t;
    record(it, change, pred, targets);
    previous = pred.labels;
    if (change < config.delta / 100.0) {
      report.converged = true;
      break;
    }
  }
  return report;
}

void write_report_jsonl(std::ostream& out, const SelfTrainReport& report, std::uint64_t seed) {
  for (const auto& cp : report.checkpoints) {
    nlohmann::json j{{"iteration", cp.iteration},
                     {"change_fraction", cp.change_fraction},
                     {"mean_kl", cp.mean_kl},
                     {"seed", seed}};
    if (cp.micro_f1) j["micro_f1"] = *cp.micro_f1;
    if (cp.macro_f1) j["macro_f1"] = *cp.macro_f1;
    out << j.dump() << '\n';
  }
}

}  // namespace seedcls
