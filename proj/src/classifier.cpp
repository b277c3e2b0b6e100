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

#include "seedcls/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "seedcls/error.hpp"
#include "seedcls/vector_ops.hpp"

namespace seedcls {

namespace {

constexpr int kCheckpointVersion = 1;

void glorot_fill(std::vector<double>& values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : values) v = (2.0 * uniform01(rng) - 1.0) * limit;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

void check_tokens(std::span<const WordId> doc, std::size_t vocab_size) {
  if (doc.empty()) throw Error(ErrorCode::kEmptyDocument, "cannot classify an empty document");
  for (WordId w : doc) {
    if (w >= vocab_size) throw Error(ErrorCode::kInvalidArgument, "token index outside the vocabulary");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw Error(ErrorCode::kInvalidArgument, "momentum must lie in [0, 1)");
}

double kl_divergence(std::span<const double> target, std::span<const double> prediction) {
  if (target.size() != prediction.size()) throw Error(ErrorCode::kLengthMismatch, "target and prediction widths differ");
  double loss = 0.0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (target[j] > 0.0) loss += target[j] * std::log(target[j] / prediction[j]);
  }
  return loss;
}

double kl_loss(std::span<const std::vector<double>> targets, std::span<const std::vector<double>> predictions) {
  if (targets.size() != predictions.size()) throw Error(ErrorCode::kLengthMismatch, "target and prediction counts differ");
  double loss = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) loss += kl_divergence(targets[i], predictions[i]);
  return loss;
}

void softmax(std::span<double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& v : logits) {
    v = std::exp(v - peak);
    z += v;
  }
  for (double& v : logits) v /= z;
}

// ---------------------------------------------------------------------------
// Classifier

Parameter& Classifier::add_parameter(std::string name, std::vector<std::size_t> shape, bool trainable) {
  Parameter p;
  p.name = std::move(name);
  const std::size_t n =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<std::size_t>());
  p.shape = std::move(shape);
  p.value.assign(n, 0.0);
  p.trainable = trainable;
  if (trainable) {
    p.grad.assign(n, 0.0);
    p.velocity.assign(n, 0.0);
  }
  params_.push_back(std::move(p));
  return params_.back();
}

void Classifier::set_embeddings_trainable(bool trainable) {
  Parameter& e = params_.front();
  if (e.trainable == trainable) return;
  e.trainable = trainable;
  if (trainable) {
    e.grad.assign(e.value.size(), 0.0);
    e.velocity.assign(e.value.size(), 0.0);
  } else {
    e.grad.clear();
    e.velocity.clear();
  }
}

void Classifier::zero_grad() {
  for (auto& p : params_)
    if (p.trainable) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

void Classifier::reset_velocity() {
  for (auto& p : params_) std::fill(p.velocity.begin(), p.velocity.end(), 0.0);
}

void Classifier::sgd_step(double learning_rate, double momentum, double scale) {
  for (auto& p : params_) {
    if (!p.trainable) continue;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      p.velocity[i] = momentum * p.velocity[i] - learning_rate * scale * p.grad[i];
      p.value[i] += p.velocity[i];
    }
  }
}

std::vector<std::vector<double>> Classifier::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.value);
  return out;
}

void Classifier::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != params_.size()) throw Error(ErrorCode::kDimensionMismatch, "snapshot has wrong parameter count");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (values[i].size() != params_[i].value.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "snapshot tensor '" + params_[i].name + "' has wrong size");
    }
    params_[i].value = values[i];
  }
}

nlohmann::json Classifier::to_json(std::uint64_t vocab_hash, std::uint64_t seed) const {
  nlohmann::json j;
  j["format"] = "seedcls-model";
  j["version"] = kCheckpointVersion;
  j["kind"] = kind();
  j["num_classes"] = num_classes();
  j["vocab_hash"] = hex64(vocab_hash);
  j["seed"] = seed;
  j["config"] = config_json();
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& p : params_) {
    tensors.push_back({{"name", p.name}, {"shape", p.shape}, {"data", p.value}});
  }
  j["parameters"] = std::move(tensors);
  return j;
}

// ---------------------------------------------------------------------------
// WordCnn

WordCnn::WordCnn(const EmbeddingMatrix& embeddings, std::size_t num_classes, const ModelConfig& config)
    : dim_(embeddings.dim()),
      vocab_size_(embeddings.rows()),
      num_classes_(num_classes),
      windows_(config.windows),
      filters_(config.filters),
      max_window_(0) {
  if (num_classes_ < 1) throw Error(ErrorCode::kInvalidArgument, "classifier needs at least one class");
  if (windows_.empty() || filters_ < 1) throw Error(ErrorCode::kInvalidArgument, "CNN needs windows and filters");
  for (std::size_t h : windows_) {
    if (h < 1) throw Error(ErrorCode::kInvalidArgument, "window sizes must be >= 1");
    max_window_ = std::max(max_window_, h);
  }

  Rng rng(config.rng_seed);
  Parameter& table = add_parameter("embedding", {vocab_size_, dim_}, false);
  std::copy(embeddings.values().begin(), embeddings.values().end(), table.value.begin());
  for (std::size_t h : windows_) {
    const std::string suffix = std::to_string(h);
    glorot_fill(add_parameter("conv_w" + suffix, {filters_, h * dim_}).value, h * dim_, filters_, rng);
    add_parameter("conv_b" + suffix, {filters_});
  }
  glorot_fill(add_parameter("dense_w", {num_classes_, feature_count()}).value, feature_count(), num_classes_, rng);
  add_parameter("dense_b", {num_classes_});
}

std::vector<double> WordCnn::padded_inputs(std::span<const WordId> doc) const {
  // Trailing zero rows let any window that starts at a real token read h rows.
  std::vector<double> x((doc.size() + max_window_) * dim_, 0.0);
  const auto& table = params_.front().value;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(doc[i] * dim_), dim_,
                x.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }
  return x;
}

WordCnn::Forward WordCnn::forward(std::span<const WordId> doc) const {
  check_tokens(doc, vocab_size_);
  const std::vector<double> x = padded_inputs(doc);
  const std::size_t len = doc.size();
  Forward out;
  out.pooled.assign(feature_count(), 0.0);
  out.argmax.assign(feature_count(), 0);

  for (std::size_t b = 0; b < windows_.size(); ++b) {
    const std::size_t h = windows_[b];
    const std::size_t span_len = h * dim_;
    const std::size_t positions = len >= h ? len - h + 1 : 1;
    const auto& w = params_[1 + 2 * b].value;
    const auto& bias = params_[2 + 2 * b].value;
    for (std::size_t f = 0; f < filters_; ++f) {
      const double* wf = w.data() + f * span_len;
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_pos = 0;
      for (std::size_t i = 0; i < positions; ++i) {
        const double* xi = x.data() + i * dim_;
        double s = bias[f];
        for (std::size_t k = 0; k < span_len; ++k) s += wf[k] * xi[k];
        if (s > best) {
          best = s;
          best_pos = i;
        }
      }
      // max over positions of relu(s) == relu(max over positions of s)
      out.pooled[b * filters_ + f] = best > 0.0 ? best : 0.0;
      out.argmax[b * filters_ + f] = best_pos;
    }
  }

  const auto& dense_w = params_[params_.size() - 2].value;
  const auto& dense_b = params_.back().value;
  const std::size_t nf = feature_count();
  out.probs.assign(num_classes_, 0.0);
  for (std::size_t j = 0; j < num_classes_; ++j) {
    double z = dense_b[j];
    for (std::size_t k = 0; k < nf; ++k) z += dense_w[j * nf + k] * out.pooled[k];
    out.probs[j] = z;
  }
  softmax(out.probs);
  return out;
}

std::vector<double> WordCnn::predict_proba(std::span<const WordId> doc) const { return forward(doc).probs; }

std::vector<double> WordCnn::pooled_features(std::span<const WordId> doc) const { return forward(doc).pooled; }

void WordCnn::zero_dense_layer() {
  std::fill(params_[params_.size() - 2].value.begin(), params_[params_.size() - 2].value.end(), 0.0);
  std::fill(params_.back().value.begin(), params_.back().value.end(), 0.0);
}

double WordCnn::accumulate_gradient(std::span<const WordId> doc, std::span<const double> target) {
  if (target.size() != num_classes_) throw Error(ErrorCode::kDimensionMismatch, "target width differs from class count");
  const Forward fwd = forward(doc);
  const double loss = kl_divergence(target, fwd.probs);

  // d KL / d logit_j = y_j * sum(l) - l_j
  const double mass = std::accumulate(target.begin(), target.end(), 0.0);
  std::vector<double> dz(num_classes_);
  for (std::size_t j = 0; j < num_classes_; ++j) dz[j] = fwd.probs[j] * mass - target[j];

  const std::size_t nf = feature_count();
  Parameter& dense_w = params_[params_.size() - 2];
  Parameter& dense_b = params_.back();
  std::vector<double> dpooled(nf, 0.0);
  for (std::size_t j = 0; j < num_classes_; ++j) {
    dense_b.grad[j] += dz[j];
    for (std::size_t k = 0; k < nf; ++k) {
      dense_w.grad[j * nf + k] += dz[j] * fwd.pooled[k];
      dpooled[k] += dz[j] * dense_w.value[j * nf + k];
    }
  }

  Parameter& table = params_.front();
  const std::vector<double> x = padded_inputs(doc);
  for (std::size_t b = 0; b < windows_.size(); ++b) {
    const std::size_t h = windows_[b];
    const std::size_t span_len = h * dim_;
    Parameter& w = params_[1 + 2 * b];
    Parameter& bias = params_[2 + 2 * b];
    for (std::size_t f = 0; f < filters_; ++f) {
      const std::size_t k = b * filters_ + f;
      if (fwd.pooled[k] <= 0.0) continue;  // relu inactive
      const double g = dpooled[k];
      const std::size_t start = fwd.argmax[k];
      bias.grad[f] += g;
      const double* xi = x.data() + start * dim_;
      double* gw = w.grad.data() + f * span_len;
      for (std::size_t e = 0; e < span_len; ++e) gw[e] += g * xi[e];
      if (table.trainable) {
        const double* wf = w.value.data() + f * span_len;
        for (std::size_t r = 0; r < h && start + r < doc.size(); ++r) {
          double* ge = table.grad.data() + doc[start + r] * dim_;
          for (std::size_t e = 0; e < dim_; ++e) ge[e] += g * wf[r * dim_ + e];
        }
      }
    }
  }
  return loss;
}

nlohmann::json WordCnn::config_json() const {
  return {{"dim", dim_}, {"vocab_size", vocab_size_}, {"windows", windows_}, {"filters", filters_}};
}

// ---------------------------------------------------------------------------
// BagOfEmbeddings

BagOfEmbeddings::BagOfEmbeddings(const EmbeddingMatrix& embeddings, std::size_t num_classes,
                                 std::uint64_t rng_seed)
    : dim_(embeddings.dim()), vocab_size_(embeddings.rows()), num_classes_(num_classes) {
  if (num_classes_ < 1) throw Error(ErrorCode::kInvalidArgument, "classifier needs at least one class");
  Rng rng(rng_seed);
  Parameter& table = add_parameter("embedding", {vocab_size_, dim_}, false);
  std::copy(embeddings.values().begin(), embeddings.values().end(), table.value.begin());
  glorot_fill(add_parameter("dense_w", {num_classes_, dim_}).value, dim_, num_classes_, rng);
  add_parameter("dense_b", {num_classes_});
}

std::vector<double> BagOfEmbeddings::mean_vector(std::span<const WordId> doc, std::vector<WordId>* sorted) const {
  check_tokens(doc, vocab_size_);
  // Summing in token-id order makes the result exactly order-invariant.
  std::vector<WordId> ids(doc.begin(), doc.end());
  std::sort(ids.begin(), ids.end());
  std::vector<double> mean(dim_, 0.0);
  const auto& table = params_.front().value;
  for (WordId w : ids) {
    const double* row = table.data() + w * dim_;
    for (std::size_t e = 0; e < dim_; ++e) mean[e] += row[e];
  }
  for (double& v : mean) v /= static_cast<double>(ids.size());
  if (sorted) *sorted = std::move(ids);
  return mean;
}

std::vector<double> BagOfEmbeddings::predict_proba(std::span<const WordId> doc) const {
  const std::vector<double> h = mean_vector(doc, nullptr);
  const auto& w = params_[1].value;
  const auto& b = params_[2].value;
  std::vector<double> probs(num_classes_);
  for (std::size_t j = 0; j < num_classes_; ++j) probs[j] = b[j] + dot({w.data() + j * dim_, dim_}, h);
  softmax(probs);
  return probs;
}

double BagOfEmbeddings::accumulate_gradient(std::span<const WordId> doc, std::span<const double> target) {
  if (target.size() != num_classes_) throw Error(ErrorCode::kDimensionMismatch, "target width differs from class count");
  std::vector<WordId> ids;
  const std::vector<double> h = mean_vector(doc, &ids);
  const std::vector<double> probs = predict_proba(doc);
  const double loss = kl_divergence(target, probs);
  const double mass = std::accumulate(target.begin(), target.end(), 0.0);

  Parameter& w = params_[1];
  Parameter& b = params_[2];
  std::vector<double> dh(dim_, 0.0);
  for (std::size_t j = 0; j < num_classes_; ++j) {
    const double dz = probs[j] * mass - target[j];
    b.grad[j] += dz;
    for (std::size_t e = 0; e < dim_; ++e) {
      w.grad[j * dim_ + e] += dz * h[e];
      dh[e] += dz * w.value[j * dim_ + e];
    }
  }
  Parameter& table = params_.front();
  if (table.trainable) {
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (WordId t : ids) {
      double* ge = table.grad.data() + t * dim_;
      for (std::size_t e = 0; e < dim_; ++e) ge[e] += dh[e] * inv;
    }
  }
  return loss;
}

nlohmann::json BagOfEmbeddings::config_json() const { return {{"dim", dim_}, {"vocab_size", vocab_size_}}; }

// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> make_classifier(const std::string& kind, const EmbeddingMatrix& embeddings,
                                            std::size_t num_classes, const ModelConfig& config) {
  if (kind == "word_cnn") return std::make_unique<WordCnn>(embeddings, num_classes, config);
  if (kind == "bag_of_embeddings") return std::make_unique<BagOfEmbeddings>(embeddings, num_classes, config.rng_seed);
  throw Error(ErrorCode::kValidation, "unknown classifier kind '" + kind + "'");
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j, std::uint64_t vocab_hash) {
  if (j.value("format", "") != "seedcls-model") throw Error(ErrorCode::kValidation, "not a model checkpoint");
  if (j.at("version").get<int>() != kCheckpointVersion) {
    throw Error(ErrorCode::kValidation, "unsupported checkpoint version");
  }
  if (j.at("vocab_hash").get<std::string>() != hex64(vocab_hash)) {
    throw Error(ErrorCode::kVocabularyMismatch, "checkpoint was trained against a different vocabulary");
  }
  const auto& cfg = j.at("config");
  const std::size_t dim = cfg.at("dim").get<std::size_t>();
  const std::size_t vocab_size = cfg.at("vocab_size").get<std::size_t>();
  const EmbeddingMatrix placeholder(std::vector<std::string>(vocab_size), dim,
                                    std::vector<double>(vocab_size * dim, 0.0));
  ModelConfig mc;
  if (cfg.contains("windows")) mc.windows = cfg.at("windows").get<std::vector<std::size_t>>();
  if (cfg.contains("filters")) mc.filters = cfg.at("filters").get<std::size_t>();
  auto model = make_classifier(j.at("kind").get<std::string>(), placeholder, j.at("num_classes").get<std::size_t>(), mc);

  const auto& tensors = j.at("parameters");
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (i >= model->parameters().size() || tensors[i].at("name") != model->parameters()[i].name) {
      throw Error(ErrorCode::kValidation, "checkpoint tensors do not match the model layout");
    }
    values.push_back(tensors[i].at("data").get<std::vector<double>>());
  }
  model->restore(values);
  return model;
}

int argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j)
    if (row[j] > row[best]) best = j;
  return static_cast<int>(best);
}

Prediction predict_batch(const Classifier& model, std::span<const std::vector<WordId>> docs, std::size_t threads) {
  Prediction out;
  out.probs.resize(docs.size());
  out.labels.resize(docs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out.probs[i] = model.predict_proba(docs[i]);
      out.labels[i] = argmax(out.probs[i]);
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, docs.size()));
  if (threads == 1) {
    work(0, docs.size());
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (docs.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        work(std::min(docs.size(), t * chunk), std::min(docs.size(), (t + 1) * chunk));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Trainer

Trainer::Trainer(Classifier& model, const TrainConfig& config)
    : model_(model), config_(config), rng_(config.rng_seed) {
  config_.validate();
  model_.set_embeddings_trainable(config_.fine_tune_embeddings);
  model_.reset_velocity();
}

double Trainer::run_batch(std::span<const TrainingExample> examples, std::span<const std::size_t> batch) {
  model_.zero_grad();
  double loss = 0.0;
  for (std::size_t i : batch) loss += model_.accumulate_gradient(examples[i].tokens, examples[i].target);
  model_.sgd_step(config_.learning_rate, config_.momentum, 1.0 / static_cast<double>(batch.size()));
  return loss;
}

double Trainer::train_epoch(std::span<const TrainingExample> examples) {
  if (examples.empty()) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng_);
  double total = 0.0;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
    const std::size_t end = std::min(order.size(), start + config_.batch_size);
    total += run_batch(examples, std::span<const std::size_t>(order).subspan(start, end - start));
  }
  return total / static_cast<double>(examples.size());
}

double Trainer::train_batches(std::span<const TrainingExample> examples, std::size_t count) {
  if (examples.empty()) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  double total = 0.0;
  std::size_t seen = 0;
  for (std::size_t b = 0; b < count; ++b) {
    if (order_.size() != examples.size() || cursor_ >= order_.size()) {
      order_.resize(examples.size());
      std::iota(order_.begin(), order_.end(), std::size_t{0});
      shuffle(order_, rng_);
      cursor_ = 0;
    }
    const std::size_t end = std::min(order_.size(), cursor_ + config_.batch_size);
    total += run_batch(examples, std::span<const std::size_t>(order_).subspan(cursor_, end - cursor_));
    seen += end - cursor_;
    cursor_ = end;
  }
  return seen ? total / static_cast<double>(seen) : 0.0;
}

}  // namespace seedcls
