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

#include "seedcls/pseudogen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "json.hpp"

#include "seedcls/error.hpp"
#include "seedcls/vector_ops.hpp"

namespace seedcls {

void GeneratorConfig::validate() const {
  const bool in_range = parameter_study ? (alpha >= 0.0 && alpha <= 1.0) : (alpha > 0.0 && alpha < 1.0);
  if (!in_range) {
    throw Error(ErrorCode::kInvalidArgument,
                parameter_study ? "alpha must lie in [0, 1]" : "alpha must lie in (0, 1)");
  }
  if (beta < 1) throw Error(ErrorCode::kInvalidArgument, "beta must be >= 1");
  if (gamma < 1) throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 1");
}

std::vector<double> pseudo_label(std::size_t j, double alpha, std::size_t m) {
  if (m == 0 || j >= m) throw Error(ErrorCode::kInvalidArgument, "class index out of range");
  if (alpha < 0.0 || alpha > 1.0) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  const double share = alpha / static_cast<double>(m);
  std::vector<double> label(m, share);
  // (1 - alpha) + alpha/m, rearranged; rounds better
  label[j] = 1.0 - static_cast<double>(m - 1) * share;
  return label;
}

std::size_t default_doc_length(const Corpus& corpus) {
  const double mean = std::round(corpus.mean_document_length());
  return static_cast<std::size_t>(std::clamp(mean, 10.0, 500.0));
}

std::vector<double> word_distribution(std::span<const double> doc_vector, const EmbeddingMatrix& embeddings,
                                      std::span<const double> background, double alpha, std::size_t gamma) {
  const std::size_t V = embeddings.rows();
  if (background.size() != V) throw Error(ErrorCode::kDimensionMismatch, "background length differs from vocabulary");
  if (gamma < 1 || gamma > V) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [1, V]");

  std::vector<double> probs(V);
  for (std::size_t w = 0; w < V; ++w) probs[w] = alpha * background[w];
  if (alpha == 1.0) return probs;

  const std::vector<WordId> top = embeddings.nearest_words(doc_vector, gamma);
  std::vector<double> logits;
  logits.reserve(top.size());
  for (WordId w : top) logits.push_back(dot(doc_vector, embeddings.row(w)));
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - peak);
    z += l;
  }
  for (std::size_t i = 0; i < top.size(); ++i) probs[top[i]] += (1.0 - alpha) * logits[i] / z;
  return probs;
}

PseudoDocument generate_document(const VmfDistribution& class_dist, std::size_t class_index,
                                 std::size_t num_classes, const GeneratorConfig& config,
                                 const EmbeddingMatrix& embeddings, std::span<const double> background,
                                 Rng& rng) {
  if (config.doc_length < 1) throw Error(ErrorCode::kInvalidArgument, "doc_length must be resolved before generation");
  const std::vector<double> d = sample_one(class_dist, rng);
  const std::vector<double> probs = word_distribution(d, embeddings, background, config.alpha, config.gamma);
  const AliasTable table(probs);
  PseudoDocument doc;
  doc.class_of_origin = class_index;
  doc.tokens.reserve(config.doc_length);
  for (std::size_t k = 0; k < config.doc_length; ++k) doc.tokens.push_back(static_cast<WordId>(table.sample(rng)));
  doc.pseudo_label = pseudo_label(class_index, config.alpha, num_classes);
  return doc;
}

std::vector<PseudoDocument> generate_all(std::span<const VmfDistribution> class_dists,
                                         const GeneratorConfig& config, const EmbeddingMatrix& embeddings,
                                         std::span<const double> background, std::size_t threads) {
  config.validate();
  const std::size_t m = class_dists.size();
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "pseudo document generation needs at least 2 classes");
  std::vector<std::vector<PseudoDocument>> per_class(m);

  auto run_class = [&](std::size_t j) {
    Rng rng = derive_stream(config.rng_seed, j);
    per_class[j].reserve(config.beta);
    for (std::size_t i = 0; i < config.beta; ++i) {
      per_class[j].push_back(generate_document(class_dists[j], j, m, config, embeddings, background, rng));
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, m);
  if (threads == 1) {
    for (std::size_t j = 0; j < m; ++j) run_class(j);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t j = t; j < m; j += threads) run_class(j);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<PseudoDocument> out;
  out.reserve(m * config.beta);
  for (auto& docs : per_class)
    for (auto& d : docs) out.push_back(std::move(d));
  return out;
}

void write_pseudo_documents(std::ostream& out, std::span<const PseudoDocument> docs, const Vocabulary& vocab) {
  for (const auto& d : docs) {
    out << d.class_of_origin << '\t';
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out << ' ';
      out << vocab.word(d.tokens[i]);
    }
    out << '\n';
  }
}

void write_pseudo_labels(std::ostream& out, std::span<const PseudoDocument> docs) {
  for (const auto& d : docs) out << nlohmann::json(d.pseudo_label).dump() << '\n';
}

std::vector<PseudoDocument> read_pseudo_documents(std::istream& docs_in, std::istream* labels_in,
                                                  const Vocabulary& vocab, std::size_t num_classes,
                                                  double alpha) {
  std::vector<PseudoDocument> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(docs_in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kValidation, "pseudo documents line " + std::to_string(line_no) + ": missing TAB");
    }
    PseudoDocument doc;
    doc.class_of_origin = std::stoul(line.substr(0, tab));
    if (doc.class_of_origin >= num_classes) {
      throw Error(ErrorCode::kLabelOutOfRange, "pseudo documents line " + std::to_string(line_no));
    }
    std::istringstream words(line.substr(tab + 1));
    std::string w;
    while (words >> w) {
      auto id = vocab.find(w);
      if (!id) throw Error(ErrorCode::kVocabularyMismatch, "pseudo document word '" + w + "' not in vocabulary");
      doc.tokens.push_back(*id);
    }
    if (labels_in) {
      std::string label_line;
      if (!std::getline(*labels_in, label_line)) {
        throw Error(ErrorCode::kLengthMismatch, "fewer pseudo labels than pseudo documents");
      }
      doc.pseudo_label = nlohmann::json::parse(label_line).get<std::vector<double>>();
      if (doc.pseudo_label.size() != num_classes) {
        throw Error(ErrorCode::kDimensionMismatch, "pseudo label width differs from class count");
      }
    } else {
      doc.pseudo_label = pseudo_label(doc.class_of_origin, alpha, num_classes);
    }
    out.push_back(std::move(doc));
  }
  return out;
}

}  // namespace seedcls
