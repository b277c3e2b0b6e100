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
#include <span>
#include <vector>

#include "seedcls/corpus.hpp"
#include "seedcls/embedding.hpp"
#include "seedcls/random.hpp"
#include "seedcls/vmf.hpp"

namespace seedcls {

struct GeneratorConfig {
  double alpha = 0.2;         // background weight
  std::size_t beta = 500;     // pseudo documents per class
  std::size_t gamma = 50;     // per-document keyword vocabulary size
  std::size_t doc_length = 0; // 0 = derive from the real corpus
  std::uint64_t rng_seed = 1;
  bool parameter_study = false;  // permits alpha in {0, 1}

  void validate() const;
};

struct PseudoDocument {
  std::vector<WordId> tokens;
  std::size_t class_of_origin = 0;
  std::vector<double> pseudo_label;
};

/// Entry j is (1 - alpha) + alpha/m, every other entry alpha/m.
std::vector<double> pseudo_label(std::size_t j, double alpha, std::size_t m);

/// Rounded mean real-document length, clamped to [10, 500].
std::size_t default_doc_length(const Corpus& corpus);

/// Background/keyword mixture over the vocabulary for one document vector:
/// alpha * p_B(w), plus (1 - alpha) * softmax(d . v_w) restricted to the
/// gamma words closest to d.
std::vector<double> word_distribution(std::span<const double> doc_vector, const EmbeddingMatrix& embeddings,
                                      std::span<const double> background, double alpha, std::size_t gamma);

/// Draws d from the class distribution, builds the mixture once, then draws
/// doc_length tokens i.i.d. from it. `doc_length` in config must be resolved
/// (non-zero).
PseudoDocument generate_document(const VmfDistribution& class_dist, std::size_t class_index,
                                 std::size_t num_classes, const GeneratorConfig& config,
                                 const EmbeddingMatrix& embeddings, std::span<const double> background,
                                 Rng& rng);

/// beta documents per class, class-major. Class j draws from the stream
/// derive_stream(rng_seed, j), so output is independent of `threads`.
std::vector<PseudoDocument> generate_all(std::span<const VmfDistribution> class_dists,
                                         const GeneratorConfig& config, const EmbeddingMatrix& embeddings,
                                         std::span<const double> background, std::size_t threads = 1);

/// "class<TAB>space-joined tokens" per document.
void write_pseudo_documents(std::ostream& out, std::span<const PseudoDocument> docs,
                            const Vocabulary& vocab);
/// One JSON array per line.
void write_pseudo_labels(std::ostream& out, std::span<const PseudoDocument> docs);
/// Reads the pair written above; the label stream may be null, in which case
/// labels are rebuilt from the class column with `alpha`.
std::vector<PseudoDocument> read_pseudo_documents(std::istream& docs_in, std::istream* labels_in,
                                                  const Vocabulary& vocab, std::size_t num_classes,
                                                  double alpha);

}  // namespace seedcls
