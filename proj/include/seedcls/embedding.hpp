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
#include <string>
#include <unordered_set>
#include <vector>

#include "seedcls/corpus.hpp"

namespace seedcls {

/// Row-major V x dim matrix of unit-norm word vectors, aligned with a
/// Vocabulary's index space.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> words, std::size_t dim, std::vector<double> values);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return words_.size(); }
  const std::string& word(WordId w) const { return words_[w]; }
  const std::vector<std::string>& words() const { return words_; }

  std::span<const double> row(WordId w) const { return {values_.data() + w * dim_, dim_}; }
  std::span<const double> values() const { return values_; }

  /// Scales each row to unit Euclidean norm. All-zero rows are left unchanged.
  void normalize_rows();

  /// Top-k rows by dot product with `query`, skipping `exclude`; ties break
  /// lexicographically on the word.
  std::vector<WordId> nearest_words(std::span<const double> query, std::size_t k,
                                    const std::unordered_set<WordId>& exclude = {}) const;

  /// word2vec text format: "V p" header, then "word v1 ... vp", 6 decimals.
  void write_text(std::ostream& out) const;

 private:
  std::vector<std::string> words_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct SkipGramConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double subsample_threshold = 1e-3;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Skip-gram with negative sampling (unigram^0.75 noise, frequency
/// subsampling, linearly decayed learning rate). Single-threaded and
/// bit-reproducible for a fixed seed. Returns unit-normalized vectors.
EmbeddingMatrix train_skipgram(const Corpus& corpus, const SkipGramConfig& config);

struct LoadReport {
  std::size_t missing = 0;  // vocabulary words absent from the file
  std::size_t ignored = 0;  // file rows not in the vocabulary
};

/// Parses word2vec text vectors and aligns them with `vocab`. Vocabulary words
/// missing from the file get seeded uniform(-0.5/p, 0.5/p) vectors. Rows are
/// normalized afterwards.
EmbeddingMatrix load_embeddings(std::istream& in, const Vocabulary& vocab, std::uint64_t rng_seed,
                                LoadReport* report = nullptr);

/// Reads a word2vec text file without aligning it to any vocabulary.
EmbeddingMatrix read_embeddings_text(std::istream& in);

}  // namespace seedcls
