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
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seedcls {

using WordId = std::uint32_t;

struct Document {
  std::size_t id = 0;  // source line index, 0-based
  std::vector<WordId> tokens;
  std::optional<int> gold_label;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Words must be distinct; counts align with words.
  Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts);

  std::size_t size() const { return words_.size(); }
  const std::string& word(WordId id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }
  std::uint64_t count(WordId id) const { return counts_[id]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_tokens() const { return total_tokens_; }

  std::optional<WordId> find(std::string_view word) const;

  /// FNV-1a over the newline-joined word list; identifies the index space a
  /// model or embedding file was built against.
  std::uint64_t hash() const;

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
  std::uint64_t total_tokens_ = 0;
};

struct CorpusLine {
  std::string text;
  std::optional<int> label;
};

class Corpus {
 public:
  Corpus() = default;
  Corpus(Vocabulary vocab, std::vector<Document> docs, std::size_t dropped);

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  const Document& operator[](std::size_t i) const { return docs_[i]; }

  /// Number of input lines dropped because nothing survived filtering.
  std::size_t dropped() const { return dropped_; }

  /// Position of the document whose source line is `id`, if kept.
  std::optional<std::size_t> position_of(std::size_t id) const;

  bool has_gold_labels() const;
  double mean_document_length() const;

 private:
  Vocabulary vocab_;
  std::vector<Document> docs_;
  std::unordered_map<std::size_t, std::size_t> position_;
  std::size_t dropped_ = 0;
};

/// Lowercased ASCII-alphanumeric runs; every other byte is a separator.
std::vector<std::string> tokenize(std::string_view text);

/// Builds the vocabulary (words with frequency >= min_count, ordered by
/// descending count then lexicographically) and the filtered documents.
/// Throws AllDocumentsEmpty when no document survives.
Corpus build_corpus(std::span<const CorpusLine> lines, std::uint64_t min_count);

/// Reads one document per line. With `labeled`, each line is
/// "label<TAB>text" where label is a 0-based class index.
std::vector<CorpusLine> read_corpus_lines(std::istream& in, bool labeled);

/// p_B(w) = count(w) / total_tokens.
std::vector<double> background_distribution(const Corpus& corpus);

class TfIdfIndex {
 public:
  explicit TfIdfIndex(const Corpus& corpus);

  double idf(WordId w) const { return idf_[w]; }
  std::uint64_t doc_freq(WordId w) const { return doc_freq_[w]; }
  std::size_t num_documents() const { return n_docs_; }

 private:
  std::vector<double> idf_;
  std::vector<std::uint64_t> doc_freq_;
  std::size_t n_docs_ = 0;
};

/// Top-t words by mean tf-idf over `docs` (tf = within-document relative
/// frequency). Ties break lexicographically. Throws EmptySubset.
std::vector<WordId> tfidf_keywords(std::span<const Document> docs, const Vocabulary& vocab,
                                   const TfIdfIndex& index, std::size_t t);

}  // namespace seedcls
