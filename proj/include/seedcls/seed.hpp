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
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "seedcls/corpus.hpp"
#include "seedcls/embedding.hpp"

namespace seedcls {

struct LabelNames {
  std::vector<std::string> names;
};

struct KeywordLists {
  std::vector<std::vector<std::string>> keywords;
};

struct LabeledDocs {
  std::vector<std::vector<std::size_t>> doc_ids;  // per class, source line ids
};

/// Exactly one weak-supervision source.
using Supervision = std::variant<LabelNames, KeywordLists, LabeledDocs>;

std::size_t num_classes(const Supervision& s);

/// Checks m >= 2 and that every per-class list is non-empty; with a corpus,
/// also that labeled document ids exist.
void validate_supervision(const Supervision& s, const Corpus* corpus = nullptr);

/// One name per line; line order defines the class index.
LabelNames read_label_names(std::istream& in);
/// "class_index<TAB>w1,w2,w3" per line.
KeywordLists read_keyword_lists(std::istream& in);
/// "class_index<TAB>doc_id" per line.
LabeledDocs read_labeled_docs(std::istream& in);

struct Keyword {
  WordId id = 0;
  std::string word;
  std::vector<double> vector;
};

struct ClassKeywords {
  std::vector<std::vector<Keyword>> classes;
  std::size_t t_used = 0;

  std::size_t num_classes() const { return classes.size(); }
  std::vector<std::vector<double>> vectors(std::size_t c) const;
};

/// Largest t such that the top-t neighbor lists of `queries` are pairwise
/// disjoint, found by scanning t = 1, 2, ... until the first collision.
/// Returns 0 when t = 1 already collides.
std::size_t largest_disjoint_t(const std::vector<std::vector<double>>& queries,
                               const EmbeddingMatrix& embeddings);

ClassKeywords expand_label_names(const LabelNames& names, const Vocabulary& vocab,
                                 const EmbeddingMatrix& embeddings);

/// Seeds are always part of a class's output and count toward t. With t == 0
/// the size is picked by largest_disjoint_t on the seed means, floored at 10.
ClassKeywords expand_keywords(const KeywordLists& lists, const Vocabulary& vocab,
                              const EmbeddingMatrix& embeddings, std::size_t t = 0);

/// tf-idf keywords of each class's labeled documents. With t == 0 the size is
/// picked by largest_disjoint_t on the means of each class's top-10 tf-idf
/// keyword vectors, floored at 10.
ClassKeywords expand_labeled_docs(const LabeledDocs& docs, const Corpus& corpus,
                                  const TfIdfIndex& tfidf, const EmbeddingMatrix& embeddings,
                                  std::size_t t = 0);

/// Dispatches on the supervision kind.
ClassKeywords expand_supervision(const Supervision& s, const Corpus& corpus,
                                 const EmbeddingMatrix& embeddings, std::size_t t = 0);

/// "class_index<TAB>w1,w2,..." lines.
void write_class_keywords(std::ostream& out, const ClassKeywords& kw);
ClassKeywords read_class_keywords(std::istream& in, const Vocabulary& vocab,
                                  const EmbeddingMatrix& embeddings);

}  // namespace seedcls
