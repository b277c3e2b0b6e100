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
#include <filesystem>
#include <string>
#include <vector>

#include "seedcls/corpus.hpp"

namespace seedcls {

/// Topical toy corpus: each class owns a disjoint topical vocabulary and all
/// classes share one background vocabulary. Word frequencies within each pool
/// follow 1/rank.
struct SynthConfig {
  std::size_t classes = 3;
  std::size_t docs_per_class = 500;
  std::size_t topic_words = 60;
  std::size_t background_words = 200;
  std::size_t min_length = 30;
  std::size_t max_length = 70;
  double topic_share = 0.4;  // chance a token comes from the class vocabulary
  std::size_t seeds_per_class = 3;
  std::size_t labeled_per_class = 10;
  std::uint64_t rng_seed = 7;

  void validate() const;
};

struct SynthCorpus {
  std::vector<std::string> class_names;
  std::vector<CorpusLine> lines;  // labeled, shuffled
  std::vector<std::vector<std::string>> seed_keywords;
  std::vector<std::vector<std::size_t>> labeled_doc_ids;
};

/// Name of topical word k of a class; k = 0 is the class name itself.
std::string topic_word(const std::string& class_name, std::size_t k);

SynthCorpus generate_synthetic_corpus(const SynthConfig& config);

/// Writes corpus.tsv, label_names.txt, keywords.tsv and labeled_docs.tsv.
void write_synthetic_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace seedcls
