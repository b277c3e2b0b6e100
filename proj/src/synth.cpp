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

#include "seedcls/synth.hpp"

#include <fstream>
#include <numeric>

#include "seedcls/error.hpp"
#include "seedcls/random.hpp"

namespace seedcls {

namespace {

const char* const kClassNames[] = {"sports", "politics", "science", "business",
                                   "health", "arts",     "travel",  "food"};

std::vector<double> zipf_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / static_cast<double>(r + 1);
  return w;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (classes < 2 || classes > std::size(kClassNames)) {
    throw Error(ErrorCode::kValidation, "synthetic corpus supports 2 to 8 classes");
  }
  if (docs_per_class < 1 || topic_words < seeds_per_class || topic_words < 1 || background_words < 1) {
    throw Error(ErrorCode::kValidation, "synthetic corpus sizes must be positive");
  }
  if (min_length < 1 || max_length < min_length) throw Error(ErrorCode::kValidation, "bad synthetic length range");
  if (!(topic_share > 0.0 && topic_share <= 1.0)) throw Error(ErrorCode::kValidation, "topic_share must lie in (0, 1]");
  if (labeled_per_class > docs_per_class) throw Error(ErrorCode::kValidation, "too many labeled documents per class");
}

std::string topic_word(const std::string& class_name, std::size_t k) {
  return k == 0 ? class_name : class_name + std::to_string(k);
}

SynthCorpus generate_synthetic_corpus(const SynthConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);
  SynthCorpus out;
  for (std::size_t c = 0; c < config.classes; ++c) out.class_names.emplace_back(kClassNames[c]);

  const AliasTable topic_table(zipf_weights(config.topic_words));
  const AliasTable background_table(zipf_weights(config.background_words));

  struct Pending {
    std::size_t cls;
    std::string text;
  };
  std::vector<Pending> pending;
  for (std::size_t c = 0; c < config.classes; ++c) {
    for (std::size_t d = 0; d < config.docs_per_class; ++d) {
      const std::size_t len = config.min_length + uniform_index(rng, config.max_length - config.min_length + 1);
      std::string text;
      for (std::size_t k = 0; k < len; ++k) {
        if (k) text.push_back(' ');
        if (uniform01(rng) < config.topic_share) {
          text += topic_word(out.class_names[c], topic_table.sample(rng));
        } else {
          text += "common" + std::to_string(background_table.sample(rng));
        }
      }
      pending.push_back({c, std::move(text)});
    }
  }
  std::vector<std::size_t> order(pending.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);

  out.labeled_doc_ids.resize(config.classes);
  for (std::size_t i = 0; i < order.size(); ++i) {
    Pending& p = pending[order[i]];
    if (out.labeled_doc_ids[p.cls].size() < config.labeled_per_class) out.labeled_doc_ids[p.cls].push_back(i);
    out.lines.push_back({std::move(p.text), static_cast<int>(p.cls)});
  }
  for (const auto& name : out.class_names) {
    std::vector<std::string> seeds;
    for (std::size_t k = 0; k < config.seeds_per_class; ++k) seeds.push_back(topic_word(name, k));
    out.seed_keywords.push_back(std::move(seeds));
  }
  return out;
}

void write_synthetic_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "corpus.tsv");
    for (const auto& line : corpus.lines) out << *line.label << '\t' << line.text << '\n';
  }
  {
    auto out = open_out(dir / "label_names.txt");
    for (const auto& name : corpus.class_names) out << name << '\n';
  }
  {
    auto out = open_out(dir / "keywords.tsv");
    for (std::size_t c = 0; c < corpus.seed_keywords.size(); ++c) {
      out << c << '\t';
      for (std::size_t k = 0; k < corpus.seed_keywords[c].size(); ++k) {
        if (k) out << ',';
        out << corpus.seed_keywords[c][k];
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "labeled_docs.tsv");
    for (std::size_t c = 0; c < corpus.labeled_doc_ids.size(); ++c)
      for (std::size_t id : corpus.labeled_doc_ids[c]) out << c << '\t' << id << '\n';
  }
}

}  // namespace seedcls
