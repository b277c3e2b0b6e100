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

#include "seedcls/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "seedcls/error.hpp"

namespace seedcls {

namespace {

bool is_alnum_ascii(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char to_lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
  if (words_.size() != counts_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "vocabulary words and counts differ in length");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vocabulary word '" + words_[i] + "'");
    }
  }
  total_tokens_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ull;
  };
  for (const auto& w : words_) {
    for (unsigned char c : w) mix(c);
    mix('\n');
  }
  return h;
}

Corpus::Corpus(Vocabulary vocab, std::vector<Document> docs, std::size_t dropped)
    : vocab_(std::move(vocab)), docs_(std::move(docs)), dropped_(dropped) {
  for (std::size_t i = 0; i < docs_.size(); ++i) position_.emplace(docs_[i].id, i);
}

std::optional<std::size_t> Corpus::position_of(std::size_t id) const {
  auto it = position_.find(id);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

bool Corpus::has_gold_labels() const {
  return !docs_.empty() &&
         std::all_of(docs_.begin(), docs_.end(), [](const Document& d) { return d.gold_label.has_value(); });
}

double Corpus::mean_document_length() const {
  if (docs_.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& d : docs_) total += d.tokens.size();
  return static_cast<double>(total) / static_cast<double>(docs_.size());
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (is_alnum_ascii(c)) {
      current.push_back(to_lower_ascii(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Corpus build_corpus(std::span<const CorpusLine> lines, std::uint64_t min_count) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(lines.size());
  std::map<std::string, std::uint64_t> freq;
  for (const auto& line : lines) {
    tokenized.push_back(tokenize(line.text));
    for (const auto& tok : tokenized.back()) ++freq[tok];
  }

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : freq) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [w, c] : kept) words.push_back(w);
  std::unordered_map<std::string, WordId> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], static_cast<WordId>(i));

  std::vector<Document> docs;
  std::vector<std::uint64_t> counts(words.size(), 0);
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < tokenized.size(); ++i) {
    Document doc;
    doc.id = i;
    doc.gold_label = lines[i].label;
    for (const auto& tok : tokenized[i]) {
      auto it = index.find(tok);
      if (it == index.end()) continue;
      doc.tokens.push_back(it->second);
      ++counts[it->second];
    }
    if (doc.tokens.empty()) {
      ++dropped;
      continue;
    }
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) {
    throw Error(ErrorCode::kAllDocumentsEmpty,
                "no document has a token with frequency >= " + std::to_string(min_count));
  }
  return Corpus(Vocabulary(std::move(words), std::move(counts)), std::move(docs), dropped);
}

std::vector<CorpusLine> read_corpus_lines(std::istream& in, bool labeled) {
  std::vector<CorpusLine> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!labeled) {
      lines.push_back({line, std::nullopt});
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kValidation,
                  "line " + std::to_string(line_no) + ": expected 'label<TAB>text'");
    }
    int label = 0;
    const char* first = line.data();
    const char* last = line.data() + tab;
    auto [ptr, ec] = std::from_chars(first, last, label);
    if (ec != std::errc() || ptr != last || label < 0) {
      throw Error(ErrorCode::kValidation,
                  "line " + std::to_string(line_no) + ": label must be a non-negative integer");
    }
    lines.push_back({line.substr(tab + 1), label});
  }
  return lines;
}

std::vector<double> background_distribution(const Corpus& corpus) {
  const auto& vocab = corpus.vocabulary();
  std::vector<double> probs(vocab.size());
  const double total = static_cast<double>(vocab.total_tokens());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    probs[w] = static_cast<double>(vocab.count(static_cast<WordId>(w))) / total;
  }
  return probs;
}

TfIdfIndex::TfIdfIndex(const Corpus& corpus)
    : idf_(corpus.vocabulary().size(), 0.0),
      doc_freq_(corpus.vocabulary().size(), 0),
      n_docs_(corpus.size()) {
  std::vector<std::size_t> last_seen(doc_freq_.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (WordId w : corpus[i].tokens) {
      if (last_seen[w] != i) {
        last_seen[w] = i;
        ++doc_freq_[w];
      }
    }
  }
  for (std::size_t w = 0; w < idf_.size(); ++w) {
    // Every in-vocabulary word occurs in some kept document.
    idf_[w] = std::log(static_cast<double>(n_docs_) / static_cast<double>(doc_freq_[w]));
  }
}

std::vector<WordId> tfidf_keywords(std::span<const Document> docs, const Vocabulary& vocab,
                                   const TfIdfIndex& index, std::size_t t) {
  if (docs.empty()) throw Error(ErrorCode::kEmptySubset, "tf-idf keyword extraction on no documents");
  if (t == 0) throw Error(ErrorCode::kInvalidArgument, "t must be at least 1");

  // Per-document contributions are summed in sorted order so the score is
  // bit-identical under any reordering of `docs`.
  std::map<WordId, std::vector<double>> contributions;
  for (const auto& doc : docs) {
    std::map<WordId, std::size_t> tf;
    for (WordId w : doc.tokens) ++tf[w];
    const double len = static_cast<double>(doc.tokens.size());
    for (auto [w, c] : tf) contributions[w].push_back(static_cast<double>(c) / len * index.idf(w));
  }
  std::vector<std::pair<WordId, double>> ranked;
  ranked.reserve(contributions.size());
  for (auto& [w, parts] : contributions) {
    std::sort(parts.begin(), parts.end());
    double sum = 0.0;
    for (double v : parts) sum += v;
    ranked.emplace_back(w, sum / static_cast<double>(docs.size()));
  }
  std::sort(ranked.begin(), ranked.end(), [&vocab](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return vocab.word(a.first) < vocab.word(b.first);
  });
  if (ranked.size() > t) ranked.resize(t);
  std::vector<WordId> out;
  out.reserve(ranked.size());
  for (auto [w, s] : ranked) out.push_back(w);
  return out;
}

}  // namespace seedcls
