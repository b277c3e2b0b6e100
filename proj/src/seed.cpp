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

#include "seedcls/seed.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "seedcls/error.hpp"
#include "seedcls/vector_ops.hpp"

namespace seedcls {

namespace {

constexpr std::size_t kMinExpansion = 10;

std::size_t parse_index(std::string_view field, std::size_t line_no, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kValidation,
                "line " + std::to_string(line_no) + ": " + what + " must be a non-negative integer");
  }
  return value;
}

template <typename Fn>
void for_each_tab_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kValidation, "line " + std::to_string(line_no) + ": expected a TAB separator");
    }
    const std::size_t cls = parse_index(std::string_view(line).substr(0, tab), line_no, "class index");
    fn(cls, line.substr(tab + 1), line_no);
  }
}

template <typename T>
void grow_to(std::vector<T>& v, std::size_t index) {
  if (v.size() <= index) v.resize(index + 1);
}

std::vector<double> mean_direction(const std::vector<std::vector<double>>& vectors) {
  std::vector<double> sum(vectors.front().size(), 0.0);
  for (const auto& v : vectors)
    for (std::size_t k = 0; k < v.size(); ++k) sum[k] += v[k];
  if (norm(sum) < 1e-12) return sum;
  return normalized(sum);
}

Keyword make_keyword(WordId id, const EmbeddingMatrix& embeddings) {
  auto row = embeddings.row(id);
  return Keyword{id, embeddings.word(id), std::vector<double>(row.begin(), row.end())};
}

void check_alignment(const Vocabulary& vocab, const EmbeddingMatrix& embeddings) {
  if (vocab.size() != embeddings.rows()) {
    throw Error(ErrorCode::kVocabularyMismatch, "embedding rows do not match the vocabulary");
  }
}

}  // namespace

std::size_t num_classes(const Supervision& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LabelNames>) return v.names.size();
        else if constexpr (std::is_same_v<T, KeywordLists>) return v.keywords.size();
        else return v.doc_ids.size();
      },
      s);
}

void validate_supervision(const Supervision& s, const Corpus* corpus) {
  const std::size_t m = num_classes(s);
  if (m < 2) throw Error(ErrorCode::kValidation, "supervision must cover at least 2 classes");
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        for (std::size_t c = 0; c < m; ++c) {
          bool empty = false;
          if constexpr (std::is_same_v<T, LabelNames>) empty = v.names[c].empty();
          else if constexpr (std::is_same_v<T, KeywordLists>) empty = v.keywords[c].empty();
          else empty = v.doc_ids[c].empty();
          if (empty) throw Error(ErrorCode::kValidation, "class " + std::to_string(c) + " has no supervision");
        }
        if constexpr (std::is_same_v<T, LabeledDocs>) {
          if (corpus) {
            for (std::size_t c = 0; c < m; ++c)
              for (std::size_t id : v.doc_ids[c])
                if (!corpus->position_of(id))
                  throw Error(ErrorCode::kValidation, "labeled document " + std::to_string(id) +
                                                          " is not in the corpus");
          }
        }
      },
      s);
}

LabelNames read_label_names(std::istream& in) {
  LabelNames out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.names.push_back(line);
  }
  return out;
}

KeywordLists read_keyword_lists(std::istream& in) {
  KeywordLists out;
  for_each_tab_line(in, [&](std::size_t cls, const std::string& rest, std::size_t) {
    grow_to(out.keywords, cls);
    std::stringstream ss(rest);
    std::string w;
    while (std::getline(ss, w, ',')) {
      auto toks = tokenize(w);
      if (toks.size() == 1) out.keywords[cls].push_back(toks.front());
      else if (!toks.empty()) spdlog::warn("keyword '{}' spans several tokens; skipped", w);
    }
  });
  return out;
}

LabeledDocs read_labeled_docs(std::istream& in) {
  LabeledDocs out;
  for_each_tab_line(in, [&](std::size_t cls, const std::string& rest, std::size_t line_no) {
    grow_to(out.doc_ids, cls);
    out.doc_ids[cls].push_back(parse_index(rest, line_no, "document id"));
  });
  return out;
}

std::vector<std::vector<double>> ClassKeywords::vectors(std::size_t c) const {
  std::vector<std::vector<double>> out;
  out.reserve(classes[c].size());
  for (const auto& k : classes[c]) out.push_back(k.vector);
  return out;
}

std::size_t largest_disjoint_t(const std::vector<std::vector<double>>& queries,
                               const EmbeddingMatrix& embeddings) {
  const std::size_t m = queries.size();
  std::vector<std::vector<WordId>> rankings;
  rankings.reserve(m);
  for (const auto& q : queries) rankings.push_back(embeddings.nearest_words(q, embeddings.rows()));

  std::unordered_map<WordId, std::size_t> owner;
  for (std::size_t t = 1; t <= embeddings.rows(); ++t) {
    for (std::size_t c = 0; c < m; ++c) {
      const WordId w = rankings[c][t - 1];
      auto [it, inserted] = owner.emplace(w, c);
      if (!inserted && it->second != c) return t - 1;
    }
  }
  return embeddings.rows();
}

ClassKeywords expand_label_names(const LabelNames& names, const Vocabulary& vocab,
                                 const EmbeddingMatrix& embeddings) {
  check_alignment(vocab, embeddings);
  std::vector<std::vector<double>> queries;
  for (std::size_t c = 0; c < names.names.size(); ++c) {
    std::vector<std::vector<double>> parts;
    for (const auto& tok : tokenize(names.names[c])) {
      if (auto id = vocab.find(tok)) {
        auto row = embeddings.row(*id);
        parts.emplace_back(row.begin(), row.end());
      }
    }
    if (parts.empty()) {
      throw Error(ErrorCode::kNameOutOfVocabulary,
                  "class " + std::to_string(c) + " name '" + names.names[c] + "' has no vocabulary word");
    }
    queries.push_back(mean_direction(parts));
  }

  const std::size_t t = largest_disjoint_t(queries, embeddings);
  if (t == 0) {
    throw Error(ErrorCode::kNoDisjointExpansion, "two classes share their nearest word");
  }
  ClassKeywords out;
  out.t_used = t;
  for (const auto& q : queries) {
    std::vector<Keyword> kws;
    for (WordId w : embeddings.nearest_words(q, t)) kws.push_back(make_keyword(w, embeddings));
    out.classes.push_back(std::move(kws));
  }
  return out;
}

ClassKeywords expand_keywords(const KeywordLists& lists, const Vocabulary& vocab,
                              const EmbeddingMatrix& embeddings, std::size_t t) {
  check_alignment(vocab, embeddings);
  const std::size_t m = lists.keywords.size();
  std::vector<std::vector<WordId>> seeds(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::set<WordId> seen;
    for (const auto& kw : lists.keywords[c]) {
      auto id = vocab.find(kw);
      if (!id) {
        spdlog::warn("class {}: seed keyword '{}' is not in the vocabulary; dropped", c, kw);
        continue;
      }
      if (seen.insert(*id).second) seeds[c].push_back(*id);
    }
    if (seeds[c].empty()) {
      throw Error(ErrorCode::kAllSeedsOutOfVocabulary, "class " + std::to_string(c));
    }
  }

  // Mean dot product to the seeds equals the dot product with the seed sum / n.
  std::vector<std::vector<double>> centroids(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> sum(embeddings.dim(), 0.0);
    for (WordId w : seeds[c]) {
      auto row = embeddings.row(w);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += row[k];
    }
    for (double& x : sum) x /= static_cast<double>(seeds[c].size());
    centroids[c] = std::move(sum);
  }

  if (t == 0) {
    std::vector<std::vector<double>> queries;
    for (const auto& cen : centroids) queries.push_back(norm(cen) > 0 ? normalized(cen) : cen);
    t = std::max(kMinExpansion, largest_disjoint_t(queries, embeddings));
  }

  ClassKeywords out;
  out.t_used = t;
  for (std::size_t c = 0; c < m; ++c) {
    const std::unordered_set<WordId> seed_set(seeds[c].begin(), seeds[c].end());
    const std::size_t extra = t > seeds[c].size() ? t - seeds[c].size() : 0;
    std::vector<WordId> chosen = embeddings.nearest_words(centroids[c], extra, seed_set);
    chosen.insert(chosen.end(), seeds[c].begin(), seeds[c].end());
    std::vector<std::pair<double, WordId>> scored;
    for (WordId w : chosen) scored.emplace_back(dot(centroids[c], embeddings.row(w)), w);
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return embeddings.word(a.second) < embeddings.word(b.second);
    });
    std::vector<Keyword> kws;
    for (auto& [s, w] : scored) kws.push_back(make_keyword(w, embeddings));
    out.classes.push_back(std::move(kws));
  }
  return out;
}

ClassKeywords expand_labeled_docs(const LabeledDocs& docs, const Corpus& corpus,
                                  const TfIdfIndex& tfidf, const EmbeddingMatrix& embeddings,
                                  std::size_t t) {
  check_alignment(corpus.vocabulary(), embeddings);
  const std::size_t m = docs.doc_ids.size();
  std::vector<std::vector<Document>> subsets(m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t id : docs.doc_ids[c]) {
      auto pos = corpus.position_of(id);
      if (!pos) {
        spdlog::warn("class {}: labeled document {} not in corpus; skipped", c, id);
        continue;
      }
      subsets[c].push_back(corpus[*pos]);
    }
  }

  if (t == 0) {
    std::vector<std::vector<double>> queries;
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<std::vector<double>> vecs;
      for (WordId w : tfidf_keywords(subsets[c], corpus.vocabulary(), tfidf, kMinExpansion)) {
        auto row = embeddings.row(w);
        vecs.emplace_back(row.begin(), row.end());
      }
      queries.push_back(mean_direction(vecs));
    }
    t = std::max(kMinExpansion, largest_disjoint_t(queries, embeddings));
  }

  ClassKeywords out;
  out.t_used = t;
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<Keyword> kws;
    for (WordId w : tfidf_keywords(subsets[c], corpus.vocabulary(), tfidf, t)) {
      kws.push_back(make_keyword(w, embeddings));
    }
    out.classes.push_back(std::move(kws));
  }
  return out;
}

ClassKeywords expand_supervision(const Supervision& s, const Corpus& corpus,
                                 const EmbeddingMatrix& embeddings, std::size_t t) {
  validate_supervision(s, &corpus);
  if (const auto* names = std::get_if<LabelNames>(&s)) {
    return expand_label_names(*names, corpus.vocabulary(), embeddings);
  }
  if (const auto* kws = std::get_if<KeywordLists>(&s)) {
    return expand_keywords(*kws, corpus.vocabulary(), embeddings, t);
  }
  const TfIdfIndex tfidf(corpus);
  return expand_labeled_docs(std::get<LabeledDocs>(s), corpus, tfidf, embeddings, t);
}

void write_class_keywords(std::ostream& out, const ClassKeywords& kw) {
  for (std::size_t c = 0; c < kw.classes.size(); ++c) {
    out << c << '\t';
    for (std::size_t i = 0; i < kw.classes[c].size(); ++i) {
      if (i) out << ',';
      out << kw.classes[c][i].word;
    }
    out << '\n';
  }
}

ClassKeywords read_class_keywords(std::istream& in, const Vocabulary& vocab,
                                  const EmbeddingMatrix& embeddings) {
  check_alignment(vocab, embeddings);
  ClassKeywords out;
  for_each_tab_line(in, [&](std::size_t cls, const std::string& rest, std::size_t line_no) {
    grow_to(out.classes, cls);
    std::stringstream ss(rest);
    std::string w;
    while (std::getline(ss, w, ',')) {
      auto id = vocab.find(w);
      if (!id) {
        throw Error(ErrorCode::kVocabularyMismatch,
                    "line " + std::to_string(line_no) + ": keyword '" + w + "' not in vocabulary");
      }
      out.classes[cls].push_back(make_keyword(*id, embeddings));
    }
  });
  for (const auto& c : out.classes) out.t_used = std::max(out.t_used, c.size());
  return out;
}

}  // namespace seedcls
