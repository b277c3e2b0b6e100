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

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "seedcls/seed.hpp"
#include "seedcls/vector_ops.hpp"

using namespace seedcls;

namespace {

std::vector<std::string> words_of(const std::vector<Keyword>& kws) {
  std::vector<std::string> out;
  for (const auto& k : kws) out.push_back(k.word);
  return out;
}

// Words a0..a4 around +e1, b0..b4 around -e1, in 3-D.
EmbeddingMatrix hemispheres(std::vector<std::string>& words) {
  Rng rng(8);
  std::vector<double> v;
  words.clear();
  for (const char* p : {"a", "b"}) {
    for (int i = 0; i < 5; ++i) {
      words.push_back(p + std::to_string(i));
      auto u = testing::random_unit(3, rng);
      const double s = p[0] == 'a' ? 1.0 : -1.0;
      v.insert(v.end(), {s * (1.0 + 0.1 * i), 0.3 * u[1], 0.3 * u[2]});
    }
  }
  EmbeddingMatrix m(words, 3, v);
  m.normalize_rows();
  return m;
}

// Scans every t and intersects the neighbour sets directly.
std::size_t brute_disjoint_t(const std::vector<std::vector<double>>& queries, const EmbeddingMatrix& m) {
  std::size_t best = 0;
  for (std::size_t t = 1; t <= m.rows(); ++t) {
    std::vector<std::set<WordId>> sets;
    for (const auto& q : queries) {
      std::vector<WordId> ids(m.rows());
      std::iota(ids.begin(), ids.end(), 0u);
      std::stable_sort(ids.begin(), ids.end(), [&](WordId a, WordId b) {
        const double da = dot(q, m.row(a)), db = dot(q, m.row(b));
        return da != db ? da > db : m.word(a) < m.word(b);
      });
      sets.emplace_back(ids.begin(), ids.begin() + t);
    }
    bool disjoint = true;
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j)
        for (WordId w : sets[i]) disjoint &= !sets[j].count(w);
    if (!disjoint) break;
    best = t;
  }
  return best;
}

std::vector<double> row_vec(const EmbeddingMatrix& m, WordId w) { return {m.row(w).begin(), m.row(w).end()}; }

}  // namespace

TEST_CASE("label-name expansion") {
  SUBCASE("opposite hemispheres") {
    std::vector<std::string> words;
    const auto m = hemispheres(words);
    const auto vocab = testing::vocab_of(words);
    auto kw = expand_label_names(LabelNames{{"a0", "b0"}}, vocab, m);
    CHECK(kw.t_used == 5);
    CHECK(kw.t_used == brute_disjoint_t({row_vec(m, 0), row_vec(m, 5)}, m));
    std::vector<std::string> a = words_of(kw.classes[0]), b = words_of(kw.classes[1]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == std::vector<std::string>{"a0", "a1", "a2", "a3", "a4"});
    CHECK(b == std::vector<std::string>{"b0", "b1", "b2", "b3", "b4"});
  }
  SUBCASE("identical names collide") {
    std::vector<std::string> words;
    const auto m = hemispheres(words);
    CHECK(testing::thrown_code([&] { expand_label_names(LabelNames{{"a1", "a1"}}, testing::vocab_of(words), m); }) ==
          "NoDisjointExpansion");
  }
  SUBCASE("unknown name") {
    std::vector<std::string> words;
    const auto m = hemispheres(words);
    CHECK(testing::thrown_code([&] { expand_label_names(LabelNames{{"a1", "zz"}}, testing::vocab_of(words), m); }) ==
          "NameOutOfVocabulary");
  }
  SUBCASE("random matrices: disjoint lists headed by the name word") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const auto words = testing::numbered_words("w", 60);
      const auto m = testing::random_embeddings(words, 6, 100 + trial);
      const auto vocab = testing::vocab_of(words);
      std::vector<std::string> names;
      std::vector<std::vector<double>> queries;
      for (std::size_t k = 0; k < 3; ++k) {
        names.push_back(words[k * 7]);
        queries.push_back(row_vec(m, k * 7));
      }
      auto kw = expand_label_names(LabelNames{names}, vocab, m);
      CHECK(kw.t_used >= 1);
      CHECK(kw.t_used == brute_disjoint_t(queries, m));
      std::set<std::string> all;
      std::size_t total = 0;
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(kw.classes[c].front().word == names[c]);
        for (const auto& k : kw.classes[c]) {
          all.insert(k.word);
          CHECK(std::abs(norm(k.vector) - 1.0) <= 1e-12);
        }
        total += kw.classes[c].size();
      }
      CHECK(all.size() == total);
    }
  }
}

TEST_CASE("keyword expansion") {
  const auto words = testing::numbered_words("w", 10);
  const auto m = testing::random_embeddings(words, 4, 21);
  const auto vocab = testing::vocab_of(words);

  SUBCASE("single seed equals nearest words around it") {
    for (std::size_t t : {1u, 3u, 6u}) {
      auto kw = expand_keywords(KeywordLists{{{"w2"}, {"w7"}}}, vocab, m, t);
      std::vector<WordId> got;
      for (const auto& k : kw.classes[0]) got.push_back(k.id);
      CHECK(got == m.nearest_words(m.row(2), t));
    }
  }
  SUBCASE("t = 1 keeps the seed") {
    auto kw = expand_keywords(KeywordLists{{{"w3"}, {"w5"}}}, vocab, m, 1);
    CHECK(words_of(kw.classes[0]) == std::vector<std::string>{"w3"});
  }
  SUBCASE("two seeds, t = 4, brute force") {
    auto kw = expand_keywords(KeywordLists{{{"w1", "w4"}, {"w8"}}}, vocab, m, 4);
    // mean similarity to the seeds
    auto score = [&](WordId w) { return (dot(m.row(w), m.row(1)) + dot(m.row(w), m.row(4))) / 2; };
    std::vector<WordId> rest;
    for (WordId w = 0; w < 10; ++w)
      if (w != 1 && w != 4) rest.push_back(w);
    std::sort(rest.begin(), rest.end(), [&](WordId a, WordId b) { return score(a) > score(b); });
    std::vector<WordId> expect{1, 4, rest[0], rest[1]};
    std::sort(expect.begin(), expect.end(), [&](WordId a, WordId b) { return score(a) > score(b); });
    std::vector<WordId> got;
    for (const auto& k : kw.classes[0]) got.push_back(k.id);
    CHECK(got == expect);
  }
  SUBCASE("every seed appears") {
    auto kw = expand_keywords(KeywordLists{{{"w0", "w1", "w2"}, {"w9"}}}, vocab, m, 3);
    auto got = words_of(kw.classes[0]);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::string>{"w0", "w1", "w2"});
  }
  SUBCASE("out-of-vocabulary seeds") {
    auto kw = expand_keywords(KeywordLists{{{"w0", "nope"}, {"w9"}}}, vocab, m, 2);
    CHECK(kw.classes[0].size() == 2);
    CHECK(testing::thrown_code([&] { expand_keywords(KeywordLists{{{"nope"}, {"w9"}}}, vocab, m, 2); }) ==
          "AllSeedsOutOfVocabulary");
  }
  SUBCASE("automatic t is at least 10") {
    auto kw = expand_keywords(KeywordLists{{{"w0"}, {"w9"}}}, vocab, m);
    CHECK(kw.t_used >= 10);
  }
}

TEST_CASE("labeled-document expansion") {
  std::vector<CorpusLine> lines{{"goal goal match team", 0},    {"team goal score", 0},
                                {"vote senate vote", 1},        {"senate law vote", 1},
                                {"team the the", std::nullopt}, {"the law", std::nullopt}};
  const Corpus c = build_corpus(lines, 1);
  const TfIdfIndex idx(c);
  const auto m = testing::random_embeddings(c.vocabulary().words(), 5, 3);
  auto kw = expand_labeled_docs(LabeledDocs{{{0, 1}, {2, 3}}}, c, idx, m, 1);
  CHECK(words_of(kw.classes[0]) == std::vector<std::string>{"goal"});
  CHECK(words_of(kw.classes[1]) == std::vector<std::string>{"vote"});

  auto three = expand_labeled_docs(LabeledDocs{{{0, 1}, {2, 3}}}, c, idx, m, 3);
  std::vector<Document> sub{c[0], c[1]};
  std::vector<std::string> expect;
  for (WordId w : tfidf_keywords(sub, c.vocabulary(), idx, 3)) expect.push_back(c.vocabulary().word(w));
  CHECK(words_of(three.classes[0]) == expect);
}

TEST_CASE("supervision readers and validation") {
  std::istringstream names("sports\npolitics\n\n");
  CHECK(read_label_names(names).names == std::vector<std::string>{"sports", "politics"});
  std::istringstream kws("1\tvote,senate\n0\tgoal\n");
  auto lists = read_keyword_lists(kws);
  CHECK(lists.keywords == std::vector<std::vector<std::string>>{{"goal"}, {"vote", "senate"}});
  std::istringstream docs("0\t4\n1\t9\n0\t2\n");
  CHECK(read_labeled_docs(docs).doc_ids == std::vector<std::vector<std::size_t>>{{4, 2}, {9}});

  CHECK(testing::thrown_code([] { validate_supervision(LabelNames{{"one"}}); }) == "Validation");
  CHECK(testing::thrown_code([] { validate_supervision(KeywordLists{{{"a"}, {}}}); }) == "Validation");
  CHECK(num_classes(Supervision{LabeledDocs{{{1}, {2}, {3}}}}) == 3);
}

TEST_CASE("keyword file round trip") {
  const auto words = testing::numbered_words("w", 30);
  const auto m = testing::random_embeddings(words, 4, 5);
  const auto vocab = testing::vocab_of(words);
  auto kw = expand_keywords(KeywordLists{{{"w0"}, {"w1"}, {"w2"}}}, vocab, m, 4);
  std::stringstream io;
  write_class_keywords(io, kw);
  auto back = read_class_keywords(io, vocab, m);
  REQUIRE(back.num_classes() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(words_of(back.classes[c]) == words_of(kw.classes[c]));
    CHECK(back.vectors(c) == kw.vectors(c));
  }
}
