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
#include <cmath>
#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "seedcls/pseudogen.hpp"
#include "seedcls/vector_ops.hpp"

using namespace seedcls;

namespace {

std::vector<double> random_background(std::size_t V, Rng& rng) {
  std::vector<double> b(V);
  double s = 0;
  for (double& x : b) s += (x = 0.01 + uniform01(rng));
  for (double& x : b) x /= s;
  return b;
}

}  // namespace

TEST_CASE("pseudo labels") {
  CHECK(pseudo_label(1, 0.2, 4) == std::vector<double>{0.05, 0.85, 0.05, 0.05});
  CHECK(pseudo_label(2, 0.0, 3) == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(pseudo_label(0, 1.0, 4) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 2 + uniform_index(rng, 30);
    const double alpha = uniform01(rng);
    const auto row = pseudo_label(uniform_index(rng, m), alpha, m);
    CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 4e-16 * m);
  }
}

TEST_CASE("word distribution") {
  Rng rng(2);
  const auto words = testing::numbered_words("w", 300);
  const auto emb = testing::random_embeddings(words, 10, 3);
  const auto bg = random_background(300, rng);

  SUBCASE("normalized, and never below the background share") {
    for (int i = 0; i < 100; ++i) {
      const auto d = testing::random_unit(10, rng);
      const auto p = word_distribution(d, emb, bg, 0.2, 50);
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
      for (std::size_t w = 0; w < p.size(); ++w) CHECK(p[w] >= 0.2 * bg[w]);
    }
  }
  SUBCASE("alpha = 1 returns the background") {
    const auto p = word_distribution(testing::random_unit(10, rng), emb, bg, 1.0, 50);
    for (std::size_t w = 0; w < p.size(); ++w) CHECK(p[w] == bg[w]);
  }
  SUBCASE("hand-computed five-word case") {
    EmbeddingMatrix five({"a", "b", "c", "d", "e"}, 2, {1, 0, 0.6, 0.8, 0, 1, -1, 0, 0.8, -0.6});
    const std::vector<double> b5{0.1, 0.2, 0.3, 0.25, 0.15};
    const std::vector<double> d{1, 0};
    // top 2 by d.v: a (1.0), e (0.8)
    const double za = std::exp(1.0), ze = std::exp(0.8);
    const std::vector<double> expect{0.3 * 0.1 + 0.7 * za / (za + ze), 0.3 * 0.2, 0.3 * 0.3, 0.3 * 0.25,
                                     0.3 * 0.15 + 0.7 * ze / (za + ze)};
    const auto p = word_distribution(d, five, b5, 0.3, 2);
    for (std::size_t w = 0; w < 5; ++w) CHECK(p[w] == doctest::Approx(expect[w]).epsilon(1e-14));
  }
}

TEST_CASE("document generation") {
  Rng rng(5);
  const auto words = testing::numbered_words("w", 100);
  const auto emb = testing::random_embeddings(words, 8, 6);
  const auto bg = random_background(100, rng);
  GeneratorConfig cfg;
  cfg.doc_length = 37;
  cfg.gamma = 10;

  SUBCASE("length and determinism") {
    VmfDistribution dist{testing::random_unit(8, rng), 20.0};
    Rng a(99), b(99);
    const auto d1 = generate_document(dist, 1, 3, cfg, emb, bg, a);
    const auto d2 = generate_document(dist, 1, 3, cfg, emb, bg, b);
    CHECK(d1.tokens.size() == 37);
    CHECK(d1.tokens == d2.tokens);
    CHECK(d1.pseudo_label == pseudo_label(1, 0.2, 3));
  }
  SUBCASE("point mass with tiny alpha repeats the nearest word") {
    VmfDistribution dist{testing::random_unit(8, rng), kKappaMax};
    GeneratorConfig c = cfg;
    c.alpha = 1e-6;
    c.gamma = 1;
    c.doc_length = 2000;
    const auto nearest = emb.nearest_words(dist.mu, 1)[0];
    std::size_t hits = 0, total = 0;
    for (int k = 0; k < 5; ++k) {
      const auto d = generate_document(dist, 0, 2, c, emb, bg, rng);
      hits += std::count(d.tokens.begin(), d.tokens.end(), nearest);
      total += d.tokens.size();
    }
    CHECK(static_cast<double>(hits) / total >= 1.0 - 10 * c.alpha);
  }
  SUBCASE("empirical frequencies follow the mixture") {
    // a fixed document vector isolates the token draw
    VmfDistribution dist{testing::random_unit(8, rng), kKappaMax};
    GeneratorConfig c = cfg;
    c.doc_length = 50000;
    Rng r(7);
    const auto doc = generate_document(dist, 0, 2, c, emb, bg, r);
    Rng r2(7);
    const auto d = sample_one(dist, r2);
    const auto p = word_distribution(d, emb, bg, c.alpha, c.gamma);
    std::vector<double> counts(100, 0);
    for (WordId w : doc.tokens) counts[w] += 1;
    double chi = 0;
    for (std::size_t w = 0; w < 100; ++w) {
      const double e = p[w] * c.doc_length;
      chi += (counts[w] - e) * (counts[w] - e) / e;
    }
    CHECK(chi < 200.0);  // 99 dof, very loose
  }
}

TEST_CASE("generate_all") {
  Rng rng(8);
  const auto words = testing::numbered_words("w", 120);
  const auto emb = testing::random_embeddings(words, 8, 9);
  const auto bg = random_background(120, rng);
  std::vector<VmfDistribution> dists;
  for (int j = 0; j < 4; ++j) dists.push_back({testing::random_unit(8, rng), 30.0});
  GeneratorConfig cfg;
  cfg.doc_length = 20;
  cfg.gamma = 50;
  cfg.rng_seed = 17;

  const auto docs = generate_all(dists, cfg, emb, bg, 1);
  CHECK(docs.size() == 2000);
  std::vector<int> hist(4, 0);
  for (const auto& d : docs) ++hist[d.class_of_origin];
  CHECK(hist == std::vector<int>(4, 500));

  const auto threaded = generate_all(dists, cfg, emb, bg, 4);
  for (std::size_t i = 0; i < docs.size(); ++i) CHECK(docs[i].tokens == threaded[i].tokens);

  GeneratorConfig one = cfg;
  one.beta = 1;
  CHECK(generate_all(std::span(dists).first(2), one, emb, bg).size() == 2);

  SUBCASE("file round trip") {
    const auto vocab = testing::vocab_of(words);
    std::stringstream d_io, l_io;
    write_pseudo_documents(d_io, docs, vocab);
    write_pseudo_labels(l_io, docs);
    const auto back = read_pseudo_documents(d_io, &l_io, vocab, 4, 0.2);
    REQUIRE(back.size() == docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      CHECK(back[i].tokens == docs[i].tokens);
      CHECK(back[i].pseudo_label == docs[i].pseudo_label);
      CHECK(back[i].class_of_origin == docs[i].class_of_origin);
    }
  }
}

TEST_CASE("config checks") {
  GeneratorConfig cfg;
  CHECK(cfg.alpha == 0.2);
  CHECK(cfg.beta == 500);
  CHECK(cfg.gamma == 50);
  cfg.alpha = 1.0;
  CHECK(testing::thrown_code([&] { cfg.validate(); }) == "InvalidArgument");
  cfg.parameter_study = true;
  CHECK(testing::thrown_code([&] { cfg.validate(); }) == "none");
}
