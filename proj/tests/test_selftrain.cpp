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
#include "seedcls/selftrain.hpp"
#include "seedcls/synth.hpp"

using namespace seedcls;

namespace {

std::vector<std::vector<double>> random_stochastic(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::vector<double>> y(n, std::vector<double>(m));
  for (auto& row : y) {
    double s = 0;
    for (double& x : row) s += (x = 0.001 + uniform01(rng));
    for (double& x : row) x /= s;
  }
  return y;
}

// Written straight from the definition, one entry at a time.
double direct_target(const std::vector<std::vector<double>>& y, std::size_t i, std::size_t j) {
  auto freq = [&](std::size_t c) {
    double f = 0;
    for (const auto& row : y) f += row[c];
    return f;
  };
  double denom = 0;
  for (std::size_t c = 0; c < y[i].size(); ++c) denom += y[i][c] * y[i][c] / freq(c);
  return y[i][j] * y[i][j] / freq(j) / denom;
}

PseudoDocument pseudo(std::vector<WordId> tokens, std::size_t cls, std::size_t m, double alpha) {
  return {std::move(tokens), cls, pseudo_label(cls, alpha, m)};
}

struct SmallTask {
  Corpus corpus;
  EmbeddingMatrix emb;
  std::vector<PseudoDocument> pseudo_docs;
};

// Three topical classes; pseudo documents draw only topical words.
SmallTask small_task() {
  SynthConfig sc;
  sc.docs_per_class = 60;
  sc.topic_words = 20;
  sc.background_words = 40;
  sc.min_length = 10;
  sc.max_length = 20;
  sc.topic_share = 0.5;
  const auto syn = generate_synthetic_corpus(sc);
  SmallTask t;
  t.corpus = build_corpus(syn.lines, 1);
  t.emb = testing::random_embeddings(t.corpus.vocabulary().words(), 10, 3);
  Rng rng(4);
  for (std::size_t c = 0; c < 3; ++c) {
    for (int d = 0; d < 40; ++d) {
      std::vector<WordId> toks;
      for (int k = 0; k < 15; ++k) {
        auto id = t.corpus.vocabulary().find(topic_word(syn.class_names[c], uniform_index(rng, 5)));
        if (id) toks.push_back(*id);
      }
      t.pseudo_docs.push_back(pseudo(toks, c, 3, 0.2));
    }
  }
  return t;
}

}  // namespace

TEST_CASE("self-training targets") {
  SUBCASE("worked example") {
    const std::vector<std::vector<double>> y{{0.9, 0.1}, {0.6, 0.4}};
    const auto l = self_train_targets(y);
    // f = [1.5, 0.5]: row 0 -> (0.54, 0.02)/0.56, row 1 -> (0.24, 0.32)/0.56
    CHECK(l[0][0] == doctest::Approx(0.54 / 0.56).epsilon(1e-14));
    CHECK(l[0][1] == doctest::Approx(0.02 / 0.56).epsilon(1e-14));
    CHECK(l[1][0] == doctest::Approx(0.24 / 0.56).epsilon(1e-14));
    CHECK(l[1][1] == doctest::Approx(0.32 / 0.56).epsilon(1e-14));
    CHECK(std::round(l[0][0] * 1e4) / 1e4 == 0.9643);
    CHECK(std::round(l[1][0] * 1e4) / 1e4 == 0.4286);
  }
  SUBCASE("single class") {
    const auto l = self_train_targets(std::vector<std::vector<double>>{{1.0}, {1.0}});
    CHECK(l == std::vector<std::vector<double>>{{1.0}, {1.0}});
  }
  SUBCASE("matches the direct formula and stays row-stochastic") {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
      const auto y = random_stochastic(5, 3, rng);
      const auto l = self_train_targets(y);
      for (std::size_t i = 0; i < 5; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < 3; ++j) {
          CHECK(std::abs(l[i][j] - direct_target(y, i, j)) <= 1e-12);
          s += l[i][j];
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
      }
    }
  }
  SUBCASE("row permutation carries through") {
    Rng rng(2);
    auto y = random_stochastic(8, 4, rng);
    const auto l = self_train_targets(y);
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(perm, rng);
    std::vector<std::vector<double>> yp;
    for (auto i : perm) yp.push_back(y[i]);
    const auto lp = self_train_targets(yp);
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t j = 0; j < 4; ++j) CHECK(lp[k][j] == doctest::Approx(l[perm[k]][j]).epsilon(1e-14));
  }
  SUBCASE("sharpening") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const auto y = random_stochastic(6, 3, rng);
      const auto l = self_train_targets(y);
      std::vector<double> f(3, 0);
      for (const auto& row : y)
        for (std::size_t j = 0; j < 3; ++j) f[j] += row[j];
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t k = 0; k < 3; ++k)
            if (y[i][j] > y[i][k] && f[j] <= f[k]) CHECK(l[i][j] / l[i][k] > y[i][j] / y[i][k]);
    }
  }
  SUBCASE("class with no mass") {
    CHECK(testing::thrown_code([] { self_train_targets(std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, 0.0}}); }) ==
          "DegenerateFrequency");
  }
}

TEST_CASE("assignment change fraction") {
  const std::vector<int> a{0, 1, 1, 0};
  CHECK(assignment_change_fraction(a, a) == 0.0);
  CHECK(assignment_change_fraction(a, std::vector<int>{1, 0, 0, 1}) == 1.0);
  std::vector<int> p(1000, 0), q(1000, 0);
  q[3] = q[500] = q[999] = 1;
  CHECK(assignment_change_fraction(p, q) == 0.003);
  CHECK(testing::thrown_code([&] { assignment_change_fraction(a, p); }) == "LengthMismatch");
}

TEST_CASE("pre-training") {
  SUBCASE("training set sizes") {
    std::vector<PseudoDocument> docs(2000, pseudo({0}, 0, 4, 0.2));
    std::vector<LabeledExample> labeled(40, LabeledExample{{1}, 2, std::nullopt});
    PretrainingSet set;
    build_pretraining_set(docs, {}, 4, set);
    CHECK(set.examples.size() == 2000);
    build_pretraining_set(docs, labeled, 4, set);
    CHECK(set.examples.size() == 2040);
    CHECK(set.examples.back().target[2] == 1.0);
  }
  SUBCASE("separable task is fit") {
    auto t = small_task();
    ModelConfig mc;
    mc.rng_seed = 5;
    WordCnn cnn(t.emb, 3, mc);
    TrainConfig tc;
    tc.learning_rate = 0.05;
    tc.batch_size = 16;
    SelfTrainConfig sc;
    sc.pretrain_epochs = 20;
    pretrain(cnn, t.pseudo_docs, {}, tc, sc);
    std::size_t right = 0;
    for (const auto& d : t.pseudo_docs) right += argmax(cnn.predict_proba(d.tokens)) == static_cast<int>(d.class_of_origin);
    CHECK(static_cast<double>(right) / t.pseudo_docs.size() >= 0.95);
  }
}

TEST_CASE("self-training loop") {
  auto t = small_task();
  ModelConfig mc;
  mc.rng_seed = 5;
  TrainConfig tc;
  tc.learning_rate = 0.05;
  tc.batch_size = 16;
  SelfTrainConfig sc;
  sc.pretrain_epochs = 10;
  sc.update_interval = 5;
  sc.rng_seed = 11;

  auto pretrained = [&] {
    auto cnn = std::make_unique<WordCnn>(t.emb, 3, mc);
    pretrain(*cnn, t.pseudo_docs, {}, tc, sc);
    return cnn;
  };

  SUBCASE("delta 100 stops at the first check") {
    auto cnn = pretrained();
    SelfTrainConfig c = sc;
    c.delta = 100;
    const auto rep = self_train(*cnn, t.corpus, {}, tc, c);
    CHECK(rep.checkpoints.size() == 2);
    CHECK(rep.converged);
    CHECK(rep.checkpoints[0].micro_f1.has_value());
  }
  SUBCASE("fixed point at learning rate zero") {
    auto cnn = pretrained();
    TrainConfig frozen = tc;
    frozen.learning_rate = 0;
    const auto rep = self_train(*cnn, t.corpus, {}, frozen, sc);
    REQUIRE(rep.checkpoints.size() == 2);
    CHECK(rep.checkpoints[1].change_fraction == 0.0);
    CHECK(rep.converged);
  }
  SUBCASE("iteration cap") {
    auto cnn = pretrained();
    SelfTrainConfig c = sc;
    c.max_iterations = 3;
    c.delta = 1e-9;
    TrainConfig hot = tc;
    hot.learning_rate = 0.5;
    const auto rep = self_train(*cnn, t.corpus, {}, hot, c);
    CHECK(rep.checkpoints.size() <= 4);
    CHECK(rep.checkpoints.back().iteration <= 3);
  }
  SUBCASE("reproducible") {
    auto a = pretrained(), b = pretrained();
    SelfTrainConfig c = sc;
    c.max_iterations = 4;
    c.delta = 1e-9;
    const auto ra = self_train(*a, t.corpus, {}, tc, c);
    const auto rb = self_train(*b, t.corpus, {}, tc, c);
    REQUIRE(ra.checkpoints.size() == rb.checkpoints.size());
    for (std::size_t i = 0; i < ra.checkpoints.size(); ++i) {
      CHECK(ra.checkpoints[i].change_fraction == rb.checkpoints[i].change_fraction);
      CHECK(ra.checkpoints[i].mean_kl == rb.checkpoints[i].mean_kl);
    }
    CHECK(a->snapshot() == b->snapshot());
  }
  SUBCASE("labeled documents keep their labels") {
    auto cnn = pretrained();
    std::vector<LabeledExample> labeled;
    for (std::size_t i = 0; i < 5; ++i) labeled.push_back({t.corpus[i].tokens, *t.corpus[i].gold_label, i});
    const auto rep = self_train(*cnn, t.corpus, labeled, tc, sc);
    CHECK(rep.checkpoints.size() >= 2);
  }
  SUBCASE("report lines") {
    SelfTrainReport rep;
    rep.checkpoints.push_back({0, 0.0, 0.5, 0.9, 0.8});
    rep.checkpoints.push_back({1, 0.01, 0.4, std::nullopt, std::nullopt});
    std::ostringstream out;
    write_report_jsonl(out, rep, 42);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    auto j = nlohmann::json::parse(line);
    CHECK(j["seed"] == 42);
    CHECK(j["micro_f1"] == 0.9);
    std::getline(in, line);
    CHECK_FALSE(nlohmann::json::parse(line).contains("micro_f1"));
  }
}
