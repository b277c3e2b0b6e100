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

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "seedcls/corpus.hpp"
#include "seedcls/embedding.hpp"
#include "seedcls/error.hpp"
#include "seedcls/random.hpp"

namespace testing {

// Runs fn and reports which ErrorCode (if any) it threw.
inline std::string thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const seedcls::Error& e) {
    return std::string(seedcls::error_code_name(e.code()));
  }
  return "none";
}

inline seedcls::Vocabulary vocab_of(std::vector<std::string> words) {
  std::vector<std::uint64_t> counts(words.size(), 1);
  return seedcls::Vocabulary(std::move(words), std::move(counts));
}

inline std::vector<std::string> numbered_words(const std::string& prefix, std::size_t n) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(prefix + std::to_string(i));
  return w;
}

// Random unit rows, one per word.
inline seedcls::EmbeddingMatrix random_embeddings(const std::vector<std::string>& words, std::size_t dim,
                                                  std::uint64_t seed) {
  seedcls::Rng rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(words.size() * dim);
  for (double& x : v) x = g(rng);
  seedcls::EmbeddingMatrix m(words, dim, std::move(v));
  m.normalize_rows();
  return m;
}

inline std::vector<double> random_unit(std::size_t dim, seedcls::Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  double n = 0;
  for (double& x : v) {
    x = g(rng);
    n += x * x;
  }
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

}  // namespace testing
