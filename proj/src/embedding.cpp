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

#include "seedcls/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "seedcls/error.hpp"
#include "seedcls/random.hpp"
#include "seedcls/vector_ops.hpp"

namespace seedcls {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, std::size_t dim,
                                 std::vector<double> values)
    : words_(std::move(words)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != words_.size() * dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding values do not match rows x dim");
  }
}

void EmbeddingMatrix::normalize_rows() {
  for (std::size_t r = 0; r < rows(); ++r) {
    std::span<double> v(values_.data() + r * dim_, dim_);
    const double n = norm(v);
    if (n > 0.0) {
      for (double& x : v) x /= n;
    }
  }
}

std::vector<WordId> EmbeddingMatrix::nearest_words(std::span<const double> query, std::size_t k,
                                                   const std::unordered_set<WordId>& exclude) const {
  if (query.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "query dimension differs from embeddings");
  std::vector<std::pair<double, WordId>> scored;
  scored.reserve(rows());
  for (std::size_t w = 0; w < rows(); ++w) {
    const auto id = static_cast<WordId>(w);
    if (exclude.count(id)) continue;
    scored.emplace_back(dot(query, row(id)), id);
  }
  const std::size_t take = std::min(k, scored.size());
  auto better = [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words_[a.second] < words_[b.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  std::vector<WordId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

void EmbeddingMatrix::write_text(std::ostream& out) const {
  out << rows() << ' ' << dim_ << '\n';
  char buf[64];
  for (std::size_t r = 0; r < rows(); ++r) {
    out << words_[r];
    for (double x : row(static_cast<WordId>(r))) {
      std::snprintf(buf, sizeof buf, " %.6f", x);
      out << buf;
    }
    out << '\n';
  }
}

void SkipGramConfig::validate() const {
  if (dim < 2) throw Error(ErrorCode::kInvalidArgument, "skip-gram dim must be >= 2");
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "skip-gram window must be >= 1");
  if (negatives < 1) throw Error(ErrorCode::kInvalidArgument, "skip-gram negatives must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "skip-gram learning rate must be > 0");
}

EmbeddingMatrix train_skipgram(const Corpus& corpus, const SkipGramConfig& config) {
  config.validate();
  const Vocabulary& vocab = corpus.vocabulary();
  const std::size_t V = vocab.size();
  if (V < 2) throw Error(ErrorCode::kVocabularyTooSmall, "skip-gram needs at least 2 vocabulary words");
  const std::size_t p = config.dim;

  Rng rng(config.rng_seed);
  std::vector<double> input(V * p);
  std::vector<double> output(V * p, 0.0);
  for (double& x : input) x = (uniform01(rng) - 0.5) / static_cast<double>(p);

  std::vector<double> noise(V);
  for (std::size_t w = 0; w < V; ++w) {
    noise[w] = std::pow(static_cast<double>(vocab.count(static_cast<WordId>(w))), 0.75);
  }
  const AliasTable noise_table(noise);

  const double total = static_cast<double>(vocab.total_tokens());
  std::vector<double> keep_prob(V, 1.0);
  if (config.subsample_threshold > 0.0) {
    const double st = config.subsample_threshold * total;
    for (std::size_t w = 0; w < V; ++w) {
      const double f = static_cast<double>(vocab.count(static_cast<WordId>(w)));
      keep_prob[w] = std::min(1.0, (std::sqrt(f / st) + 1.0) * st / f);
    }
  }

  const double planned = static_cast<double>(config.epochs) * total + 1.0;
  double processed = 0.0;
  std::vector<double> grad_in(p);
  std::vector<WordId> sentence;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const Document& doc : corpus.documents()) {
      sentence.clear();
      for (WordId w : doc.tokens) {
        if (keep_prob[w] >= 1.0 || uniform01(rng) < keep_prob[w]) sentence.push_back(w);
      }
      const double lr =
          config.learning_rate * std::max(1e-4, 1.0 - processed / planned);
      processed += static_cast<double>(doc.tokens.size());

      const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(sentence.size());
      for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
        const WordId center = sentence[static_cast<std::size_t>(pos)];
        const auto reach = static_cast<std::ptrdiff_t>(1 + uniform_index(rng, config.window));
        for (std::ptrdiff_t c = pos - reach; c <= pos + reach; ++c) {
          if (c < 0 || c >= n || c == pos) continue;
          const WordId context = sentence[static_cast<std::size_t>(c)];
          double* in = input.data() + context * p;
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (std::size_t d = 0; d <= config.negatives; ++d) {
            WordId target;
            double label;
            if (d == 0) {
              target = center;
              label = 1.0;
            } else {
              target = static_cast<WordId>(noise_table.sample(rng));
              if (target == center) continue;
              label = 0.0;
            }
            double* out = output.data() + target * p;
            double f = 0.0;
            for (std::size_t k = 0; k < p; ++k) f += in[k] * out[k];
            const double g = (label - 1.0 / (1.0 + std::exp(-f))) * lr;
            for (std::size_t k = 0; k < p; ++k) grad_in[k] += g * out[k];
            for (std::size_t k = 0; k < p; ++k) out[k] += g * in[k];
          }
          for (std::size_t k = 0; k < p; ++k) in[k] += grad_in[k];
        }
      }
    }
  }

  EmbeddingMatrix result(vocab.words(), p, std::move(input));
  result.normalize_rows();
  return result;
}

namespace {

struct RawVectors {
  std::size_t declared_rows = 0;
  std::size_t dim = 0;
  std::vector<std::string> words;
  std::vector<double> values;
};

RawVectors parse_text(std::istream& in) {
  RawVectors raw;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedHeader, "empty embedding file");
  {
    std::istringstream header(line);
    long long rows = -1, dim = -1;
    std::string extra;
    if (!(header >> rows >> dim) || (header >> extra) || rows < 0 || dim < 1) {
      throw Error(ErrorCode::kMalformedHeader, "expected 'V p' header, got '" + line + "'");
    }
    raw.declared_rows = static_cast<std::size_t>(rows);
    raw.dim = static_cast<std::size_t>(dim);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::size_t got = 0;
    double x;
    while (row >> x) {
      raw.values.push_back(x);
      ++got;
    }
    if (!row.eof() || got != raw.dim) {
      throw Error(ErrorCode::kDimensionMismatch, "line " + std::to_string(line_no) + ": expected " +
                                                     std::to_string(raw.dim) + " values, got " +
                                                     std::to_string(got));
    }
    raw.words.push_back(std::move(word));
  }
  if (raw.words.size() != raw.declared_rows) {
    throw Error(ErrorCode::kMalformedHeader, "header declares " + std::to_string(raw.declared_rows) +
                                                 " rows, file has " + std::to_string(raw.words.size()));
  }
  return raw;
}

}  // namespace

EmbeddingMatrix read_embeddings_text(std::istream& in) {
  RawVectors raw = parse_text(in);
  return EmbeddingMatrix(std::move(raw.words), raw.dim, std::move(raw.values));
}

EmbeddingMatrix load_embeddings(std::istream& in, const Vocabulary& vocab, std::uint64_t rng_seed,
                                LoadReport* report) {
  RawVectors raw = parse_text(in);
  const std::size_t p = raw.dim;
  std::vector<double> values(vocab.size() * p, 0.0);
  std::vector<bool> filled(vocab.size(), false);
  LoadReport rep;
  for (std::size_t r = 0; r < raw.words.size(); ++r) {
    auto id = vocab.find(raw.words[r]);
    if (!id) {
      ++rep.ignored;
      continue;
    }
    std::copy_n(raw.values.begin() + static_cast<std::ptrdiff_t>(r * p), p,
                values.begin() + static_cast<std::ptrdiff_t>(*id * p));
    filled[*id] = true;
  }
  Rng rng(rng_seed);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    if (filled[w]) continue;
    ++rep.missing;
    for (std::size_t k = 0; k < p; ++k) values[w * p + k] = (uniform01(rng) - 0.5) / static_cast<double>(p);
  }
  if (report) *report = rep;
  EmbeddingMatrix m(vocab.words(), p, std::move(values));
  m.normalize_rows();
  return m;
}

}  // namespace seedcls
