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

#include "seedcls/eval.hpp"

#include <numeric>

#include "seedcls/error.hpp"

namespace seedcls {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_nonempty(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kEmptyMatrix, "no scored documents");
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < m_; ++c) t += at(c, c);
  return t;
}

ConfusionMatrix confusion(std::span<const int> gold, std::span<const int> pred, std::size_t m) {
  if (gold.size() != pred.size()) throw Error(ErrorCode::kLengthMismatch, "gold and predicted label counts differ");
  ConfusionMatrix cm(m);
  const auto in_range = [m](int label) { return label >= 0 && static_cast<std::size_t>(label) < m; };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!in_range(gold[i]) || !in_range(pred[i])) {
      throw Error(ErrorCode::kLabelOutOfRange, "label at position " + std::to_string(i) + " outside [0, m)");
    }
    ++cm.at(static_cast<std::size_t>(gold[i]), static_cast<std::size_t>(pred[i]));
  }
  return cm;
}

std::vector<ClassScore> per_class_scores(const ConfusionMatrix& cm) {
  const std::size_t m = cm.num_classes();
  std::vector<ClassScore> out(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::uint64_t predicted = 0, actual = 0;
    for (std::size_t k = 0; k < m; ++k) {
      predicted += cm.at(k, c);
      actual += cm.at(c, k);
    }
    const std::uint64_t tp = cm.at(c, c);
    ClassScore& s = out[c];
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, actual);
    s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    s.support = actual;
  }
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  const auto scores = per_class_scores(cm);
  double sum = 0.0;
  for (const auto& s : scores) sum += s.f1;
  return sum / static_cast<double>(scores.size());
}

double micro_f1(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  // Pooled tp = trace; pooled fp = pooled fn = total - trace.
  const std::uint64_t tp = cm.trace();
  const std::uint64_t errors = cm.total() - tp;
  return ratio(2 * tp, 2 * tp + 2 * errors);
}

nlohmann::json metrics_json(const ConfusionMatrix& cm) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& s : per_class_scores(cm)) {
    per_class.push_back({{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}});
  }
  return {{"macro_f1", macro_f1(cm)}, {"micro_f1", micro_f1(cm)}, {"per_class", std::move(per_class)}};
}

}  // namespace seedcls
