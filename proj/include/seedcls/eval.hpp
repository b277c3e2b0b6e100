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
#include <span>
#include <vector>

#include "json.hpp"

namespace seedcls {

/// m x m counts; rows are gold classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t m) : m_(m), counts_(m * m, 0) {}

  std::size_t num_classes() const { return m_; }
  std::uint64_t at(std::size_t gold, std::size_t pred) const { return counts_[gold * m_ + pred]; }
  std::uint64_t& at(std::size_t gold, std::size_t pred) { return counts_[gold * m_ + pred]; }
  std::uint64_t total() const;
  std::uint64_t trace() const;

 private:
  std::size_t m_;
  std::vector<std::uint64_t> counts_;
};

/// Throws LengthMismatch or LabelOutOfRange.
ConfusionMatrix confusion(std::span<const int> gold, std::span<const int> pred, std::size_t m);

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

/// Per-class scores; any 0/0 ratio is taken as 0.
std::vector<ClassScore> per_class_scores(const ConfusionMatrix& cm);

/// Unweighted mean of per-class F1. Throws EmptyMatrix.
double macro_f1(const ConfusionMatrix& cm);
/// F1 from pooled counts, which for single-label data is trace / total.
/// Throws EmptyMatrix.
double micro_f1(const ConfusionMatrix& cm);

/// {"macro_f1", "micro_f1", "per_class": [{precision, recall, f1, support}]}
nlohmann::json metrics_json(const ConfusionMatrix& cm);

}  // namespace seedcls
