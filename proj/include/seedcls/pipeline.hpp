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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedcls/classifier.hpp"
#include "seedcls/embedding.hpp"
#include "seedcls/error.hpp"
#include "seedcls/pseudogen.hpp"
#include "seedcls/selftrain.hpp"

namespace seedcls {

enum class SupervisionKind { kLabelNames, kKeywords, kLabeledDocs };

struct PipelineConfig {
  std::string corpus_path;
  bool corpus_labeled = true;
  std::uint64_t min_count = 5;

  SupervisionKind supervision = SupervisionKind::kKeywords;
  std::string supervision_path;
  std::size_t expansion_t = 0;  // 0 = automatic

  std::string embedding_source = "train";  // "train" or "load"
  std::string embedding_path;
  SkipGramConfig skipgram;

  GeneratorConfig generator;
  std::string classifier = "word_cnn";
  ModelConfig model;
  TrainConfig train;
  SelfTrainConfig self_train;

  std::string output_dir = "run";
  std::uint64_t seed = 42;
  bool single_thread = false;
  bool dump_pseudo = false;

  /// Throws Validation for inconsistent settings or missing input paths.
  void validate() const;
  std::size_t threads() const;
};

nlohmann::json config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

std::string_view supervision_kind_name(SupervisionKind kind);

inline constexpr std::string_view kStages[] = {"embed", "seeds", "vmf", "generate", "pretrain", "selftrain", "eval"};

/// File names of stage artifacts inside the output directory.
namespace artifact {
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kKeywords = "keywords.tsv";
inline constexpr const char* kVmf = "vmf.json";
inline constexpr const char* kPseudoDocs = "pseudo_docs.tsv";
inline constexpr const char* kPseudoLabels = "pseudo_labels.jsonl";
inline constexpr const char* kPretrained = "model_pretrained.json";
inline constexpr const char* kFinal = "model_final.json";
inline constexpr const char* kReport = "selftrain_report.jsonl";
inline constexpr const char* kPredictions = "predictions.tsv";
inline constexpr const char* kMetrics = "metrics.json";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

/// Runs every stage in order. Errors are rethrown with the failing stage name
/// prefixed to the message.
void run_pipeline(const PipelineConfig& config);

/// Runs one stage, reading its prerequisites from the output directory.
/// Throws MissingArtifact naming the absent prerequisite.
void run_stage(std::string_view stage, const PipelineConfig& config);

/// CLI exit status for an error: 1 validation, 3 missing artifact, 2 otherwise.
int exit_code_for(ErrorCode code);

/// Human-readable rendering of any artifact file.
std::string inspect_artifact(const std::filesystem::path& path);

struct PredictionRow {
  std::size_t doc_id = 0;
  int label = 0;
  std::vector<double> probs;
};

/// "doc_id<TAB>label<TAB>p_0 ... p_{m-1}" rows after a "# seed=N" line.
std::vector<PredictionRow> read_predictions(std::istream& in);

}  // namespace seedcls
