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

#include "seedcls/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "seedcls/corpus.hpp"
#include "seedcls/eval.hpp"
#include "seedcls/seed.hpp"
#include "seedcls/vmf.hpp"

namespace seedcls {

namespace fs = std::filesystem;

namespace {

constexpr int kStageVersion = 1;

// Fixed sub-stream ids for the master seed.
enum SeedStream : std::uint64_t {
  kSeedSkipGram = 1,
  kSeedGenerate = 2,
  kSeedModelInit = 3,
  kSeedPretrain = 4,
  kSeedSelfTrain = 5,
  kSeedLoadFill = 6,
};

std::uint64_t stage_seed(std::uint64_t master, SeedStream stream) { return derive_stream(master, stream)(); }

std::string file_fnv64(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::ifstream open_in(const fs::path& path, ErrorCode code = ErrorCode::kIo) {
  std::ifstream in(path);
  if (!in) throw Error(code, "cannot read " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

SupervisionKind parse_supervision_kind(const std::string& s) {
  if (s == "labels") return SupervisionKind::kLabelNames;
  if (s == "keywords") return SupervisionKind::kKeywords;
  if (s == "docs") return SupervisionKind::kLabeledDocs;
  throw Error(ErrorCode::kValidation, "supervision type must be labels, keywords or docs (got '" + s + "')");
}

template <typename T>
void read_into(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

/// One run over an output directory. Artifacts produced by earlier stages of
/// the same run are reused from memory; otherwise they are read from disk.
class Run {
 public:
  Run(const PipelineConfig& config, bool pipeline_mode)
      : cfg_(config), dir_(config.output_dir), pipeline_mode_(pipeline_mode) {}

  void stage(std::string_view name) {
    try {
      if (name == "embed") embed();
      else if (name == "seeds") seeds();
      else if (name == "vmf") vmf();
      else if (name == "generate") generate();
      else if (name == "pretrain") pretrain_stage();
      else if (name == "selftrain") selftrain();
      else if (name == "eval") eval();
      else throw Error(ErrorCode::kValidation, "unknown stage '" + std::string(name) + "'");
      record_manifest(name);
    } catch (const Error& e) {
      throw Error(e.code(), "[" + std::string(name) + "] " + e.detail());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kValidation, "[" + std::string(name) + "] malformed artifact: " + e.what());
    }
  }

 private:
  fs::path path(const char* name) const { return dir_ / name; }

  std::ifstream require(const char* name, const char* producer) const {
    const fs::path p = path(name);
    if (!fs::exists(p)) {
      throw Error(ErrorCode::kMissingArtifact,
                  p.string() + " not found; run stage '" + producer + "' first");
    }
    return open_in(p);
  }

  const Corpus& corpus() {
    if (!corpus_) {
      auto in = open_in(cfg_.corpus_path, ErrorCode::kValidation);
      const auto lines = read_corpus_lines(in, cfg_.corpus_labeled);
      corpus_ = build_corpus(lines, cfg_.min_count);
      if (corpus_->dropped() > 0) spdlog::warn("{} empty documents dropped", corpus_->dropped());
    }
    return *corpus_;
  }

  const EmbeddingMatrix& embeddings() {
    if (!embeddings_) {
      auto in = require(artifact::kEmbeddings, "embed");
      LoadReport rep;
      embeddings_ = load_embeddings(in, corpus().vocabulary(), stage_seed(cfg_.seed, kSeedLoadFill), &rep);
      if (rep.missing > 0) {
        throw Error(ErrorCode::kVocabularyMismatch, "embeddings.txt does not cover the corpus vocabulary");
      }
    }
    return *embeddings_;
  }

  Supervision supervision() {
    auto in = open_in(cfg_.supervision_path, ErrorCode::kValidation);
    switch (cfg_.supervision) {
      case SupervisionKind::kLabelNames: return read_label_names(in);
      case SupervisionKind::kKeywords: return read_keyword_lists(in);
      case SupervisionKind::kLabeledDocs: return read_labeled_docs(in);
    }
    throw Error(ErrorCode::kValidation, "unknown supervision kind");
  }

  std::vector<LabeledExample> labeled_examples() {
    std::vector<LabeledExample> out;
    if (cfg_.supervision != SupervisionKind::kLabeledDocs) return out;
    const auto docs = std::get<LabeledDocs>(supervision());
    for (std::size_t c = 0; c < docs.doc_ids.size(); ++c) {
      for (std::size_t id : docs.doc_ids[c]) {
        auto pos = corpus().position_of(id);
        if (!pos) continue;
        out.push_back({corpus()[*pos].tokens, static_cast<int>(c), *pos});
      }
    }
    return out;
  }

  const ClassKeywords& keywords() {
    if (!keywords_) {
      auto in = require(artifact::kKeywords, "seeds");
      keywords_ = read_class_keywords(in, corpus().vocabulary(), embeddings());
    }
    return *keywords_;
  }

  const std::vector<VmfDistribution>& class_distributions() {
    if (!vmf_) {
      auto in = require(artifact::kVmf, "vmf");
      const auto j = nlohmann::json::parse(in);
      std::vector<VmfDistribution> dists;
      for (const auto& c : j.at("classes")) {
        dists.push_back({c.at("mu").get<std::vector<double>>(), c.at("kappa").get<double>()});
      }
      vmf_ = std::move(dists);
    }
    return *vmf_;
  }

  std::size_t num_classes() { return class_distributions().size(); }

  const std::vector<PseudoDocument>& pseudo_documents() {
    if (!pseudo_) {
      auto docs_in = require(artifact::kPseudoDocs, "generate");
      auto labels_in = require(artifact::kPseudoLabels, "generate");
      pseudo_ = read_pseudo_documents(docs_in, &labels_in, corpus().vocabulary(), num_classes(),
                                      cfg_.generator.alpha);
    }
    return *pseudo_;
  }

  std::unique_ptr<Classifier> load_model(const char* name, const char* producer) {
    auto in = require(name, producer);
    return classifier_from_json(nlohmann::json::parse(in), corpus().vocabulary().hash());
  }

  void write_model(const Classifier& model, const char* name) {
    auto out = open_out(path(name));
    out << model.to_json(corpus().vocabulary().hash(), cfg_.seed).dump() << '\n';
  }

  // -- stages ---------------------------------------------------------------

  void embed() {
    fs::create_directories(dir_);
    EmbeddingMatrix m;
    if (cfg_.embedding_source == "train") {
      SkipGramConfig sg = cfg_.skipgram;
      sg.rng_seed = stage_seed(cfg_.seed, kSeedSkipGram);
      m = train_skipgram(corpus(), sg);
    } else {
      auto in = open_in(cfg_.embedding_path, ErrorCode::kValidation);
      LoadReport rep;
      m = load_embeddings(in, corpus().vocabulary(), stage_seed(cfg_.seed, kSeedLoadFill), &rep);
      if (rep.missing > 0) spdlog::warn("{} vocabulary words missing from {}", rep.missing, cfg_.embedding_path);
    }
    std::ostringstream text;
    m.write_text(text);
    {
      auto out = open_out(path(artifact::kEmbeddings));
      out << text.str();
    }
    // Continue from the written (rounded) vectors so a stage-by-stage run and a
    // full pipeline run see identical inputs.
    std::istringstream back(text.str());
    embeddings_ = load_embeddings(back, corpus().vocabulary(), stage_seed(cfg_.seed, kSeedLoadFill));
    keywords_.reset();
  }

  void seeds() {
    const Supervision s = supervision();
    ClassKeywords kw = expand_supervision(s, corpus(), embeddings(), cfg_.expansion_t);
    {
      auto out = open_out(path(artifact::kKeywords));
      write_class_keywords(out, kw);
    }
    spdlog::info("seed expansion: {} classes, t = {}", kw.num_classes(), kw.t_used);
    keywords_ = std::move(kw);
  }

  void vmf() {
    const ClassKeywords& kw = keywords();
    std::vector<VmfDistribution> dists;
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < kw.num_classes(); ++c) {
      const auto vecs = kw.vectors(c);
      const VmfFit fit = fit_vmf(vecs);
      classes.push_back({{"mu", fit.dist.mu},
                         {"kappa", fit.dist.kappa},
                         {"mean_resultant_length", fit.mean_resultant_length},
                         {"keywords", vecs.size()}});
      dists.push_back(fit.dist);
    }
    nlohmann::json j{{"seed", cfg_.seed}, {"dim", embeddings().dim()}, {"classes", std::move(classes)}};
    auto out = open_out(path(artifact::kVmf));
    out << j.dump(2) << '\n';
    vmf_ = std::move(dists);
  }

  void generate() {
    GeneratorConfig g = cfg_.generator;
    g.rng_seed = stage_seed(cfg_.seed, kSeedGenerate);
    if (g.doc_length == 0) g.doc_length = default_doc_length(corpus());
    g.gamma = std::min(g.gamma, embeddings().rows());
    const auto background = background_distribution(corpus());
    auto docs = generate_all(class_distributions(), g, embeddings(), background, cfg_.threads());
    spdlog::info("generated {} pseudo documents of length {}", docs.size(), g.doc_length);
    if (!pipeline_mode_ || cfg_.dump_pseudo) {
      auto out = open_out(path(artifact::kPseudoDocs));
      write_pseudo_documents(out, docs, corpus().vocabulary());
      auto labels = open_out(path(artifact::kPseudoLabels));
      write_pseudo_labels(labels, docs);
    }
    pseudo_ = std::move(docs);
  }

  void pretrain_stage() {
    const auto& pseudo = pseudo_documents();
    ModelConfig mc = cfg_.model;
    mc.rng_seed = stage_seed(cfg_.seed, kSeedModelInit);
    auto model = make_classifier(cfg_.classifier, embeddings(), num_classes(), mc);
    TrainConfig tc = cfg_.train;
    tc.rng_seed = stage_seed(cfg_.seed, kSeedPretrain);
    const auto labeled = labeled_examples();
    const double loss = pretrain(*model, pseudo, labeled, tc, cfg_.self_train);
    spdlog::info("pre-training on {} examples done, last epoch loss {:.6f}", pseudo.size() + labeled.size(), loss);
    write_model(*model, artifact::kPretrained);
    pretrained_ = std::move(model);
  }

  void selftrain() {
    std::unique_ptr<Classifier> model =
        pretrained_ ? std::move(pretrained_) : load_model(artifact::kPretrained, "pretrain");
    SelfTrainConfig sc = cfg_.self_train;
    sc.rng_seed = stage_seed(cfg_.seed, kSeedSelfTrain);
    sc.threads = cfg_.threads();
    const SelfTrainReport report = self_train(*model, corpus(), labeled_examples(), cfg_.train, sc);
    spdlog::info("self-training stopped after {} rounds (converged: {})", report.checkpoints.size() - 1,
                 report.converged);
    write_model(*model, artifact::kFinal);
    {
      auto out = open_out(path(artifact::kReport));
      write_report_jsonl(out, report, cfg_.seed);
    }

    std::vector<std::vector<WordId>> docs;
    for (const auto& d : corpus().documents()) docs.push_back(d.tokens);
    const Prediction pred = predict_batch(*model, docs, cfg_.threads());
    auto out = open_out(path(artifact::kPredictions));
    out << "# seed=" << cfg_.seed << '\n';
    char buf[40];
    for (std::size_t i = 0; i < docs.size(); ++i) {
      out << corpus()[i].id << '\t' << pred.labels[i] << '\t';
      for (std::size_t j = 0; j < pred.probs[i].size(); ++j) {
        std::snprintf(buf, sizeof buf, "%s%.17g", j ? " " : "", pred.probs[i][j]);
        out << buf;
      }
      out << '\n';
    }
  }

  void eval() {
    if (!corpus().has_gold_labels()) {
      if (pipeline_mode_) {
        spdlog::info("corpus has no gold labels; skipping evaluation");
        return;
      }
      throw Error(ErrorCode::kValidation, "evaluation needs a labeled corpus");
    }
    auto in = require(artifact::kPredictions, "selftrain");
    const auto rows = read_predictions(in);
    std::vector<int> gold, pred;
    std::size_t m = 0;
    for (const auto& d : corpus().documents()) m = std::max<std::size_t>(m, static_cast<std::size_t>(*d.gold_label) + 1);
    for (const auto& r : rows) {
      auto pos = corpus().position_of(r.doc_id);
      if (!pos) throw Error(ErrorCode::kValidation, "prediction for unknown document " + std::to_string(r.doc_id));
      gold.push_back(*corpus()[*pos].gold_label);
      pred.push_back(r.label);
      m = std::max(m, r.probs.size());
    }
    nlohmann::json j = metrics_json(confusion(gold, pred, m));
    j["seed"] = cfg_.seed;
    auto out = open_out(path(artifact::kMetrics));
    out << j.dump(2) << '\n';
    spdlog::info("macro-F1 {:.4f}, micro-F1 {:.4f}", j["macro_f1"].get<double>(), j["micro_f1"].get<double>());
  }

  void record_manifest(std::string_view stage) {
    fs::create_directories(dir_);
    const fs::path mp = path(artifact::kManifest);
    nlohmann::json manifest = nlohmann::json::object();
    if (fs::exists(mp)) {
      auto in = open_in(mp);
      manifest = nlohmann::json::parse(in, nullptr, false);
      if (manifest.is_discarded()) manifest = nlohmann::json::object();
    }
    manifest["seed"] = cfg_.seed;
    manifest["config"] = config_to_json(cfg_);
    manifest["inputs"]["corpus"] = {{"path", cfg_.corpus_path}, {"fnv64", file_fnv64(cfg_.corpus_path)}};
    manifest["inputs"]["supervision"] = {{"path", cfg_.supervision_path},
                                         {"fnv64", file_fnv64(cfg_.supervision_path)}};
    if (cfg_.embedding_source == "load") {
      manifest["inputs"]["embeddings"] = {{"path", cfg_.embedding_path}, {"fnv64", file_fnv64(cfg_.embedding_path)}};
    }
    manifest["stages"][std::string(stage)] = {{"version", kStageVersion}, {"seed", cfg_.seed}};
    auto out = open_out(mp);
    out << manifest.dump(2) << '\n';
  }

  PipelineConfig cfg_;
  fs::path dir_;
  bool pipeline_mode_;
  std::optional<Corpus> corpus_;
  std::optional<EmbeddingMatrix> embeddings_;
  std::optional<ClassKeywords> keywords_;
  std::optional<std::vector<VmfDistribution>> vmf_;
  std::optional<std::vector<PseudoDocument>> pseudo_;
  std::unique_ptr<Classifier> pretrained_;
};

}  // namespace

std::string_view supervision_kind_name(SupervisionKind kind) {
  switch (kind) {
    case SupervisionKind::kLabelNames: return "labels";
    case SupervisionKind::kKeywords: return "keywords";
    case SupervisionKind::kLabeledDocs: return "docs";
  }
  return "keywords";
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kValidation, msg); };
  if (corpus_path.empty()) fail("corpus.path is required");
  if (!fs::exists(corpus_path)) fail("corpus file not found: " + corpus_path);
  if (supervision_path.empty()) fail("supervision.path is required");
  if (!fs::exists(supervision_path)) fail("supervision file not found: " + supervision_path);
  if (embedding_source != "train" && embedding_source != "load") fail("embedding.source must be train or load");
  if (embedding_source == "load" && !fs::exists(embedding_path)) fail("embedding file not found: " + embedding_path);
  if (classifier != "word_cnn" && classifier != "bag_of_embeddings") fail("classifier.kind must be word_cnn or bag_of_embeddings");
  if (output_dir.empty()) fail("output_dir is required");
  try {
    skipgram.validate();
    generator.validate();
    train.validate();
    self_train.validate();
  } catch (const Error& e) {
    fail(e.detail());
  }
}

std::size_t PipelineConfig::threads() const {
  if (single_thread) return 1;
  return std::max(1u, std::thread::hardware_concurrency());
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["corpus"] = {{"path", c.corpus_path}, {"labeled", c.corpus_labeled}, {"min_count", c.min_count}};
  j["supervision"] = {{"type", std::string(supervision_kind_name(c.supervision))},
                      {"path", c.supervision_path},
                      {"t", c.expansion_t}};
  j["embedding"] = {{"source", c.embedding_source},
                    {"path", c.embedding_path},
                    {"dim", c.skipgram.dim},
                    {"window", c.skipgram.window},
                    {"negatives", c.skipgram.negatives},
                    {"epochs", c.skipgram.epochs},
                    {"learning_rate", c.skipgram.learning_rate},
                    {"subsample_threshold", c.skipgram.subsample_threshold}};
  j["generator"] = {{"alpha", c.generator.alpha},
                    {"beta", c.generator.beta},
                    {"gamma", c.generator.gamma},
                    {"doc_length", c.generator.doc_length},
                    {"parameter_study", c.generator.parameter_study}};
  j["classifier"] = {{"kind", c.classifier}, {"windows", c.model.windows}, {"filters", c.model.filters}};
  j["train"] = {{"learning_rate", c.train.learning_rate},
                {"batch_size", c.train.batch_size},
                {"momentum", c.train.momentum},
                {"fine_tune_embeddings", c.train.fine_tune_embeddings}};
  j["self_train"] = {{"delta", c.self_train.delta},
                     {"update_interval", c.self_train.update_interval},
                     {"max_iterations", c.self_train.max_iterations},
                     {"pretrain_epochs", c.self_train.pretrain_epochs}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["single_thread"] = c.single_thread;
  j["dump_pseudo"] = c.dump_pseudo;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    if (j.contains("corpus")) {
      const auto& s = j.at("corpus");
      read_into(s, "path", c.corpus_path);
      read_into(s, "labeled", c.corpus_labeled);
      read_into(s, "min_count", c.min_count);
    }
    if (j.contains("supervision")) {
      const auto& s = j.at("supervision");
      if (s.contains("type")) c.supervision = parse_supervision_kind(s.at("type").get<std::string>());
      read_into(s, "path", c.supervision_path);
      read_into(s, "t", c.expansion_t);
    }
    if (j.contains("embedding")) {
      const auto& s = j.at("embedding");
      read_into(s, "source", c.embedding_source);
      read_into(s, "path", c.embedding_path);
      read_into(s, "dim", c.skipgram.dim);
      read_into(s, "window", c.skipgram.window);
      read_into(s, "negatives", c.skipgram.negatives);
      read_into(s, "epochs", c.skipgram.epochs);
      read_into(s, "learning_rate", c.skipgram.learning_rate);
      read_into(s, "subsample_threshold", c.skipgram.subsample_threshold);
    }
    if (j.contains("generator")) {
      const auto& s = j.at("generator");
      read_into(s, "alpha", c.generator.alpha);
      read_into(s, "beta", c.generator.beta);
      read_into(s, "gamma", c.generator.gamma);
      read_into(s, "doc_length", c.generator.doc_length);
      read_into(s, "parameter_study", c.generator.parameter_study);
    }
    if (j.contains("classifier")) {
      const auto& s = j.at("classifier");
      read_into(s, "kind", c.classifier);
      read_into(s, "windows", c.model.windows);
      read_into(s, "filters", c.model.filters);
    }
    if (j.contains("train")) {
      const auto& s = j.at("train");
      read_into(s, "learning_rate", c.train.learning_rate);
      read_into(s, "batch_size", c.train.batch_size);
      read_into(s, "momentum", c.train.momentum);
      read_into(s, "fine_tune_embeddings", c.train.fine_tune_embeddings);
    }
    if (j.contains("self_train")) {
      const auto& s = j.at("self_train");
      read_into(s, "delta", c.self_train.delta);
      read_into(s, "update_interval", c.self_train.update_interval);
      read_into(s, "max_iterations", c.self_train.max_iterations);
      read_into(s, "pretrain_epochs", c.self_train.pretrain_epochs);
    }
    read_into(j, "output_dir", c.output_dir);
    read_into(j, "seed", c.seed);
    read_into(j, "single_thread", c.single_thread);
    read_into(j, "dump_pseudo", c.dump_pseudo);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("bad config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  auto in = open_in(path, ErrorCode::kValidation);
  const auto j = nlohmann::json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw Error(ErrorCode::kValidation, "config " + path.string() + " is not valid JSON");
  return config_from_json(j);
}

void run_pipeline(const PipelineConfig& config) {
  config.validate();
  Run run(config, true);
  for (std::string_view stage : kStages) run.stage(stage);
}

void run_stage(std::string_view stage, const PipelineConfig& config) {
  if (std::find(std::begin(kStages), std::end(kStages), stage) == std::end(kStages)) {
    throw Error(ErrorCode::kValidation, "unknown stage '" + std::string(stage) + "'");
  }
  config.validate();
  Run run(config, false);
  run.stage(stage);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return 1;
    case ErrorCode::kMissingArtifact: return 3;
    default: return 2;
  }
}

std::vector<PredictionRow> read_predictions(std::istream& in) {
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    PredictionRow r;
    if (!(ss >> r.doc_id >> r.label)) {
      throw Error(ErrorCode::kValidation, "predictions line " + std::to_string(line_no) + " is malformed");
    }
    double p;
    while (ss >> p) r.probs.push_back(p);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string inspect_artifact(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kMissingArtifact, path.string() + " not found");
  auto in = open_in(path);
  std::ostringstream out;
  const std::string ext = path.extension().string();
  if (ext == ".json") {
    auto j = nlohmann::json::parse(in);
    if (j.value("format", "") == "seedcls-model") {
      out << "model " << j["kind"].get<std::string>() << ", " << j["num_classes"] << " classes, vocab hash "
          << j["vocab_hash"].get<std::string>() << ", seed " << j["seed"] << '\n';
      out << "config " << j["config"].dump() << '\n';
      for (const auto& t : j["parameters"]) {
        out << "  " << t["name"].get<std::string>() << ' ' << t["shape"].dump() << '\n';
      }
    } else {
      out << j.dump(2) << '\n';
    }
  } else if (ext == ".jsonl") {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) out << nlohmann::json::parse(line).dump(2) << '\n';
    }
  } else {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      if (n < 20) out << line << '\n';
      ++n;
    }
    if (n > 20) out << "... (" << n << " lines)\n";
  }
  return out.str();
}

}  // namespace seedcls
