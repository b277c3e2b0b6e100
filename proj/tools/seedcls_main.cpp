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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "seedcls/pipeline.hpp"
#include "seedcls/synth.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool single_thread = false;
  bool dump_pseudo = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed, overrides the config");
  cmd->add_flag("--single-thread", f.single_thread, "run every stage on one thread (bit-reproducible)");
  cmd->add_flag("--dump-pseudo", f.dump_pseudo, "write pseudo documents in pipeline mode");
}

seedcls::PipelineConfig resolve(const CommonFlags& f) {
  seedcls::PipelineConfig cfg = seedcls::load_config(f.config_path);
  if (f.seed) cfg.seed = *f.seed;
  if (f.single_thread) cfg.single_thread = true;
  if (f.dump_pseudo) cfg.dump_pseudo = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly supervised text classification from seed words"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run every stage");
  add_common(pipeline_cmd, flags);

  std::string stage_name;
  auto* stage_cmd = app.add_subcommand("stage", "run one stage against an output directory");
  stage_cmd->add_option("name", stage_name, "embed | seeds | vmf | generate | pretrain | selftrain | eval")->required();
  add_common(stage_cmd, flags);

  seedcls::SynthConfig synth;
  std::string synth_dir = "synthetic";
  auto* synth_cmd = app.add_subcommand("synth", "write the bundled synthetic corpus");
  synth_cmd->add_option("--out", synth_dir, "output directory");
  synth_cmd->add_option("--classes", synth.classes);
  synth_cmd->add_option("--docs-per-class", synth.docs_per_class);
  synth_cmd->add_option("--topic-words", synth.topic_words);
  synth_cmd->add_option("--background-words", synth.background_words);
  synth_cmd->add_option("--seeds-per-class", synth.seeds_per_class);
  synth_cmd->add_option("--labeled-per-class", synth.labeled_per_class);
  synth_cmd->add_option("--seed", synth.rng_seed);

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "pretty-print an artifact");
  inspect_cmd->add_option("path", inspect_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pipeline_cmd) {
      seedcls::run_pipeline(resolve(flags));
    } else if (*stage_cmd) {
      seedcls::run_stage(stage_name, resolve(flags));
    } else if (*synth_cmd) {
      const auto corpus = seedcls::generate_synthetic_corpus(synth);
      seedcls::write_synthetic_corpus(corpus, synth_dir);
      // Starter config pointing at the files just written.
      seedcls::PipelineConfig cfg;
      const auto dir = std::filesystem::absolute(synth_dir);
      cfg.corpus_path = (dir / "corpus.tsv").string();
      cfg.supervision_path = (dir / "keywords.tsv").string();
      cfg.output_dir = (dir / "run").string();
      std::ofstream out(dir / "config.json");
      out << seedcls::config_to_json(cfg).dump(2) << '\n';
      std::printf("wrote %zu documents to %s\n", corpus.lines.size(), dir.string().c_str());
    } else if (*inspect_cmd) {
      std::cout << seedcls::inspect_artifact(inspect_path);
    }
  } catch (const seedcls::Error& e) {
    spdlog::error("{}", e.what());
    return seedcls::exit_code_for(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
