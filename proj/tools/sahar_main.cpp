// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sahar/sahar.h"

namespace {

namespace fs = std::filesystem;

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kIo = 4, kIntegrity = 5, kRuntime = 6 };

int exit_code(sahar_status s) {
  switch (s) {
    case SAHAR_OK: return kOk;
    case SAHAR_ERR_CONFIG: return kConfig;
    case SAHAR_ERR_DATA: return kData;
    case SAHAR_ERR_IO: return kIo;
    case SAHAR_ERR_INTEGRITY: return kIntegrity;
    case SAHAR_ERR_ARGUMENT: return kUsage;
    case SAHAR_ERR_RUNTIME: return kRuntime;
  }
  return kRuntime;
}

void log_to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int finish(sahar_status s) {
  if (s != SAHAR_OK) {
    std::fprintf(stderr, "error: %s\n", sahar_last_error());
    return exit_code(s);
  }
  std::printf("%s\n", nlohmann::json::parse(sahar_last_result()).dump(2).c_str());
  return kOk;
}

struct Globals {
  std::optional<std::string> config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool force = false;
  bool quiet = false;
};

struct Experiment {
  sahar_experiment* handle = nullptr;
  ~Experiment() { sahar_experiment_free(handle); }
};

sahar_status open_experiment(const Globals& g, Experiment& exp) {
  std::vector<std::string> overrides = g.sets;
  if (g.seed) overrides.push_back("train.seed=" + std::to_string(*g.seed));
  if (g.out) overrides.push_back("output=" + nlohmann::json(fs::absolute(*g.out).string()).dump());
  std::vector<const char*> ptrs;
  for (const auto& o : overrides) ptrs.push_back(o.c_str());
  return sahar_experiment_open(g.config ? g.config->c_str() : nullptr, ptrs.data(), ptrs.size(), &exp.handle);
}

std::string default_checkpoint(const sahar_experiment* exp) {
  const auto cfg = nlohmann::json::parse(sahar_experiment_config(exp));
  return (fs::path(cfg.at("output").get<std::string>()) / "train" / "checkpoint").string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-based human activity recognition: ingest, train, evaluate, export attention maps."};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Experiment JSON file");
  app.add_option("--set", g.sets, "Override a config field, e.g. --set train.max_epochs=20")->allow_extra_args(false);
  app.add_option("--seed", g.seed, "Shortcut for --set train.seed=N");
  app.add_option("--out", g.out, "Shortcut for --set output=DIR");
  app.add_flag("--force", g.force, "Replace existing outputs of the command");
  app.add_flag("-q,--quiet", g.quiet, "No progress lines on stderr");

  auto* ingest = app.add_subcommand("ingest", "Parse, preprocess and cache the configured recordings");
  auto* train = app.add_subcommand("train", "Train on the configured split; writes <out>/train");

  std::string checkpoint, protocol = "both", split = "test";
  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a split; writes <out>/eval/<split>");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint directory (default <out>/train/checkpoint)");
  eval->add_option("--protocol", protocol, "sample, window or both")
      ->check(CLI::IsMember({"sample", "window", "both"}))
      ->capture_default_str();
  eval->add_option("--split", split, "train, val or test")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();

  auto* loso = app.add_subcommand("loso", "Leave-one-subject-out cross validation; writes <out>/loso");

  std::vector<std::size_t> sizes;
  auto* sweep = app.add_subcommand("sweep", "Train and test once per window size; writes <out>/sweep/sweep.csv");
  sweep->add_option("--sizes", sizes, "Window lengths in samples")->required()->delimiter(',');

  std::vector<std::string> classes;
  bool profile = false;
  auto* attn = app.add_subcommand("attn-maps", "Per-class mean sensor attention maps; writes <out>/attention/<split>");
  attn->add_option("--checkpoint", checkpoint, "Checkpoint directory (default <out>/train/checkpoint)");
  attn->add_option("--split", split, "train, val or test")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  attn->add_option("--classes", classes, "Class names or indices (default: all)")->delimiter(',');
  attn->add_flag("--profile", profile, "Also write the time-averaged 1 x S profile per class");

  std::string synth_dir;
  nlohmann::json synth_opts = nlohmann::json::object();
  std::size_t subjects = 3, segments = 24, segment_length = 64, channels = 6, n_classes = 3, informative = 2;
  auto* synth = app.add_subcommand("synth", "Write a planted-signal dataset with schema and experiment config");
  synth->add_option("dir", synth_dir, "Output directory")->required();
  synth->add_option("--subjects", subjects)->capture_default_str();
  synth->add_option("--segments", segments, "Constant-label segments per recording")->capture_default_str();
  synth->add_option("--segment-length", segment_length)->capture_default_str();
  synth->add_option("--channels", channels)->capture_default_str();
  synth->add_option("--classes", n_classes)->capture_default_str();
  synth->add_option("--informative", informative, "Index of the class-informative channel")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (!g.quiet) sahar_set_log_callback(log_to_stderr, nullptr);

  if (synth->parsed()) {
    synth_opts = {{"subjects", subjects},   {"segments", segments},  {"segment_length", segment_length},
                  {"channels", channels},   {"classes", n_classes}, {"informative_channel", informative},
                  {"seed", g.seed.value_or(1)}};
    return finish(sahar_synth(synth_dir.c_str(), synth_opts.dump().c_str(), g.force ? 1 : 0));
  }

  Experiment exp;
  if (const auto s = open_experiment(g, exp); s != SAHAR_OK) return finish(s);
  const int force = g.force ? 1 : 0;

  if (ingest->parsed()) return finish(sahar_ingest(exp.handle));
  if (train->parsed()) return finish(sahar_train(exp.handle, force));
  if (loso->parsed()) return finish(sahar_loso(exp.handle, force));
  if (sweep->parsed()) return finish(sahar_sweep(exp.handle, sizes.data(), sizes.size(), force));
  if (checkpoint.empty()) checkpoint = default_checkpoint(exp.handle);
  if (eval->parsed()) return finish(sahar_eval(exp.handle, checkpoint.c_str(), protocol.c_str(), split.c_str(), force));
  if (attn->parsed()) {
    std::vector<const char*> ptrs;
    for (const auto& c : classes) ptrs.push_back(c.c_str());
    return finish(sahar_attention_maps(exp.handle, checkpoint.c_str(), split.c_str(), ptrs.data(), ptrs.size(),
                                       profile ? 1 : 0, force));
  }
  return kUsage;
}
