// tools/doalab.cc

// Copyright 2026  The doalab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the whole pipeline: data generation, training,
// evaluation against the SRP-PHAT baseline, and a few diagnostics. Every
// subcommand that writes results also writes the resolved config next to
// them, so any run can be reproduced from its output directory alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "doalab/acoustics.h"
#include "doalab/config.h"
#include "doalab/datagen.h"
#include "doalab/error.h"
#include "doalab/eval.h"
#include "doalab/nn.h"
#include "doalab/srp_phat.h"
#include "doalab/wav.h"

namespace {

namespace fs = std::filesystem;
using doalab::RunConfig;

class StageTimer {
 public:
  explicit StageTimer(std::string stage) : stage_(std::move(stage)) {
    std::fprintf(stderr, "[doalab] %s...\n", stage_.c_str());
  }
  ~StageTimer() {
    const double s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
    std::fprintf(stderr, "[doalab] %s: %.1f s\n", stage_.c_str(), s);
  }

 private:
  std::string stage_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Flag values that land on top of whatever the config file set.
struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> snr_db;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> batch;
};

RunConfig ResolveConfig(const std::string& config_path, const Overrides& o) {
  RunConfig config;
  if (!config_path.empty()) config = doalab::LoadRunConfig(config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = *o.threads;
  if (o.snr_db) config.test.snr_db = *o.snr_db;
  if (o.epochs) config.epochs = *o.epochs;
  if (o.lr) config.lr = *o.lr;
  if (o.batch) config.batch = *o.batch;
  return config;
}

void EchoConfig(const std::string& out_dir, const RunConfig& config) {
  fs::create_directories(out_dir);
  doalab::WriteRunConfig((fs::path(out_dir) / "config.json").string(), config);
}

void AddCommonFlags(CLI::App* cmd, std::string* config_path, Overrides* o) {
  cmd->add_option("--config", *config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o->seed, "master seed override");
  cmd->add_option("--threads", o->threads, "worker thread cap override");
}

std::unique_ptr<doalab::SourceProvider> MakeProvider(const RunConfig& config) {
  if (config.test_wav_dir.empty()) {
    return std::make_unique<doalab::SyntheticSpeechProvider>();
  }
  return std::make_unique<doalab::WavDirProvider>(config.test_wav_dir);
}

void WriteEvalOutputs(const std::string& out_dir, const doalab::ExperimentResult& result) {
  fs::create_directories(out_dir);
  doalab::WriteResultsCsv((fs::path(out_dir) / "results.csv").string(), result.rows);
  doalab::WriteSummaryJson((fs::path(out_dir) / "summary.json").string(), result.summary);
  doalab::WritePosteriorsCsv((fs::path(out_dir) / "posteriors.csv").string(), result.rows,
                             result.posteriors);
  std::fprintf(stderr, "[doalab] %s: %d mixtures (%d skipped), mean MAE %.2f deg\n",
               result.summary.method.c_str(), result.summary.mixture_count,
               result.summary.skipped, result.summary.mean_mae_deg);
}

int Main(int argc, char** argv) {
  CLI::App app{"doalab: multi-speaker DOA estimation laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_dir, test_dir, model_path;
  std::string cnn_csv, srp_csv;
  Overrides o;

  // gen-train
  auto* gen_train = app.add_subcommand("gen-train", "synthesize the training dataset");
  AddCommonFlags(gen_train, &config_path, &o);
  gen_train->add_option("--out", out_dir, "output dataset directory")->required();
  gen_train->callback([&] {
    const RunConfig config = ResolveConfig(config_path, o);
    config.train.Validate();
    EchoConfig(out_dir, config);
    StageTimer t("gen-train");
    const doalab::DatasetManifest manifest =
        doalab::GenerateDataset(config.train, config.seed, out_dir, config.threads);
    std::fprintf(stderr, "[doalab] wrote %llu records in %zu shards\n",
                 static_cast<unsigned long long>(manifest.total_records),
                 manifest.shards.size());
  });

  // gen-test
  auto* gen_test = app.add_subcommand("gen-test", "synthesize the test mixtures");
  AddCommonFlags(gen_test, &config_path, &o);
  gen_test->add_option("--out", out_dir, "output test-set directory")->required();
  gen_test->add_option("--snr-db", o.snr_db, "test mixture SNR override");
  gen_test->callback([&] {
    const RunConfig config = ResolveConfig(config_path, o);
    config.test.Validate();
    EchoConfig(out_dir, config);
    StageTimer t("gen-test");
    const auto provider = MakeProvider(config);
    const doalab::TestSetInfo info = doalab::GenTestMixtures(
        config.test, *provider, config.seed, out_dir, config.threads);
    std::fprintf(stderr, "[doalab] wrote %d mixtures\n", info.mixture_count);
  });

  // train
  auto* train = app.add_subcommand("train", "train the CNN on a generated dataset");
  AddCommonFlags(train, &config_path, &o);
  train->add_option("--data", data_dir, "dataset directory from gen-train")
      ->required()
      ->check(CLI::ExistingDirectory);
  train->add_option("--out", out_dir, "output run directory")->required();
  train->add_option("--epochs", o.epochs, "epoch count override");
  train->add_option("--lr", o.lr, "learning rate override");
  train->add_option("--batch", o.batch, "mini-batch size override");
  train->callback([&] {
    const RunConfig config = ResolveConfig(config_path, o);
    EchoConfig(out_dir, config);
    const doalab::DatasetManifest manifest =
        doalab::ReadManifest((fs::path(data_dir) / "manifest.json").string());

    doalab::ModelSpec spec = config.MakeModelSpec();
    spec.mic_count = manifest.mic_count;
    spec.band_count = manifest.band_count;
    spec.class_count = manifest.class_count;
    spec.Validate();

    doalab::TrainConfig train_config;
    train_config.epochs = config.epochs;
    train_config.batch = config.batch;
    train_config.lr = config.lr;
    train_config.seed = config.seed;
    train_config.out_dir = out_dir;

    std::unique_ptr<doalab::FrameDataset> data;
    {
      StageTimer t("load dataset");
      data = std::make_unique<doalab::FrameDataset>(manifest, data_dir);
    }
    doalab::Model<float> model(spec);
    model.InitHe(config.seed);
    StageTimer t("train");
    const auto stats = doalab::TrainModel(model, *data, train_config);
    for (const auto& e : stats) {
      std::fprintf(stderr, "[doalab] epoch %d: mean loss %.6f (%.1f s)\n", e.epoch,
                   e.mean_loss, e.wall_seconds);
    }
  });

  // eval-cnn
  auto* eval_cnn = app.add_subcommand("eval-cnn", "evaluate a trained model on a test set");
  AddCommonFlags(eval_cnn, &config_path, &o);
  eval_cnn->add_option("--model", model_path, "model checkpoint (.doam)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cnn->add_option("--test", test_dir, "test-set directory from gen-test")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cnn->add_option("--out", out_dir, "output directory")->required();
  eval_cnn->callback([&] {
    const RunConfig config = ResolveConfig(config_path, o);
    EchoConfig(out_dir, config);
    StageTimer t("eval-cnn");
    const doalab::Model<float> model = doalab::LoadCheckpoint(model_path);
    WriteEvalOutputs(out_dir, doalab::RunExperiment(test_dir, model, config.threads));
  });

  // eval-srp
  auto* eval_srp = app.add_subcommand("eval-srp", "run the SRP-PHAT baseline on a test set");
  AddCommonFlags(eval_srp, &config_path, &o);
  eval_srp->add_option("--test", test_dir, "test-set directory from gen-test")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_srp->add_option("--out", out_dir, "output directory")->required();
  eval_srp->callback([&] {
    const RunConfig config = ResolveConfig(config_path, o);
    EchoConfig(out_dir, config);
    StageTimer t("eval-srp");
    const doalab::SteeringTable table =
        doalab::BuildSteeringTable(config.test.doa_step_deg);
    WriteEvalOutputs(out_dir, doalab::RunExperiment(test_dir, table, config.threads));
  });

  // compare
  auto* compare = app.add_subcommand("compare", "compare CNN and SRP result CSVs");
  compare->add_option("--cnn", cnn_csv, "CNN results.csv")->required();
  compare->add_option("--srp", srp_csv, "SRP results.csv")->required();
  compare->add_option("--out", out_dir, "where to write comparison.json (optional)");
  compare->callback([&] {
    const doalab::Comparison cmp =
        doalab::Compare(doalab::ReadResultsCsv(cnn_csv), doalab::ReadResultsCsv(srp_csv));
    std::printf("mixtures: %d\ncnn mean MAE: %.3f deg\nsrp mean MAE: %.3f deg\nwin rate: %.3f\n",
                cmp.mixture_count, cmp.cnn_mean_mae_deg, cmp.srp_mean_mae_deg, cmp.win_rate);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      doalab::WriteComparisonJson((fs::path(out_dir) / "comparison.json").string(), cmp);
    }
  });

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gradcheck->add_option("--seed", o.seed, "probe seed");
  gradcheck->callback([&] {
    StageTimer t("gradcheck");
    const doalab::GradcheckReport report = doalab::RunGradcheck(o.seed.value_or(2026));
    std::printf("gradcheck: max rel err %.3e over %d probes (%d skipped at kinks): %s\n",
                report.max_rel_err, report.checked, report.skipped,
                report.passed ? "PASS" : "FAIL");
    if (!report.passed) throw doalab::Error(doalab::ErrorKind::kInvalidArgument,
                                            "gradient check failed");
  });

  // rir-dump
  auto* rir_dump = app.add_subcommand("rir-dump", "write one simulated RIR set as a wav");
  std::vector<double> dims{6.0, 6.0, 2.7};
  double rt60 = 0.3, doa = 60.0, distance = 1.5;
  rir_dump->add_option("--dims", dims, "room dimensions Lx Ly Lz")->expected(3);
  rir_dump->add_option("--rt60", rt60, "reverberation time, s (0 = anechoic)");
  rir_dump->add_option("--doa", doa, "source DOA, degrees");
  rir_dump->add_option("--distance", distance, "source distance, m");
  rir_dump->add_option("--out", out_dir, "output wav path")->required();
  rir_dump->callback([&] {
    StageTimer t("rir-dump");
    const doalab::Room room{"room", {dims[0], dims[1], dims[2]}, rt60};
    const doalab::ArraySetup array = doalab::TestArray(room);
    const std::vector<doalab::Rir> rirs =
        doalab::RirsFor(room, array, doa, distance, doalab::kSampleRateHz);
    doalab::WavData wav;
    wav.sample_rate_hz = doalab::kSampleRateHz;
    for (const doalab::Rir& rir : rirs) wav.channels.push_back(rir.taps);
    doalab::WriteWav(out_dir, wav);
    std::fprintf(stderr, "[doalab] wrote %zu-channel rir (%zu taps) to %s\n",
                 wav.channels.size(), wav.channels[0].size(), out_dir.c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Main(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
