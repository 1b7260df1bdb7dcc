// tests/test_cli.cc

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

// End-to-end checks of the doalab executable: exit codes, one-line error
// causes, and the determinism contract, all through the public command line.
// DOALAB_BIN is injected by the build as the path to the binary under test.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doalab/datagen.h"
#include "doalab/eval.h"
#include "doctest.h"

namespace doalab {
namespace {

namespace fs = std::filesystem;

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr, interleaved
};

fs::path ScratchDir() {
  const fs::path dir = fs::temp_directory_path() / "doalab_cli_test";
  fs::create_directories(dir);
  return dir;
}

CmdResult RunCli(const std::string& args) {
  static int counter = 0;
  const fs::path log = ScratchDir() / ("cmd_" + std::to_string(counter++) + ".log");
  const std::string cmd =
      std::string(DOALAB_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream body;
  body << in.rdbuf();
  r.output = body.str();
  return r;
}

std::string WriteTinyConfig() {
  const fs::path path = ScratchDir() / "tiny.json";
  std::ofstream out(path);
  out << R"({
  "seed": 515,
  "train": {
    "rooms": [{"name": "T1", "dims": [4.0, 5.0, 2.7], "rt60": 0.25}],
    "positions_per_room": 1,
    "distances": [1.0],
    "snr_db": [5.0, 15.0],
    "doa_step_deg": 45,
    "signal_seconds": 0.5
  },
  "test": {
    "room": {"name": "E1", "dims": [4.0, 5.0, 2.7], "rt60": 0.25},
    "distance": 1.0,
    "duration_s": 0.5,
    "doa_step_deg": 45
  },
  "model": {"conv_filters": 8, "fc_size": 32}
})";
  return path.string();
}

TEST_CASE("cli: help exits 0 and lists every subcommand") {
  const CmdResult r = RunCli("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub : {"gen-train", "gen-test", "train", "eval-cnn", "eval-srp",
                          "compare", "gradcheck", "rir-dump"}) {
    CAPTURE(sub);
    CHECK(r.output.find(sub) != std::string::npos);
  }
}

TEST_CASE("cli: unknown subcommand and unknown flag exit 2 with usage text") {
  const CmdResult bad_sub = RunCli("frobnicate");
  CHECK(bad_sub.exit_code == 2);
  CHECK(bad_sub.output.find("--help") != std::string::npos);

  const CmdResult bad_flag = RunCli("gradcheck --frobnicate");
  CHECK(bad_flag.exit_code == 2);
  CHECK(bad_flag.output.find("--frobnicate") != std::string::npos);

  const CmdResult none = RunCli("");
  CHECK(none.exit_code == 2);
}

TEST_CASE("cli: gradcheck prints the max relative error and passes") {
  const CmdResult r = RunCli("gradcheck --seed 2026");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("max rel err") != std::string::npos);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("cli: gen-train twice produces identical manifest digests") {
  const std::string config = WriteTinyConfig();
  const fs::path out_a = ScratchDir() / "ds_a";
  const fs::path out_b = ScratchDir() / "ds_b";
  fs::remove_all(out_a);
  fs::remove_all(out_b);

  const CmdResult a =
      RunCli("gen-train --config " + config + " --out " + out_a.string() + " --seed 7");
  REQUIRE(a.exit_code == 0);
  const CmdResult b =
      RunCli("gen-train --config " + config + " --out " + out_b.string() + " --seed 7");
  REQUIRE(b.exit_code == 0);

  const DatasetManifest ma = ReadManifest((out_a / "manifest.json").string());
  const DatasetManifest mb = ReadManifest((out_b / "manifest.json").string());
  REQUIRE(ma.shards.size() == mb.shards.size());
  REQUIRE(!ma.shards.empty());
  for (size_t i = 0; i < ma.shards.size(); ++i) {
    CHECK(ma.shards[i].digest == mb.shards[i].digest);
  }
  CHECK(ma.master_seed == 7);
  CHECK(ma.total_records == mb.total_records);

  // The resolved config is echoed for provenance, and the flag override won.
  CHECK(fs::exists(out_a / "config.json"));
  std::ifstream echo(out_a / "config.json");
  std::ostringstream body;
  body << echo.rdbuf();
  CHECK(body.str().find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("cli: compare with misaligned ids exits 1 with the one-line cause") {
  const fs::path dir = ScratchDir();
  std::vector<ResultRow> rows_a = {{"mix_000_045", 0, 45, 0, 45, 0.0},
                                   {"mix_000_090", 0, 90, 0, 90, 0.0}};
  std::vector<ResultRow> rows_b = rows_a;
  rows_b[1].mixture_id = "mix_000_135";
  const std::string csv_a = (dir / "a.csv").string();
  const std::string csv_b = (dir / "b.csv").string();
  WriteResultsCsv(csv_a, rows_a);
  WriteResultsCsv(csv_b, rows_b);

  const CmdResult r = RunCli("compare --cnn " + csv_a + " --srp " + csv_b);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("mixture id mismatch") != std::string::npos);

  const CmdResult ok = RunCli("compare --cnn " + csv_a + " --srp " + csv_a);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("win rate") != std::string::npos);
}

TEST_CASE("cli: config validation failure exits 1 with the offending key") {
  const fs::path path = ScratchDir() / "bad.json";
  {
    std::ofstream out(path);
    out << R"({"train": {"bogus": 1}})";
  }
  const CmdResult r =
      RunCli("gen-train --config " + path.string() + " --out " + (ScratchDir() / "never").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error: unknown config key 'train.bogus'") != std::string::npos);
}

TEST_CASE("cli: rir-dump writes a multichannel wav") {
  const fs::path wav = ScratchDir() / "rir.wav";
  fs::remove(wav);
  const CmdResult r = RunCli("rir-dump --dims 6 4 3 --rt60 0.4 --doa 60 --distance 1.5 --out " +
                             wav.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(wav));
  CHECK(fs::file_size(wav) > 44);  // more than a bare RIFF header
}

}  // namespace
}  // namespace doalab
