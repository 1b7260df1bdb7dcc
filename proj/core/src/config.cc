// core/src/config.cc

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

#include "doalab/config.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "doalab/error.h"
#include "json.hpp"
#include "json_util.h"

namespace doalab {

namespace {

using nlohmann::json;

void CheckKeys(const json& obj, const std::string& prefix,
               std::initializer_list<const char*> allowed) {
  Require(obj.is_object(), ErrorKind::kInvalidArgument,
          "config section '" + (prefix.empty() ? std::string("<root>") : prefix) +
              "' must be a JSON object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    Require(known, ErrorKind::kInvalidArgument,
            "unknown config key '" + prefix + item.key() + "'");
  }
}

template <typename T>
void Get(const json& obj, const char* key, T* out) {
  if (obj.contains(key)) *out = obj.at(key).get<T>();
}

void ParseTrain(const json& obj, TrainGrid* grid) {
  CheckKeys(obj, "train.",
            {"rooms", "positions_per_room", "distances", "snr_db", "doa_step_deg",
             "signal_seconds", "pair_stride", "include_singles"});
  if (obj.contains("rooms")) {
    grid->rooms.clear();
    for (const json& r : obj.at("rooms")) grid->rooms.push_back(internal::RoomFromJson(r));
  }
  Get(obj, "positions_per_room", &grid->positions_per_room);
  if (obj.contains("distances")) {
    grid->distances = obj.at("distances").get<std::vector<double>>();
  }
  if (obj.contains("snr_db")) {
    const json& snr = obj.at("snr_db");
    Require(snr.is_array() && snr.size() == 2, ErrorKind::kInvalidArgument,
            "train.snr_db must be [lo, hi]");
    grid->snr_lo_db = snr[0].get<double>();
    grid->snr_hi_db = snr[1].get<double>();
  }
  Get(obj, "doa_step_deg", &grid->doa_step_deg);
  Get(obj, "signal_seconds", &grid->signal_seconds);
  Get(obj, "pair_stride", &grid->pair_stride);
  Get(obj, "include_singles", &grid->include_singles);
}

void ParseTest(const json& obj, TestSetConfig* test, std::string* wav_dir) {
  CheckKeys(obj, "test.",
            {"room", "distance", "snr_db", "pair_stride", "duration_s", "doa_step_deg",
             "wav_dir"});
  if (obj.contains("room")) test->room = internal::RoomFromJson(obj.at("room"));
  Get(obj, "distance", &test->distance);
  Get(obj, "snr_db", &test->snr_db);
  Get(obj, "pair_stride", &test->pair_stride);
  Get(obj, "duration_s", &test->duration_s);
  Get(obj, "doa_step_deg", &test->doa_step_deg);
  Get(obj, "wav_dir", wav_dir);
}

}  // namespace

ModelSpec RunConfig::MakeModelSpec() const {
  ModelSpec spec;
  spec.conv_filters = conv_filters;
  spec.fc_size = fc_size;
  spec.class_count = ClassCountForStep(train.doa_step_deg);
  spec.dropout_rate = dropout_rate;
  return spec;
}

void RunConfig::Validate() const {
  Require(threads >= 1, ErrorKind::kInvalidArgument, "threads must be >= 1");
  train.Validate();
  test.Validate();
  Require(train.doa_step_deg == test.doa_step_deg, ErrorKind::kInvalidArgument,
          "train and test must share the same doa step");
  MakeModelSpec().Validate();
  Require(epochs >= 1, ErrorKind::kInvalidArgument, "epochs must be >= 1");
  Require(batch >= 1, ErrorKind::kInvalidArgument, "batch must be >= 1");
  Require(std::isfinite(lr) && lr > 0.0, ErrorKind::kInvalidArgument,
          "learning rate must be positive");
}

RunConfig LoadRunConfig(const std::string& path) {
  const json root = internal::LoadJsonFile(path, "config");
  CheckKeys(root, "", {"seed", "threads", "train", "test", "model", "training"});
  RunConfig config;
  try {
    Get(root, "seed", &config.seed);
    Get(root, "threads", &config.threads);
    if (root.contains("train")) ParseTrain(root.at("train"), &config.train);
    if (root.contains("test")) {
      ParseTest(root.at("test"), &config.test, &config.test_wav_dir);
    }
    if (root.contains("model")) {
      const json& model = root.at("model");
      CheckKeys(model, "model.", {"conv_filters", "fc_size", "dropout_rate"});
      Get(model, "conv_filters", &config.conv_filters);
      Get(model, "fc_size", &config.fc_size);
      Get(model, "dropout_rate", &config.dropout_rate);
    }
    if (root.contains("training")) {
      const json& training = root.at("training");
      CheckKeys(training, "training.", {"epochs", "batch", "lr"});
      Get(training, "epochs", &config.epochs);
      Get(training, "batch", &config.batch);
      Get(training, "lr", &config.lr);
    }
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument,
         "bad config value in " + path + ": " + e.what());
  }
  return config;
}

std::string RunConfigToJson(const RunConfig& config) {
  json train;
  train["rooms"] = json::array();
  for (const Room& room : config.train.rooms) {
    train["rooms"].push_back(internal::RoomToJson(room));
  }
  train["positions_per_room"] = config.train.positions_per_room;
  train["distances"] = config.train.distances;
  train["snr_db"] = {config.train.snr_lo_db, config.train.snr_hi_db};
  train["doa_step_deg"] = config.train.doa_step_deg;
  train["signal_seconds"] = config.train.signal_seconds;
  train["pair_stride"] = config.train.pair_stride;
  train["include_singles"] = config.train.include_singles;

  json test;
  test["room"] = internal::RoomToJson(config.test.room);
  test["distance"] = config.test.distance;
  test["snr_db"] = config.test.snr_db;
  test["pair_stride"] = config.test.pair_stride;
  test["duration_s"] = config.test.duration_s;
  test["doa_step_deg"] = config.test.doa_step_deg;
  test["wav_dir"] = config.test_wav_dir;

  const json root = {{"seed", config.seed},
                     {"threads", config.threads},
                     {"train", train},
                     {"test", test},
                     {"model",
                      {{"conv_filters", config.conv_filters},
                       {"fc_size", config.fc_size},
                       {"dropout_rate", config.dropout_rate}}},
                     {"training",
                      {{"epochs", config.epochs}, {"batch", config.batch}, {"lr", config.lr}}}};
  return root.dump(2) + "\n";
}

void WriteRunConfig(const std::string& path, const RunConfig& config) {
  internal::WriteTextFile(path, RunConfigToJson(config));
}

}  // namespace doalab
