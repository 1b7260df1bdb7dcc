// core/include/doalab/config.h

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

#ifndef DOALAB_CONFIG_H_
#define DOALAB_CONFIG_H_

#include <cstdint>
#include <string>

#include "doalab/datagen.h"
#include "doalab/nn.h"

namespace doalab {

// Everything one run needs, loadable from a JSON file. Parsing is strict:
// unknown keys fail with their full path, so a typo cannot silently fall
// back to a default. Every field has a default, so configs only state what
// they change; CLI flags may override individual fields afterwards.
struct RunConfig {
  uint64_t seed = 2026;
  int threads = 1;
  TrainGrid train;
  TestSetConfig test;
  std::string test_wav_dir;  // empty: synthetic speech-like sources
  int conv_filters = 64;
  int fc_size = 512;
  double dropout_rate = 0.5;
  int epochs = 2;
  int batch = 512;
  double lr = 1e-3;

  // Model derived from the grid: class count follows the training DOA step.
  ModelSpec MakeModelSpec() const;
  void Validate() const;
};

RunConfig LoadRunConfig(const std::string& path);
std::string RunConfigToJson(const RunConfig& config);
// Resolved-config echo written next to a run's outputs for provenance.
void WriteRunConfig(const std::string& path, const RunConfig& config);

}  // namespace doalab

#endif  // DOALAB_CONFIG_H_
