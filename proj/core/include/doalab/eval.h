// core/include/doalab/eval.h

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

#ifndef DOALAB_EVAL_H_
#define DOALAB_EVAL_H_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "doalab/nn.h"
#include "doalab/srp_phat.h"

namespace doalab {

// Per-frame class posteriors of one mixture, one column per frame. CNN rows
// are raw sigmoids in (0, 1) and not sum-normalized; SRP columns sum to 1.
struct PosteriorTrace {
  std::string source;     // "cnn" or "srp"
  Eigen::MatrixXd probs;  // class_count x frames
};

// Mean over frames, then one normalization to unit sum.
Eigen::VectorXd Aggregate(const Eigen::MatrixXd& frame_probs);
inline Eigen::VectorXd Aggregate(const PosteriorTrace& trace) {
  return Aggregate(trace.probs);
}

// Classes of the two largest values, ties broken toward the lower class
// index; returned with first < second.
std::pair<int, int> Top2(const Eigen::VectorXd& aggregated);

// Min over the two source-to-estimate assignments of the mean absolute
// difference, in degrees. Both pairs are unordered.
double PairMae(double est1, double est2, double true1, double true2);

struct ResultRow {
  std::string mixture_id;  // directory name, e.g. "mix_040_105"
  double true_doa1 = 0.0;
  double true_doa2 = 0.0;
  double est_doa1 = 0.0;
  double est_doa2 = 0.0;
  double mae_deg = 0.0;
};

struct ExperimentSummary {
  std::string method;  // "cnn" or "srp"
  double snr_db = 0.0;
  int mixture_count = 0;  // mixtures included in the mean
  int skipped = 0;        // unreadable mixtures excluded with a warning
  double mean_mae_deg = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<Eigen::VectorXd> posteriors;  // aggregated, aligned with rows
  ExperimentSummary summary;
};

// Full protocol over every mixture of a generated test set: STFT ->
// per-frame posteriors -> aggregate -> top2 -> pair MAE. Unreadable
// mixtures are skipped with a warning on stderr and counted in the summary.
ExperimentResult RunExperiment(const std::string& test_dir, const Model<float>& model,
                               int threads = 1);
ExperimentResult RunExperiment(const std::string& test_dir, const SteeringTable& table,
                               int threads = 1);

struct Comparison {
  int mixture_count = 0;
  double cnn_mean_mae_deg = 0.0;
  double srp_mean_mae_deg = 0.0;
  double win_rate = 0.0;  // fraction of mixtures where CNN MAE < SRP MAE, strict
};

// Requires row-aligned results (same ids, same order).
Comparison Compare(const std::vector<ResultRow>& cnn, const std::vector<ResultRow>& srp);

void WriteResultsCsv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> ReadResultsCsv(const std::string& path);
void WriteSummaryJson(const std::string& path, const ExperimentSummary& summary);
void WriteComparisonJson(const std::string& path, const Comparison& comparison);
// One row of 37 (class_count) aggregated probabilities per mixture.
void WritePosteriorsCsv(const std::string& path, const std::vector<ResultRow>& rows,
                        const std::vector<Eigen::VectorXd>& posteriors);

}  // namespace doalab

#endif  // DOALAB_EVAL_H_
