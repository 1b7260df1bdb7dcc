// core/src/eval.cc

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

#include "doalab/eval.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "doalab/datagen.h"
#include "doalab/error.h"
#include "doalab/stft.h"
#include "doalab/threading.h"
#include "doalab/wav.h"
#include "json.hpp"

namespace doalab {

namespace fs = std::filesystem;
using nlohmann::json;

Eigen::VectorXd Aggregate(const Eigen::MatrixXd& frame_probs) {
  Require(frame_probs.cols() >= 1, ErrorKind::kInvalidArgument, "aggregate needs >= 1 frame");
  Require(frame_probs.rows() >= 1, ErrorKind::kInvalidArgument, "aggregate needs >= 1 class");
  const Eigen::VectorXd mean = frame_probs.rowwise().mean();
  const double total = mean.sum();
  if (total <= 0.0) {
    return Eigen::VectorXd::Constant(mean.size(), 1.0 / static_cast<double>(mean.size()));
  }
  return mean / total;
}

std::pair<int, int> Top2(const Eigen::VectorXd& aggregated) {
  const int n = static_cast<int>(aggregated.size());
  Require(n >= 2, ErrorKind::kInvalidArgument, "top2 needs >= 2 classes");
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (aggregated[i] > aggregated[best]) best = i;  // strict: ties keep the lower index
  }
  int second = best == 0 ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    if (i == best || i == second) continue;
    if (aggregated[i] > aggregated[second]) second = i;
  }
  return {std::min(best, second), std::max(best, second)};
}

double PairMae(double est1, double est2, double true1, double true2) {
  const double direct = 0.5 * (std::abs(est1 - true1) + std::abs(est2 - true2));
  const double crossed = 0.5 * (std::abs(est1 - true2) + std::abs(est2 - true1));
  return std::min(direct, crossed);
}

namespace {

struct MixtureEval {
  ResultRow row;
  Eigen::VectorXd posterior;
  double snr_db = 0.0;
};

// Shared experiment skeleton; `posteriors_fn` turns one mixture's STFT into
// the class_count x frames posterior matrix.
ExperimentResult RunCore(const std::string& test_dir, const std::string& method,
                         int doa_step_deg,
                         const std::function<Eigen::MatrixXd(const StftFrameSet&)>& posteriors_fn,
                         int threads) {
  const std::vector<std::string> dirs = ListMixtureDirs(test_dir);
  std::vector<std::optional<MixtureEval>> evals(dirs.size());
  std::vector<std::string> failures(dirs.size());

  ParallelFor(dirs.size(), threads, [&](size_t i) {
    try {
      const MixtureTruth truth = ReadTruth(dirs[i]);
      const WavData wav = ReadWav((fs::path(dirs[i]) / "mixture.wav").string());
      const StftFrameSet stft = Stft(wav.channels, kDftLen, wav.sample_rate_hz);
      const Eigen::VectorXd agg = Aggregate(posteriors_fn(stft));
      const auto [c1, c2] = Top2(agg);

      MixtureEval e;
      e.row.mixture_id = fs::path(dirs[i]).filename().string();
      e.row.true_doa1 = truth.theta1_deg;
      e.row.true_doa2 = truth.theta2_deg;
      e.row.est_doa1 = c1 * doa_step_deg;
      e.row.est_doa2 = c2 * doa_step_deg;
      e.row.mae_deg = PairMae(e.row.est_doa1, e.row.est_doa2, e.row.true_doa1, e.row.true_doa2);
      e.posterior = agg;
      e.snr_db = truth.snr_db;
      evals[i] = std::move(e);
    } catch (const std::exception& ex) {
      failures[i] = ex.what();
    }
  });

  ExperimentResult out;
  out.summary.method = method;
  double mae_sum = 0.0;
  bool have_snr = false;
  for (size_t i = 0; i < dirs.size(); ++i) {
    if (!evals[i]) {
      std::fprintf(stderr, "warning: skipping %s: %s\n", dirs[i].c_str(),
                   failures[i].c_str());
      ++out.summary.skipped;
      continue;
    }
    if (!have_snr) {
      out.summary.snr_db = evals[i]->snr_db;
      have_snr = true;
    }
    mae_sum += evals[i]->row.mae_deg;
    out.rows.push_back(std::move(evals[i]->row));
    out.posteriors.push_back(std::move(evals[i]->posterior));
  }
  out.summary.mixture_count = static_cast<int>(out.rows.size());
  out.summary.mean_mae_deg =
      out.rows.empty() ? 0.0 : mae_sum / static_cast<double>(out.rows.size());
  return out;
}

}  // namespace

ExperimentResult RunExperiment(const std::string& test_dir, const Model<float>& model,
                               int threads) {
  const ModelSpec& spec = model.spec();
  Require((spec.class_count - 1) >= 1 && 180 % (spec.class_count - 1) == 0,
          ErrorKind::kInvalidArgument, "model class count does not define a uniform doa grid");
  const int step = 180 / (spec.class_count - 1);
  auto posteriors = [&model, &spec](const StftFrameSet& stft) {
    Require(stft.channels == spec.mic_count, ErrorKind::kShapeMismatch,
            "mixture channel count does not match the model");
    const int band_hi = kBandLo + spec.band_count - 1;
    MatrixX<float> x(spec.feature_dim(), stft.frames);
    for (int n = 0; n < stft.frames; ++n) {
      const PhaseMap pm = ExtractPhaseMap(stft, n, kBandLo, band_hi);
      for (size_t idx = 0; idx < pm.values.size(); ++idx) {
        x(static_cast<Eigen::Index>(idx), n) = static_cast<float>(pm.values[idx]);
      }
    }
    return model.Infer(x).cast<double>().eval();
  };
  return RunCore(test_dir, "cnn", step, posteriors, threads);
}

ExperimentResult RunExperiment(const std::string& test_dir, const SteeringTable& table,
                               int threads) {
  auto posteriors = [&table](const StftFrameSet& stft) {
    Eigen::MatrixXd probs(table.class_count, stft.frames);
    for (int n = 0; n < stft.frames; ++n) {
      probs.col(n) = SrpProbabilities(SrpResponse(stft, n, table));
    }
    return probs;
  };
  return RunCore(test_dir, "srp", table.doa_step_deg, posteriors, threads);
}

Comparison Compare(const std::vector<ResultRow>& cnn, const std::vector<ResultRow>& srp) {
  Require(!cnn.empty(), ErrorKind::kInvalidArgument, "no result rows to compare");
  Require(cnn.size() == srp.size(), ErrorKind::kInvalidArgument, "mixture id mismatch");
  Comparison cmp;
  cmp.mixture_count = static_cast<int>(cnn.size());
  int wins = 0;
  double cnn_sum = 0.0, srp_sum = 0.0;
  for (size_t i = 0; i < cnn.size(); ++i) {
    Require(cnn[i].mixture_id == srp[i].mixture_id, ErrorKind::kInvalidArgument,
            "mixture id mismatch");
    cnn_sum += cnn[i].mae_deg;
    srp_sum += srp[i].mae_deg;
    wins += cnn[i].mae_deg < srp[i].mae_deg;
  }
  cmp.cnn_mean_mae_deg = cnn_sum / static_cast<double>(cnn.size());
  cmp.srp_mean_mae_deg = srp_sum / static_cast<double>(srp.size());
  cmp.win_rate = static_cast<double>(wins) / static_cast<double>(cnn.size());
  return cmp;
}

namespace {

constexpr const char* kResultsHeader = "mixture_id,true_doa1,true_doa2,est_doa1,est_doa2,mae_deg";

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& field, const std::string& path) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    Require(used == field.size(), ErrorKind::kInvalidArgument, "trailing characters");
    return v;
  } catch (const std::exception&) {
    Fail(ErrorKind::kInvalidArgument, "bad numeric field '" + field + "' in " + path);
  }
}

}  // namespace

void WriteResultsCsv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot open " + path);
  out << kResultsHeader << "\n";
  for (const auto& r : rows) {
    out << r.mixture_id << ',' << FormatDouble(r.true_doa1) << ',' << FormatDouble(r.true_doa2)
        << ',' << FormatDouble(r.est_doa1) << ',' << FormatDouble(r.est_doa2) << ','
        << FormatDouble(r.mae_deg) << "\n";
  }
  Require(out.good(), ErrorKind::kIo, "short write to " + path);
}

std::vector<ResultRow> ReadResultsCsv(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorKind::kIo, "cannot open " + path);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), ErrorKind::kTruncatedFile,
          "empty results file " + path);
  Require(line == kResultsHeader, ErrorKind::kInvalidArgument,
          "unexpected results header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    Require(fields.size() == 6, ErrorKind::kInvalidArgument,
            "results row needs 6 fields in " + path);
    ResultRow r;
    r.mixture_id = fields[0];
    r.true_doa1 = ParseDouble(fields[1], path);
    r.true_doa2 = ParseDouble(fields[2], path);
    r.est_doa1 = ParseDouble(fields[3], path);
    r.est_doa2 = ParseDouble(fields[4], path);
    r.mae_deg = ParseDouble(fields[5], path);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteSummaryJson(const std::string& path, const ExperimentSummary& summary) {
  json root;
  root["method"] = summary.method;
  root["snr_db"] = summary.snr_db;
  root["mixture_count"] = summary.mixture_count;
  root["skipped"] = summary.skipped;
  root["mean_mae_deg"] = summary.mean_mae_deg;
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot open " + path);
  out << root.dump(2) << "\n";
  Require(out.good(), ErrorKind::kIo, "short write to " + path);
}

void WriteComparisonJson(const std::string& path, const Comparison& comparison) {
  json root;
  root["mixture_count"] = comparison.mixture_count;
  root["cnn_mean_mae_deg"] = comparison.cnn_mean_mae_deg;
  root["srp_mean_mae_deg"] = comparison.srp_mean_mae_deg;
  root["win_rate"] = comparison.win_rate;
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot open " + path);
  out << root.dump(2) << "\n";
  Require(out.good(), ErrorKind::kIo, "short write to " + path);
}

void WritePosteriorsCsv(const std::string& path, const std::vector<ResultRow>& rows,
                        const std::vector<Eigen::VectorXd>& posteriors) {
  Require(rows.size() == posteriors.size(), ErrorKind::kShapeMismatch,
          "rows and posteriors must align");
  std::ofstream out(path, std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot open " + path);
  out << "mixture_id";
  const Eigen::Index classes = posteriors.empty() ? 0 : posteriors[0].size();
  for (Eigen::Index c = 0; c < classes; ++c) out << ",p" << c;
  out << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    Require(posteriors[i].size() == classes, ErrorKind::kShapeMismatch,
            "posterior length mismatch");
    out << rows[i].mixture_id;
    for (Eigen::Index c = 0; c < classes; ++c) out << ',' << FormatDouble(posteriors[i][c]);
    out << "\n";
  }
  Require(out.good(), ErrorKind::kIo, "short write to " + path);
}

}  // namespace doalab
