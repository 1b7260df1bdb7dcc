// core/include/doalab/nn.h

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

#ifndef DOALAB_NN_H_
#define DOALAB_NN_H_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "doalab/constants.h"
#include "doalab/datagen.h"
#include "doalab/rng.h"
#include "doalab/shard.h"

namespace doalab {

// Multi-label DOA classifier: (mic_count - 1) conv layers of `conv_filters`
// 2x1 filters collapse the mic axis to one row, the F x band map is
// flattened, two ReLU FC layers follow, and a sigmoid output scores each DOA
// class independently.
struct ModelSpec {
  int mic_count = kMicCount;
  int band_count = kBandCount;
  int conv_filters = 64;
  int fc_size = 512;
  int class_count = kClassCount;
  double dropout_rate = 0.5;

  int conv_layers() const { return mic_count - 1; }
  int feature_dim() const { return mic_count * band_count; }
  int flat_dim() const { return conv_filters * band_count; }
  void Validate() const;
  bool operator==(const ModelSpec&) const = default;
};

template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
struct Tensor {
  std::string name;
  MatrixX<S> value;

  Tensor() = default;
  Tensor(std::string n, int rows, int cols)
      : name(std::move(n)), value(MatrixX<S>::Zero(rows, cols)) {}
};

// Inverted-dropout masks (entries are 0 or 1/keep), one per dropout site:
// after the flattened conv output and after each hidden FC layer.
template <typename S>
struct DropoutMask {
  std::vector<MatrixX<S>> sites;
};

// The network, templated on the arithmetic scalar: float for production,
// double for finite-difference gradient checks. Parameter layout, init draw
// order and forward math are identical for both.
template <typename S>
class Model {
 public:
  using Matrix = MatrixX<S>;

  explicit Model(const ModelSpec& spec);  // zero-initialized parameters

  // He-normal weights (sigma^2 = 2 / fan_in), zero biases; every value is
  // drawn as a double in declaration order, row-major, from the "init"
  // stream of `seed`.
  void InitHe(uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  // Stable declaration order; the same order is used by Adam, checkpoints
  // and He init.
  std::vector<Tensor<S>*> Params();
  std::vector<const Tensor<S>*> Params() const;

  // Activations recorded by Forward, consumed by Backward. Layer l > 0 reads
  // its input from conv_out[l - 1], so only the reshaped network input and
  // per-layer outputs are kept.
  struct Cache {
    std::vector<Matrix> input_rows;             // one [1, B*K] row per mic
    std::vector<std::vector<Matrix>> conv_out;  // per layer, post-ReLU rows
    Matrix flat, fc1, fc2;  // post-ReLU, post-dropout activations
    const DropoutMask<S>* dropout = nullptr;
  };

  // input: [feature_dim, B], one flattened phase map (index m*K + k) per
  // column. Returns clamped sigmoid probabilities [class_count, B]. Pass a
  // dropout mask while training; null disables dropout.
  Matrix Forward(const Matrix& input, const DropoutMask<S>* dropout = nullptr,
                 Cache* cache = nullptr) const;

  // Inference path: processes each column as its own batch of one, so the
  // result for a sample never depends on what it was batched with.
  Matrix Infer(const Matrix& input) const;

  // dlogits: gradient w.r.t. the pre-sigmoid output, [class_count, B].
  // `grads` must come from ZeroGrads(); contributions accumulate.
  void Backward(const Cache& cache, const Matrix& dlogits,
                std::vector<Tensor<S>>* grads) const;

  std::vector<Tensor<S>> ZeroGrads() const;
  DropoutMask<S> DrawDropout(int batch, Rng& rng) const;

 private:
  ModelSpec spec_;
  std::vector<Tensor<S>> params_;
};

extern template class Model<float>;
extern template class Model<double>;

// Binary cross-entropy: sum over classes, mean over batch, accumulated in
// double. probs must already be clamped away from {0, 1} (Forward does).
template <typename S>
double Bce(const MatrixX<S>& probs, const MatrixX<S>& targets);

// Gradient of Bce w.r.t. the pre-sigmoid logits: (p - y) / batch.
template <typename S>
MatrixX<S> BceGradWrtLogits(const MatrixX<S>& probs, const MatrixX<S>& targets);

extern template double Bce<float>(const MatrixX<float>&, const MatrixX<float>&);
extern template double Bce<double>(const MatrixX<double>&, const MatrixX<double>&);
extern template MatrixX<float> BceGradWrtLogits<float>(const MatrixX<float>&,
                                                       const MatrixX<float>&);
extern template MatrixX<double> BceGradWrtLogits<double>(const MatrixX<double>&,
                                                         const MatrixX<double>&);

// Adam with double-precision moments; parameters update through a double
// round trip so float models see the same trajectory scaled, not a different
// one.
template <typename S>
class Adam {
 public:
  Adam(Model<S>& model, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  void Step(const std::vector<Tensor<S>>& grads);
  int64_t steps() const { return t_; }

 private:
  Model<S>* model_;
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<MatrixX<double>> m_, v_;
};

extern template class Adam<float>;
extern template class Adam<double>;

// In-memory training set, loaded from a generated dataset. Shard digests are
// verified against the manifest before parsing.
class FrameDataset {
 public:
  FrameDataset(const DatasetManifest& manifest, const std::string& root_dir);

  size_t size() const { return records_.size(); }
  int feature_dim() const { return feature_dim_; }
  int class_count() const { return class_count_; }
  const LabeledFrame& record(size_t i) const { return records_[i]; }

  // Columns of x: flattened phase maps; columns of y: 0/1 class indicators.
  void Gather(std::span<const size_t> indices, MatrixX<float>* x, MatrixX<float>* y) const;

 private:
  std::vector<LabeledFrame> records_;
  int feature_dim_ = 0;
  int class_count_ = 0;
};

struct TrainConfig {
  int epochs = 2;
  int batch = 512;
  double lr = 1e-3;
  uint64_t seed = 0;
  std::string out_dir;  // checkpoints + loss_log.csv; empty = keep in memory
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double wall_seconds = 0.0;
};

// Shuffled mini-batch SGD with per-epoch "shuffle"/"dropout" seed streams.
// Writes model_epoch<N>.doam, model.doam (the final epoch) and loss_log.csv
// under out_dir when set. The loss trajectory is a pure function of
// (dataset, config).
std::vector<EpochStats> TrainModel(Model<float>& model, const FrameDataset& data,
                                   const TrainConfig& config);

// Checkpoint layout: magic "DOAM" | version u16 | header_len u32 | JSON
// header (spec, scalar type, tensor names and shapes) | float32 tensor data
// in declaration order.
void SaveCheckpoint(const Model<float>& model, const std::string& path);
Model<float> LoadCheckpoint(const std::string& path);

inline constexpr uint16_t kCheckpointVersion = 1;

// Finite-difference check of Backward on a small double-precision model with
// a frozen dropout mask. Relative error uses |fd - an| / max(|fd| + |an|, floor).
struct GradcheckReport {
  double max_rel_err = 0.0;
  int checked = 0;
  int skipped = 0;  // probes discarded for sitting within h of a ReLU kink
  bool passed = false;
};

GradcheckReport RunGradcheck(uint64_t seed, double h = 1e-5, double tol = 1e-4,
                             int probes_per_tensor = 24);

}  // namespace doalab

#endif  // DOALAB_NN_H_
