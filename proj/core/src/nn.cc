// core/src/nn.cc

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

#include "doalab/nn.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "doalab/error.h"
#include "json.hpp"

namespace doalab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kCheckpointMagic[4] = {'D', 'O', 'A', 'M'};
constexpr double kProbClamp = 1e-7;

template <typename S>
S Clamp01(S p) {
  const S lo = static_cast<S>(kProbClamp);
  const S hi = static_cast<S>(1.0 - kProbClamp);
  return p < lo ? lo : (p > hi ? hi : p);
}

void FisherYates(std::vector<size_t>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.UniformInt(i)]);
  }
}

}  // namespace

void ModelSpec::Validate() const {
  Require(mic_count >= 2, ErrorKind::kInvalidArgument, "model needs >= 2 mics");
  Require(band_count >= 1, ErrorKind::kInvalidArgument, "model needs >= 1 band");
  Require(conv_filters >= 1, ErrorKind::kInvalidArgument, "model needs >= 1 conv filter");
  Require(fc_size >= 1, ErrorKind::kInvalidArgument, "fc size must be >= 1");
  Require(class_count >= 2 && class_count <= 64, ErrorKind::kInvalidArgument,
          "class count must be in [2, 64]");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorKind::kInvalidArgument,
          "dropout rate must be in [0, 1)");
}

template <typename S>
Model<S>::Model(const ModelSpec& spec) : spec_(spec) {
  spec_.Validate();
  const int f = spec_.conv_filters;
  char name[32];
  for (int l = 0; l < spec_.conv_layers(); ++l) {
    const int c = l == 0 ? 1 : f;
    std::snprintf(name, sizeof(name), "conv%d.w0", l);
    params_.emplace_back(name, f, c);
    std::snprintf(name, sizeof(name), "conv%d.w1", l);
    params_.emplace_back(name, f, c);
    std::snprintf(name, sizeof(name), "conv%d.b", l);
    params_.emplace_back(name, f, 1);
  }
  params_.emplace_back("fc1.w", spec_.fc_size, spec_.flat_dim());
  params_.emplace_back("fc1.b", spec_.fc_size, 1);
  params_.emplace_back("fc2.w", spec_.fc_size, spec_.fc_size);
  params_.emplace_back("fc2.b", spec_.fc_size, 1);
  params_.emplace_back("out.w", spec_.class_count, spec_.fc_size);
  params_.emplace_back("out.b", spec_.class_count, 1);
}

template <typename S>
void Model<S>::InitHe(uint64_t seed) {
  Rng rng(MixSeed(seed, "init"));
  for (Tensor<S>& t : params_) {
    if (t.name.ends_with(".b")) {
      t.value.setZero();  // biases start at zero and consume no draws
      continue;
    }
    // Both kernel taps of a conv filter feed the same output, so conv fan-in
    // is 2 * in_channels; FC fan-in is the input width.
    const double fan_in =
        t.name.starts_with("conv") ? 2.0 * t.value.cols() : static_cast<double>(t.value.cols());
    const double sigma = std::sqrt(2.0 / fan_in);
    for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
        t.value(r, c) = static_cast<S>(sigma * rng.Gaussian());
      }
    }
  }
}

template <typename S>
std::vector<Tensor<S>*> Model<S>::Params() {
  std::vector<Tensor<S>*> out;
  out.reserve(params_.size());
  for (auto& t : params_) out.push_back(&t);
  return out;
}

template <typename S>
std::vector<const Tensor<S>*> Model<S>::Params() const {
  std::vector<const Tensor<S>*> out;
  out.reserve(params_.size());
  for (const auto& t : params_) out.push_back(&t);
  return out;
}

template <typename S>
std::vector<Tensor<S>> Model<S>::ZeroGrads() const {
  std::vector<Tensor<S>> grads;
  grads.reserve(params_.size());
  for (const auto& t : params_) {
    grads.emplace_back(t.name, static_cast<int>(t.value.rows()),
                       static_cast<int>(t.value.cols()));
  }
  return grads;
}

template <typename S>
DropoutMask<S> Model<S>::DrawDropout(int batch, Rng& rng) const {
  Require(batch >= 1, ErrorKind::kInvalidArgument, "dropout batch must be >= 1");
  const double rate = spec_.dropout_rate;
  const S scale = static_cast<S>(1.0 / (1.0 - rate));
  DropoutMask<S> mask;
  const int dims[3] = {spec_.flat_dim(), spec_.fc_size, spec_.fc_size};
  for (int site = 0; site < 3; ++site) {
    MatrixX<S> m(dims[site], batch);
    S* data = m.data();
    const size_t n = static_cast<size_t>(m.size());
    for (size_t i = 0; i < n; ++i) {
      data[i] = rng.Uniform() >= rate ? scale : S(0);
    }
    mask.sites.push_back(std::move(m));
  }
  return mask;
}

template <typename S>
typename Model<S>::Matrix Model<S>::Forward(const Matrix& input,
                                            const DropoutMask<S>* dropout,
                                            Cache* cache) const {
  const int m_rows = spec_.mic_count;
  const int k = spec_.band_count;
  const int f = spec_.conv_filters;
  const Eigen::Index b = input.cols();
  Require(input.rows() == spec_.feature_dim(), ErrorKind::kShapeMismatch,
          "model input must have mic_count*band_count rows");
  Require(b >= 1, ErrorKind::kInvalidArgument, "empty batch");
  if (dropout) {
    Require(dropout->sites.size() == 3, ErrorKind::kShapeMismatch, "need 3 dropout sites");
    const int dims[3] = {spec_.flat_dim(), spec_.fc_size, spec_.fc_size};
    for (int site = 0; site < 3; ++site) {
      Require(dropout->sites[site].rows() == dims[site] && dropout->sites[site].cols() == b,
              ErrorKind::kShapeMismatch, "dropout mask shape mismatch");
    }
  }

  // One [1, B*K] row per mic: sample b's bands occupy columns [b*K, (b+1)*K).
  std::vector<Matrix> rows(static_cast<size_t>(m_rows));
  for (int p = 0; p < m_rows; ++p) {
    rows[p].resize(1, b * k);
    for (Eigen::Index col = 0; col < b; ++col) {
      rows[p].block(0, col * k, 1, k) = input.block(p * k, col, k, 1).transpose();
    }
  }
  if (cache) cache->input_rows = rows;

  for (int l = 0; l < spec_.conv_layers(); ++l) {
    const Matrix& w0 = params_[3 * l].value;
    const Matrix& w1 = params_[3 * l + 1].value;
    const Matrix& bias = params_[3 * l + 2].value;
    const int out_rows = m_rows - l - 1;
    std::vector<Matrix> next(static_cast<size_t>(out_rows));
    for (int p = 0; p < out_rows; ++p) {
      next[p].noalias() = w0 * rows[p] + w1 * rows[p + 1];
      next[p].colwise() += bias.col(0);
      next[p] = next[p].cwiseMax(S(0));
    }
    if (cache) cache->conv_out.push_back(next);
    rows = std::move(next);
  }

  // [F, B*K] -> [F*K, B], flat index f*K + band.
  Matrix flat(f * k, b);
  for (Eigen::Index col = 0; col < b; ++col) {
    for (int ff = 0; ff < f; ++ff) {
      flat.block(ff * k, col, k, 1) = rows[0].block(ff, col * k, 1, k).transpose();
    }
  }
  if (dropout) flat = flat.cwiseProduct(dropout->sites[0]);
  if (cache) cache->flat = flat;

  const size_t fc_base = static_cast<size_t>(3 * spec_.conv_layers());
  Matrix a1 = (params_[fc_base].value * flat).colwise() + params_[fc_base + 1].value.col(0);
  a1 = a1.cwiseMax(S(0));
  if (dropout) a1 = a1.cwiseProduct(dropout->sites[1]);
  if (cache) cache->fc1 = a1;

  Matrix a2 = (params_[fc_base + 2].value * a1).colwise() + params_[fc_base + 3].value.col(0);
  a2 = a2.cwiseMax(S(0));
  if (dropout) a2 = a2.cwiseProduct(dropout->sites[2]);
  if (cache) cache->fc2 = a2;

  Matrix logits =
      (params_[fc_base + 4].value * a2).colwise() + params_[fc_base + 5].value.col(0);
  Matrix probs = logits.unaryExpr([](S z) {
    const S p = static_cast<S>(1.0 / (1.0 + std::exp(-static_cast<double>(z))));
    return Clamp01(p);
  });
  if (cache) cache->dropout = dropout;
  return probs;
}

template <typename S>
typename Model<S>::Matrix Model<S>::Infer(const Matrix& input) const {
  Matrix out(spec_.class_count, input.cols());
  for (Eigen::Index col = 0; col < input.cols(); ++col) {
    out.col(col) = Forward(input.col(col));
  }
  return out;
}

template <typename S>
void Model<S>::Backward(const Cache& cache, const Matrix& dlogits,
                        std::vector<Tensor<S>>* grads) const {
  Require(grads && grads->size() == params_.size(), ErrorKind::kShapeMismatch,
          "grads must come from ZeroGrads()");
  Require(dlogits.rows() == spec_.class_count && dlogits.cols() == cache.fc2.cols(),
          ErrorKind::kShapeMismatch, "dlogits shape mismatch");
  const int m_rows = spec_.mic_count;
  const int k = spec_.band_count;
  const int f = spec_.conv_filters;
  const Eigen::Index b = dlogits.cols();
  const size_t fc_base = static_cast<size_t>(3 * spec_.conv_layers());
  const DropoutMask<S>* dropout = cache.dropout;

  // Output layer.
  (*grads)[fc_base + 4].value.noalias() += dlogits * cache.fc2.transpose();
  (*grads)[fc_base + 5].value.col(0) += dlogits.rowwise().sum();
  Matrix da = params_[fc_base + 4].value.transpose() * dlogits;

  // Hidden FC layers. Cached activations are post-dropout; where the mask is
  // zero the incoming gradient dies with it, so the cached values still
  // carry the correct ReLU gate for every surviving unit.
  auto fc_backward = [&](size_t w_index, const Matrix& activation, const Matrix& input,
                         const MatrixX<S>* mask) {
    Matrix dz = std::move(da);
    if (mask) dz = dz.cwiseProduct(*mask);
    dz = dz.cwiseProduct(
        activation.unaryExpr([](S v) { return v > S(0) ? S(1) : S(0); }));
    (*grads)[w_index].value.noalias() += dz * input.transpose();
    (*grads)[w_index + 1].value.col(0) += dz.rowwise().sum();
    da = params_[w_index].value.transpose() * dz;
  };
  fc_backward(fc_base + 2, cache.fc2, cache.fc1, dropout ? &dropout->sites[2] : nullptr);
  fc_backward(fc_base, cache.fc1, cache.flat, dropout ? &dropout->sites[1] : nullptr);

  // Through the flatten (and its dropout site) back to the conv stack.
  if (dropout) da = da.cwiseProduct(dropout->sites[0]);
  std::vector<Matrix> dout(1);
  dout[0].resize(f, b * k);
  for (Eigen::Index col = 0; col < b; ++col) {
    for (int ff = 0; ff < f; ++ff) {
      dout[0].block(ff, col * k, 1, k) = da.block(ff * k, col, k, 1).transpose();
    }
  }

  for (int l = spec_.conv_layers() - 1; l >= 0; --l) {
    const int out_rows = m_rows - l - 1;
    const auto& in_rows = l == 0 ? cache.input_rows : cache.conv_out[static_cast<size_t>(l - 1)];
    const auto& out_act = cache.conv_out[static_cast<size_t>(l)];
    std::vector<Matrix> dz(static_cast<size_t>(out_rows));
    for (int p = 0; p < out_rows; ++p) {
      dz[p] = dout[p].cwiseProduct(
          out_act[p].unaryExpr([](S v) { return v > S(0) ? S(1) : S(0); }));
      (*grads)[3 * l].value.noalias() += dz[p] * in_rows[p].transpose();
      (*grads)[3 * l + 1].value.noalias() += dz[p] * in_rows[p + 1].transpose();
      (*grads)[3 * l + 2].value.col(0) += dz[p].rowwise().sum();
    }
    if (l == 0) break;
    const Matrix& w0 = params_[3 * l].value;
    const Matrix& w1 = params_[3 * l + 1].value;
    std::vector<Matrix> din(static_cast<size_t>(out_rows + 1));
    for (int p = 0; p <= out_rows; ++p) {
      din[p] = Matrix::Zero(w0.cols(), b * k);
      if (p < out_rows) din[p].noalias() += w0.transpose() * dz[p];
      if (p > 0) din[p].noalias() += w1.transpose() * dz[p - 1];
    }
    dout = std::move(din);
  }
}

template class Model<float>;
template class Model<double>;

template <typename S>
double Bce(const MatrixX<S>& probs, const MatrixX<S>& targets) {
  Require(probs.rows() == targets.rows() && probs.cols() == targets.cols(),
          ErrorKind::kShapeMismatch, "bce: probs/targets shape mismatch");
  Require(probs.cols() >= 1, ErrorKind::kInvalidArgument, "bce: empty batch");
  double total = 0.0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    for (Eigen::Index r = 0; r < probs.rows(); ++r) {
      const double p = static_cast<double>(probs(r, c));
      const double y = static_cast<double>(targets(r, c));
      total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
  }
  return total / static_cast<double>(probs.cols());
}

template <typename S>
MatrixX<S> BceGradWrtLogits(const MatrixX<S>& probs, const MatrixX<S>& targets) {
  Require(probs.rows() == targets.rows() && probs.cols() == targets.cols(),
          ErrorKind::kShapeMismatch, "bce: probs/targets shape mismatch");
  return (probs - targets) / static_cast<S>(probs.cols());
}

template double Bce<float>(const MatrixX<float>&, const MatrixX<float>&);
template double Bce<double>(const MatrixX<double>&, const MatrixX<double>&);
template MatrixX<float> BceGradWrtLogits<float>(const MatrixX<float>&, const MatrixX<float>&);
template MatrixX<double> BceGradWrtLogits<double>(const MatrixX<double>&,
                                                  const MatrixX<double>&);

template <typename S>
Adam<S>::Adam(Model<S>& model, double lr, double beta1, double beta2, double eps)
    : model_(&model), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  Require(lr > 0.0, ErrorKind::kInvalidArgument, "adam: lr must be positive");
  for (const Tensor<S>* t : model.Params()) {
    m_.push_back(MatrixX<double>::Zero(t->value.rows(), t->value.cols()));
    v_.push_back(MatrixX<double>::Zero(t->value.rows(), t->value.cols()));
  }
}

template <typename S>
void Adam<S>::Step(const std::vector<Tensor<S>>& grads) {
  auto params = model_->Params();
  Require(grads.size() == params.size(), ErrorKind::kShapeMismatch,
          "adam: grads/params mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    const MatrixX<double> g = grads[i].value.template cast<double>();
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    const MatrixX<double> update =
        (lr_ * (m_[i] / bc1).array() / ((v_[i] / bc2).array().sqrt() + eps_)).matrix();
    params[i]->value =
        (params[i]->value.template cast<double>() - update).template cast<S>();
  }
}

template class Adam<float>;
template class Adam<double>;

FrameDataset::FrameDataset(const DatasetManifest& manifest, const std::string& root_dir) {
  feature_dim_ = manifest.mic_count * manifest.band_count;
  class_count_ = manifest.class_count;
  for (const ShardInfo& info : manifest.shards) {
    const std::string path = (fs::path(root_dir) / info.path).string();
    Require(FileDigest(path) == info.digest, ErrorKind::kInvalidArgument,
            "shard digest mismatch (stale or corrupt dataset): " + path);
    ShardReader reader(path);
    const ShardHeader& h = reader.header();
    Require(h.mic_count == manifest.mic_count &&
                h.band_count == static_cast<uint32_t>(manifest.band_count) &&
                h.class_count == manifest.class_count,
            ErrorKind::kShapeMismatch, "shard header disagrees with manifest: " + path);
    records_.reserve(records_.size() + h.record_count);
    LabeledFrame rec;
    while (reader.Next(&rec)) records_.push_back(rec);
  }
  Require(!records_.empty(), ErrorKind::kInvalidArgument, "dataset has no records");
}

void FrameDataset::Gather(std::span<const size_t> indices, MatrixX<float>* x,
                          MatrixX<float>* y) const {
  Require(!indices.empty(), ErrorKind::kInvalidArgument, "empty batch");
  x->resize(feature_dim_, static_cast<Eigen::Index>(indices.size()));
  y->setZero(class_count_, static_cast<Eigen::Index>(indices.size()));
  for (size_t j = 0; j < indices.size(); ++j) {
    Require(indices[j] < records_.size(), ErrorKind::kInvalidArgument,
            "batch index out of range");
    const LabeledFrame& rec = records_[indices[j]];
    x->col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXf>(rec.phases.data(), feature_dim_);
    for (int c = 0; c < class_count_; ++c) {
      if (rec.label >> c & 1) (*y)(c, static_cast<Eigen::Index>(j)) = 1.0f;
    }
  }
}

std::vector<EpochStats> TrainModel(Model<float>& model, const FrameDataset& data,
                                   const TrainConfig& config) {
  Require(config.epochs >= 1, ErrorKind::kInvalidArgument, "epochs must be >= 1");
  Require(config.batch >= 1, ErrorKind::kInvalidArgument, "batch must be >= 1");
  Require(data.feature_dim() == model.spec().feature_dim() &&
              data.class_count() == model.spec().class_count,
          ErrorKind::kShapeMismatch, "dataset shape disagrees with the model");

  Adam<float> optimizer(model, config.lr);
  std::ofstream log;
  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    log.open((fs::path(config.out_dir) / "loss_log.csv").string(),
             std::ios::binary | std::ios::trunc);
    Require(log.good(), ErrorKind::kIo, "cannot write loss log in " + config.out_dir);
    log << "epoch,mean_loss,wall_seconds\n";
  }

  std::vector<size_t> indices(data.size());
  std::iota(indices.begin(), indices.end(), size_t{0});
  std::vector<EpochStats> stats;
  MatrixX<float> x, y;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng shuffle_rng(MixSeed(config.seed, "shuffle", static_cast<uint64_t>(epoch)));
    FisherYates(indices, shuffle_rng);
    Rng dropout_rng(MixSeed(config.seed, "dropout", static_cast<uint64_t>(epoch)));

    double loss_sum = 0.0;
    for (size_t start = 0; start < indices.size(); start += static_cast<size_t>(config.batch)) {
      const size_t n = std::min(static_cast<size_t>(config.batch), indices.size() - start);
      data.Gather({indices.data() + start, n}, &x, &y);
      const auto mask = model.DrawDropout(static_cast<int>(n), dropout_rng);
      Model<float>::Cache cache;
      const auto probs = model.Forward(x, &mask, &cache);
      loss_sum += Bce(probs, y) * static_cast<double>(n);
      auto grads = model.ZeroGrads();
      model.Backward(cache, BceGradWrtLogits(probs, y), &grads);
      optimizer.Step(grads);
    }

    EpochStats s;
    s.epoch = epoch;
    s.mean_loss = loss_sum / static_cast<double>(data.size());
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    stats.push_back(s);

    if (!config.out_dir.empty()) {
      char line[96];
      std::snprintf(line, sizeof(line), "%d,%.17g,%.3f\n", s.epoch, s.mean_loss,
                    s.wall_seconds);
      log << line;
      log.flush();
      char file_name[48];
      std::snprintf(file_name, sizeof(file_name), "model_epoch%d.doam", epoch);
      SaveCheckpoint(model, (fs::path(config.out_dir) / file_name).string());
    }
  }
  if (!config.out_dir.empty()) {
    SaveCheckpoint(model, (fs::path(config.out_dir) / "model.doam").string());
    Require(log.good(), ErrorKind::kIo, "loss log write failed");
  }
  return stats;
}

void SaveCheckpoint(const Model<float>& model, const std::string& path) {
  const ModelSpec& spec = model.spec();
  json header;
  header["scalar"] = "float32";
  header["spec"] = {{"mic_count", spec.mic_count},     {"band_count", spec.band_count},
                    {"conv_filters", spec.conv_filters}, {"fc_size", spec.fc_size},
                    {"class_count", spec.class_count},   {"dropout_rate", spec.dropout_rate}};
  json tensors = json::array();
  for (const Tensor<float>* t : model.Params()) {
    tensors.push_back({{"name", t->name},
                       {"shape", {t->value.rows(), t->value.cols()}}});
  }
  header["tensors"] = tensors;
  const std::string text = header.dump();
  Require(text.size() <= std::numeric_limits<uint32_t>::max(), ErrorKind::kInvalidArgument,
          "checkpoint header too large");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot create checkpoint " + path);
  out.write(kCheckpointMagic, 4);
  const uint16_t version = kCheckpointVersion;
  const uint32_t len = static_cast<uint32_t>(text.size());
  out.write(reinterpret_cast<const char*>(&version), 2);
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  // Tensor payloads in declaration order, column-major float32.
  for (const Tensor<float>* t : model.Params()) {
    out.write(reinterpret_cast<const char*>(t->value.data()),
              static_cast<std::streamsize>(sizeof(float) * t->value.size()));
  }
  out.close();
  Require(out.good(), ErrorKind::kIo, "checkpoint write failed for " + path);
}

Model<float> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorKind::kIo, "cannot open checkpoint " + path);

  char magic[4];
  in.read(magic, 4);
  Require(in.gcount() == 4 && std::memcmp(magic, kCheckpointMagic, 4) == 0,
          ErrorKind::kBadMagic, path + ": bad checkpoint magic");
  uint16_t version = 0;
  uint32_t len = 0;
  char fixed[6];
  in.read(fixed, sizeof(fixed));
  Require(in.gcount() == sizeof(fixed), ErrorKind::kTruncatedFile,
          path + ": truncated checkpoint header");
  std::memcpy(&version, fixed + 0, 2);
  std::memcpy(&len, fixed + 2, 4);
  Require(version == kCheckpointVersion, ErrorKind::kBadVersion,
          path + ": checkpoint version " + std::to_string(version) + ", expected " +
              std::to_string(kCheckpointVersion));
  Require(len > 0 && len <= (uint32_t{1} << 24), ErrorKind::kInvalidArgument,
          path + ": implausible checkpoint header length");

  std::string text(len, '\0');
  in.read(text.data(), len);
  Require(in.gcount() == static_cast<std::streamsize>(len), ErrorKind::kTruncatedFile,
          path + ": truncated checkpoint header");

  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument, path + ": malformed checkpoint header: " + e.what());
  }

  try {
    Require(header.at("scalar").get<std::string>() == "float32", ErrorKind::kInvalidArgument,
            path + ": unsupported scalar type");
    const json& s = header.at("spec");
    ModelSpec spec;
    spec.mic_count = s.at("mic_count").get<int>();
    spec.band_count = s.at("band_count").get<int>();
    spec.conv_filters = s.at("conv_filters").get<int>();
    spec.fc_size = s.at("fc_size").get<int>();
    spec.class_count = s.at("class_count").get<int>();
    spec.dropout_rate = s.at("dropout_rate").get<double>();
    Model<float> model(spec);

    auto params = model.Params();
    const json& tensors = header.at("tensors");
    Require(tensors.is_array() && tensors.size() == params.size(), ErrorKind::kShapeMismatch,
            path + ": checkpoint lists " + std::to_string(tensors.size()) + " tensors, model has " +
                std::to_string(params.size()));
    for (size_t i = 0; i < params.size(); ++i) {
      Require(tensors[i].at("name").get<std::string>() == params[i]->name,
              ErrorKind::kShapeMismatch, path + ": unexpected tensor " +
                  tensors[i].at("name").get<std::string>() + ", wanted " + params[i]->name);
      const auto shape = tensors[i].at("shape").get<std::vector<Eigen::Index>>();
      Require(shape.size() == 2 && shape[0] == params[i]->value.rows() &&
                  shape[1] == params[i]->value.cols(),
              ErrorKind::kShapeMismatch, path + ": tensor shape mismatch for " + params[i]->name);
      in.read(reinterpret_cast<char*>(params[i]->value.data()),
              static_cast<std::streamsize>(sizeof(float) * params[i]->value.size()));
      Require(in.gcount() == static_cast<std::streamsize>(sizeof(float) * params[i]->value.size()),
              ErrorKind::kTruncatedFile, path + ": truncated tensor data for " + params[i]->name);
    }
    Require(in.peek() == EOF, ErrorKind::kCountMismatch,
            path + ": trailing bytes after tensor data");
    return model;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument, path + ": malformed checkpoint header: " + e.what());
  }
}

GradcheckReport RunGradcheck(uint64_t seed, double h, double tol, int probes_per_tensor) {
  Require(h > 0.0 && tol > 0.0 && probes_per_tensor >= 1, ErrorKind::kInvalidArgument,
          "bad gradcheck parameters");
  ModelSpec toy;
  toy.mic_count = 4;
  toy.band_count = 8;
  toy.conv_filters = 3;
  toy.fc_size = 16;
  toy.class_count = 5;
  toy.dropout_rate = 0.5;

  Model<double> model(toy);
  model.InitHe(MixSeed(seed, "gradcheck-model"));
  // He leaves every bias at zero, so units whose ReLU-zeroed input patch is
  // fully dead sit exactly on their own kink, where finite differences see a
  // one-sided slope that no subgradient matches.  Jitter all parameters to
  // probe at a generic point instead.
  Rng jitter_rng(MixSeed(seed, "gradcheck-jitter"));
  for (auto* t : model.Params()) {
    for (Eigen::Index i = 0; i < t->value.size(); ++i) {
      t->value.data()[i] += jitter_rng.Uniform(-0.25, 0.25);
    }
  }

  const int batch = 3;
  Rng data_rng(MixSeed(seed, "gradcheck-data"));
  MatrixX<double> x(toy.feature_dim(), batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x.data()[i] = data_rng.Uniform(-3.141592653589793, 3.141592653589793);
  }
  MatrixX<double> y = MatrixX<double>::Zero(toy.class_count, batch);
  for (int col = 0; col < batch; ++col) {
    const int c1 = static_cast<int>(data_rng.UniformInt(static_cast<uint64_t>(toy.class_count)));
    int c2 = static_cast<int>(data_rng.UniformInt(static_cast<uint64_t>(toy.class_count) - 1));
    if (c2 >= c1) ++c2;
    y(c1, col) = 1.0;
    y(c2, col) = 1.0;
  }
  // One frozen mask shared by the analytic pass and every FD evaluation, so
  // both differentiate the same deterministic function.
  Rng mask_rng(MixSeed(seed, "gradcheck-dropout"));
  const DropoutMask<double> mask = model.DrawDropout(batch, mask_rng);

  Model<double>::Cache cache;
  const MatrixX<double> probs = model.Forward(x, &mask, &cache);
  auto grads = model.ZeroGrads();
  model.Backward(cache, BceGradWrtLogits(probs, y), &grads);

  const auto loss_now = [&]() { return Bce(model.Forward(x, &mask), y); };

  GradcheckReport report;
  auto params = model.Params();
  for (size_t ti = 0; ti < params.size(); ++ti) {
    double* data = params[ti]->value.data();
    const Eigen::Index size = params[ti]->value.size();
    const Eigen::Index step =
        std::max<Eigen::Index>(1, size / std::min<Eigen::Index>(size, probes_per_tensor));
    for (Eigen::Index idx = 0; idx < size; idx += step) {
      const double saved = data[idx];
      data[idx] = saved + h;
      const double up = loss_now();
      data[idx] = saved - h;
      const double down = loss_now();
      data[idx] = saved + 0.5 * h;
      const double up2 = loss_now();
      data[idx] = saved - 0.5 * h;
      const double down2 = loss_now();
      data[idx] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double fd2 = (up2 - down2) / h;
      const double an = grads[ti].value.data()[idx];
      const double scale = std::max(std::abs(fd2) + std::abs(an), 1e-8);
      // A ReLU kink inside the probe interval makes central differences
      // meaningless; it shows up as disagreement between the h and h/2
      // estimates, so such probes are skipped.  A wrong analytic gradient
      // cannot hide here: both estimates then agree with each other and
      // disagree with it.
      if (std::abs(fd - fd2) > 0.25 * tol * scale) {
        ++report.skipped;
        continue;
      }
      const double rel = std::abs(fd2 - an) / scale;
      report.max_rel_err = std::max(report.max_rel_err, rel);
      ++report.checked;
    }
  }
  report.passed = report.max_rel_err <= tol;
  return report;
}

}  // namespace doalab
