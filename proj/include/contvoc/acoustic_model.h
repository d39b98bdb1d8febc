// Copyright 2026 The contvoc Authors
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


// Toy-scale bidirectional recurrent regressors from input feature sequences to
// vocoder parameter frames. Sequences are stored column-per-frame: an input is
// input_dim x T, an output output_dim x T.
//
// Every cell kind runs one recurrence forward in time and an independent one
// backward in time, both from zero initial state, and combines them with
//   y_t = W_fy h_fwd_t + W_by h_bwd_t + b_y.
//
// Gate rows are stacked in w_x, w_h and b:
//   vanilla  [a]           h = tanh(a)
//   lstm     [i; f; g; o]  c = f*c' + i*g, h = o*tanh(c)
//   gru      [r; u; n]     n = tanh(W_xn x + b_n + r*(W_hn h')), h = (1-u)*n + u*h'

#ifndef CONTVOC_ACOUSTIC_MODEL_H_
#define CONTVOC_ACOUSTIC_MODEL_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace contvoc {

enum class CellKind { kVanillaBidirectional, kLstm, kGru };

// "vanilla-bidirectional", "lstm", "gru".
std::string_view CellKindName(CellKind kind);
CellKind ParseCellKind(std::string_view name);  // throws kInvalidArgument
int GateCount(CellKind kind);                   // 1, 4, 3

struct DirectionWeights {
  Eigen::MatrixXd w_x;  // (gates * hidden) x input
  Eigen::MatrixXd w_h;  // (gates * hidden) x hidden
  Eigen::MatrixXd b;    // (gates * hidden) x 1
};

inline constexpr std::size_t kTensorCount = 9;

struct SequenceModelParams {
  CellKind cell_kind = CellKind::kVanillaBidirectional;
  int input_dim = 0;
  int hidden_dim = 0;
  int output_dim = 0;
  std::uint64_t seed = 0;
  DirectionWeights forward;
  DirectionWeights backward;
  Eigen::MatrixXd w_fy;  // output x hidden
  Eigen::MatrixXd w_by;  // output x hidden
  Eigen::MatrixXd b_y;   // output x 1

  // All tensors zero.
  static SequenceModelParams Zeros(CellKind kind, int input_dim, int hidden_dim,
                                   int output_dim);
  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] where fan_in is input_dim for
  // w_x, hidden_dim for w_h and b, and 2 * hidden_dim for the output layer.
  static SequenceModelParams Random(CellKind kind, int input_dim, int hidden_dim,
                                    int output_dim, std::uint64_t seed);
  SequenceModelParams ZerosLike() const;

  // Fixed order: fwd.w_x fwd.w_h fwd.b bwd.w_x bwd.w_h bwd.b out.w_f out.w_b out.b.
  static const std::array<std::string_view, kTensorCount>& TensorNames();
  std::array<Eigen::MatrixXd*, kTensorCount> Tensors();
  std::array<const Eigen::MatrixXd*, kTensorCount> Tensors() const;
  std::size_t ParameterCount() const;

  // Shapes consistent with the dimensions (kShapeMismatch) and all values
  // finite (kNonFinite).
  void Validate() const;
};

struct ForwardResult {
  Eigen::MatrixXd y;           // output x T
  Eigen::MatrixXd h_forward;   // hidden x T
  Eigen::MatrixXd h_backward;  // hidden x T, column t is the state at time t
};

// Errors: kInvalidArgument (empty sequence), kShapeMismatch.
ForwardResult Forward(const SequenceModelParams& params, const Eigen::MatrixXd& x);

struct TrainingBatch {
  std::vector<Eigen::MatrixXd> inputs;   // input_dim x T_i
  std::vector<Eigen::MatrixXd> targets;  // output_dim x T_i

  std::size_t size() const { return inputs.size(); }
  // Equal counts and per-sample lengths; kShapeMismatch.
  void Validate() const;
};

// (1/n) * sum of squared differences over all n scalar entries of all
// sequences. Errors: kShapeMismatch, kInvalidArgument (no entries).
double MseLoss(const std::vector<Eigen::MatrixXd>& outputs,
               const std::vector<Eigen::MatrixXd>& targets);

double BatchLoss(const SequenceModelParams& params, const TrainingBatch& batch);

// Exact gradient of BatchLoss by backpropagation through time, returned in
// parameter shape. `loss`, when given, receives the batch loss.
// Errors: kNonFinite when an intermediate value is not finite.
SequenceModelParams Gradients(const SequenceModelParams& params,
                              const TrainingBatch& batch, double* loss = nullptr);

struct TrainOptions {
  int epochs = 2000;
  double learning_rate = 0.01;
  std::uint64_t seed = 42;  // order of minibatches within an epoch
  int batch_size = 1;       // sequences per update; 0 means the whole dataset
};

struct TrainResult {
  SequenceModelParams params;
  std::vector<double> train_loss;       // dataset loss after each epoch
  std::vector<double> validation_loss;  // empty without a validation set
};

// Plain gradient descent. Errors: kInvalidArgument (empty dataset, epochs < 0,
// negative rate), kDiverged when the loss stops being finite.
TrainResult Train(const SequenceModelParams& initial, const TrainingBatch& train,
                  const TrainOptions& options,
                  const TrainingBatch* validation = nullptr);

// Synthetic text-to-parameter task. Inputs hold a one-hot phone class per frame
// (input_dim - 2 classes) followed by the relative position t/(T-1) and its
// complement. Targets are smooth per-class trajectories in [-1, 1] resembling
// normalized contF0, MVF and envelope tracks. The held-out split shares the
// class trajectories but uses different phone sequences.
struct ToyDataOptions {
  int samples = 4;
  int validation_samples = 0;
  int frames = 20;
  int input_dim = 8;
  int output_dim = 4;
  std::uint64_t seed = 42;
};
struct ToyDataset {
  TrainingBatch train;
  TrainingBatch validation;
};
ToyDataset MakeToyDataset(const ToyDataOptions& options);

// Text file: "contvoc-model 1", then cell_kind, dims, seed, then for each
// tensor "tensor <name> <rows> <cols>" followed by one line per row.
// Values round-trip exactly. Errors: kIo, kFileNotFound, kUnsupportedFormat,
// kShapeMismatch.
void SaveModel(const SequenceModelParams& params, const std::string& path);
SequenceModelParams LoadModel(const std::string& path);
std::string SerializeModel(const SequenceModelParams& params);
SequenceModelParams ParseModel(std::string_view text);

}  // namespace contvoc

#endif  // CONTVOC_ACOUSTIC_MODEL_H_
