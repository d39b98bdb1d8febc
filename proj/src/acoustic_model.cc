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


#include "contvoc/acoustic_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "contvoc/error.h"
#include "text_format.h"

namespace contvoc {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::string_view kModelMagic = "contvoc-model";
constexpr int kModelVersion = 1;

VectorXd Sigmoid(const VectorXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

// States and gate activations of one direction, columns in processing order.
struct DirectionCache {
  MatrixXd h;      // hidden x T
  MatrixXd gates;  // lstm [i f g o], gru [r u n]; post-activation
  MatrixXd c;      // lstm cell state
  MatrixXd hn;     // gru W_hn h', before the reset gate
};

DirectionCache RunDirection(CellKind kind, const DirectionWeights& w, const MatrixXd& x) {
  const Eigen::Index hidden = w.w_h.cols();
  const Eigen::Index steps = x.cols();
  DirectionCache cache;
  cache.h.resize(hidden, steps);
  VectorXd h_prev = VectorXd::Zero(hidden);
  switch (kind) {
    case CellKind::kVanillaBidirectional:
      for (Eigen::Index t = 0; t < steps; ++t) {
        const VectorXd a = w.w_x * x.col(t) + w.w_h * h_prev + w.b.col(0);
        cache.h.col(t) = a.array().tanh().matrix();
        h_prev = cache.h.col(t);
      }
      break;
    case CellKind::kLstm: {
      cache.gates.resize(4 * hidden, steps);
      cache.c.resize(hidden, steps);
      VectorXd c_prev = VectorXd::Zero(hidden);
      for (Eigen::Index t = 0; t < steps; ++t) {
        const VectorXd z = w.w_x * x.col(t) + w.w_h * h_prev + w.b.col(0);
        const VectorXd i = Sigmoid(z.segment(0, hidden));
        const VectorXd f = Sigmoid(z.segment(hidden, hidden));
        const VectorXd g = z.segment(2 * hidden, hidden).array().tanh().matrix();
        const VectorXd o = Sigmoid(z.segment(3 * hidden, hidden));
        cache.gates.col(t) << i, f, g, o;
        const VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
        cache.c.col(t) = c;
        cache.h.col(t) = o.cwiseProduct(c.array().tanh().matrix());
        h_prev = cache.h.col(t);
        c_prev = c;
      }
      break;
    }
    case CellKind::kGru: {
      cache.gates.resize(3 * hidden, steps);
      cache.hn.resize(hidden, steps);
      for (Eigen::Index t = 0; t < steps; ++t) {
        const VectorXd zx = w.w_x * x.col(t) + w.b.col(0);
        const VectorXd zh = w.w_h * h_prev;
        const VectorXd r = Sigmoid(zx.segment(0, hidden) + zh.segment(0, hidden));
        const VectorXd u = Sigmoid(zx.segment(hidden, hidden) + zh.segment(hidden, hidden));
        const VectorXd hn = zh.segment(2 * hidden, hidden);
        const VectorXd n =
            (zx.segment(2 * hidden, hidden) + r.cwiseProduct(hn)).array().tanh().matrix();
        cache.gates.col(t) << r, u, n;
        cache.hn.col(t) = hn;
        cache.h.col(t) = (VectorXd::Ones(hidden) - u).cwiseProduct(n) + u.cwiseProduct(h_prev);
        h_prev = cache.h.col(t);
      }
      break;
    }
  }
  return cache;
}

// Accumulates parameter gradients of one direction given dLoss/dh for every
// step (processing order).
void BackpropDirection(CellKind kind, const DirectionWeights& w, const MatrixXd& x,
                       const DirectionCache& cache, const MatrixXd& dh_out,
                       DirectionWeights& grad) {
  const Eigen::Index hidden = w.w_h.cols();
  const Eigen::Index steps = x.cols();
  VectorXd dh_next = VectorXd::Zero(hidden);
  VectorXd dc_next = VectorXd::Zero(hidden);
  const VectorXd zeros = VectorXd::Zero(hidden);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const VectorXd h_prev = t > 0 ? VectorXd(cache.h.col(t - 1)) : zeros;
    const VectorXd dh = dh_out.col(t) + dh_next;
    switch (kind) {
      case CellKind::kVanillaBidirectional: {
        const VectorXd h = cache.h.col(t);
        const VectorXd da = dh.cwiseProduct((1.0 - h.array().square()).matrix());
        grad.w_x.noalias() += da * x.col(t).transpose();
        grad.w_h.noalias() += da * h_prev.transpose();
        grad.b.col(0) += da;
        dh_next = w.w_h.transpose() * da;
        break;
      }
      case CellKind::kLstm: {
        const VectorXd i = cache.gates.col(t).segment(0, hidden);
        const VectorXd f = cache.gates.col(t).segment(hidden, hidden);
        const VectorXd g = cache.gates.col(t).segment(2 * hidden, hidden);
        const VectorXd o = cache.gates.col(t).segment(3 * hidden, hidden);
        const VectorXd c_prev = t > 0 ? VectorXd(cache.c.col(t - 1)) : zeros;
        const VectorXd tc = cache.c.col(t).array().tanh().matrix();
        const VectorXd dc =
            dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix()) + dc_next;
        VectorXd dz(4 * hidden);
        dz.segment(0, hidden) = dc.cwiseProduct(g).cwiseProduct(i).cwiseProduct(
            (1.0 - i.array()).matrix());
        dz.segment(hidden, hidden) = dc.cwiseProduct(c_prev).cwiseProduct(f).cwiseProduct(
            (1.0 - f.array()).matrix());
        dz.segment(2 * hidden, hidden) =
            dc.cwiseProduct(i).cwiseProduct((1.0 - g.array().square()).matrix());
        dz.segment(3 * hidden, hidden) = dh.cwiseProduct(tc).cwiseProduct(o).cwiseProduct(
            (1.0 - o.array()).matrix());
        grad.w_x.noalias() += dz * x.col(t).transpose();
        grad.w_h.noalias() += dz * h_prev.transpose();
        grad.b.col(0) += dz;
        dh_next = w.w_h.transpose() * dz;
        dc_next = dc.cwiseProduct(f);
        break;
      }
      case CellKind::kGru: {
        const VectorXd r = cache.gates.col(t).segment(0, hidden);
        const VectorXd u = cache.gates.col(t).segment(hidden, hidden);
        const VectorXd n = cache.gates.col(t).segment(2 * hidden, hidden);
        const VectorXd hn = cache.hn.col(t);
        const VectorXd dn = dh.cwiseProduct((1.0 - u.array()).matrix());
        const VectorXd du = dh.cwiseProduct(h_prev - n);
        const VectorXd da_n = dn.cwiseProduct((1.0 - n.array().square()).matrix());
        const VectorXd da_r =
            da_n.cwiseProduct(hn).cwiseProduct(r).cwiseProduct((1.0 - r.array()).matrix());
        const VectorXd da_u = du.cwiseProduct(u).cwiseProduct((1.0 - u.array()).matrix());
        VectorXd dzx(3 * hidden), dzh(3 * hidden);
        dzx << da_r, da_u, da_n;
        dzh << da_r, da_u, da_n.cwiseProduct(r);
        grad.w_x.noalias() += dzx * x.col(t).transpose();
        grad.b.col(0) += dzx;
        grad.w_h.noalias() += dzh * h_prev.transpose();
        dh_next = w.w_h.transpose() * dzh + dh.cwiseProduct(u);
        break;
      }
    }
  }
}

void CheckFinite(const MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite, std::string("non-finite value in ") + what);
  }
}

void CheckInput(const SequenceModelParams& params, const MatrixXd& x) {
  if (x.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "input sequence is empty");
  if (x.rows() != params.input_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "input has " + std::to_string(x.rows()) + " features, model expects " +
                    std::to_string(params.input_dim));
  }
}

DirectionWeights ZeroDirection(int gates, int input_dim, int hidden_dim) {
  return {MatrixXd::Zero(gates * hidden_dim, input_dim),
          MatrixXd::Zero(gates * hidden_dim, hidden_dim),
          MatrixXd::Zero(gates * hidden_dim, 1)};
}

}  // namespace

std::string_view CellKindName(CellKind kind) {
  switch (kind) {
    case CellKind::kVanillaBidirectional: return "vanilla-bidirectional";
    case CellKind::kLstm: return "lstm";
    case CellKind::kGru: return "gru";
  }
  return "vanilla-bidirectional";
}

CellKind ParseCellKind(std::string_view name) {
  if (name == "vanilla-bidirectional" || name == "vanilla") return CellKind::kVanillaBidirectional;
  if (name == "lstm") return CellKind::kLstm;
  if (name == "gru") return CellKind::kGru;
  throw Error(ErrorCode::kInvalidArgument, "unknown cell kind '" + std::string(name) + "'");
}

int GateCount(CellKind kind) {
  switch (kind) {
    case CellKind::kVanillaBidirectional: return 1;
    case CellKind::kLstm: return 4;
    case CellKind::kGru: return 3;
  }
  return 1;
}

SequenceModelParams SequenceModelParams::Zeros(CellKind kind, int input_dim, int hidden_dim,
                                               int output_dim) {
  if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "model dimensions must be positive");
  }
  SequenceModelParams p;
  p.cell_kind = kind;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  const int gates = GateCount(kind);
  p.forward = ZeroDirection(gates, input_dim, hidden_dim);
  p.backward = ZeroDirection(gates, input_dim, hidden_dim);
  p.w_fy = MatrixXd::Zero(output_dim, hidden_dim);
  p.w_by = MatrixXd::Zero(output_dim, hidden_dim);
  p.b_y = MatrixXd::Zero(output_dim, 1);
  return p;
}

SequenceModelParams SequenceModelParams::Random(CellKind kind, int input_dim, int hidden_dim,
                                                int output_dim, std::uint64_t seed) {
  SequenceModelParams p = Zeros(kind, input_dim, hidden_dim, output_dim);
  p.seed = seed;
  std::mt19937_64 rng(seed);
  auto fill = [&rng](MatrixXd& m, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = dist(rng);
    }
  };
  for (DirectionWeights* d : {&p.forward, &p.backward}) {
    fill(d->w_x, input_dim);
    fill(d->w_h, hidden_dim);
    fill(d->b, hidden_dim);
  }
  fill(p.w_fy, 2 * hidden_dim);
  fill(p.w_by, 2 * hidden_dim);
  fill(p.b_y, 2 * hidden_dim);
  return p;
}

SequenceModelParams SequenceModelParams::ZerosLike() const {
  SequenceModelParams p = Zeros(cell_kind, input_dim, hidden_dim, output_dim);
  p.seed = seed;
  return p;
}

const std::array<std::string_view, kTensorCount>& SequenceModelParams::TensorNames() {
  static const std::array<std::string_view, kTensorCount> names = {
      "fwd.w_x", "fwd.w_h", "fwd.b", "bwd.w_x", "bwd.w_h", "bwd.b", "out.w_f", "out.w_b", "out.b"};
  return names;
}

std::array<MatrixXd*, kTensorCount> SequenceModelParams::Tensors() {
  return {&forward.w_x, &forward.w_h, &forward.b, &backward.w_x, &backward.w_h,
          &backward.b,  &w_fy,        &w_by,      &b_y};
}

std::array<const MatrixXd*, kTensorCount> SequenceModelParams::Tensors() const {
  return {&forward.w_x, &forward.w_h, &forward.b, &backward.w_x, &backward.w_h,
          &backward.b,  &w_fy,        &w_by,      &b_y};
}

std::size_t SequenceModelParams::ParameterCount() const {
  std::size_t count = 0;
  for (const MatrixXd* t : Tensors()) count += static_cast<std::size_t>(t->size());
  return count;
}

void SequenceModelParams::Validate() const {
  if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "model dimensions must be positive");
  }
  const SequenceModelParams shape = Zeros(cell_kind, input_dim, hidden_dim, output_dim);
  const auto mine = Tensors();
  const auto expected = shape.Tensors();
  for (std::size_t i = 0; i < kTensorCount; ++i) {
    if (mine[i]->rows() != expected[i]->rows() || mine[i]->cols() != expected[i]->cols()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor " + std::string(TensorNames()[i]) + " has the wrong shape");
    }
    if (!mine[i]->allFinite()) {
      throw Error(ErrorCode::kNonFinite,
                  "tensor " + std::string(TensorNames()[i]) + " is not finite");
    }
  }
}

ForwardResult Forward(const SequenceModelParams& params, const MatrixXd& x) {
  CheckInput(params, x);
  const DirectionCache fwd = RunDirection(params.cell_kind, params.forward, x);
  const MatrixXd x_reversed = x.rowwise().reverse();
  const DirectionCache bwd = RunDirection(params.cell_kind, params.backward, x_reversed);
  ForwardResult out;
  out.h_forward = fwd.h;
  out.h_backward = bwd.h.rowwise().reverse();
  out.y = params.w_fy * out.h_forward + params.w_by * out.h_backward;
  out.y.colwise() += params.b_y.col(0);
  return out;
}

void TrainingBatch::Validate() const {
  if (inputs.size() != targets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "input and target sample counts differ");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].cols() != targets[i].cols()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "sample " + std::to_string(i) + ": input and target lengths differ");
    }
  }
}

double MseLoss(const std::vector<MatrixXd>& outputs, const std::vector<MatrixXd>& targets) {
  if (outputs.size() != targets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "output and target counts differ");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].rows() != targets[i].rows() || outputs[i].cols() != targets[i].cols()) {
      throw Error(ErrorCode::kShapeMismatch, "output and target shapes differ");
    }
    sum += (outputs[i] - targets[i]).squaredNorm();
    count += static_cast<std::size_t>(outputs[i].size());
  }
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "loss over zero entries");
  return sum / static_cast<double>(count);
}

double BatchLoss(const SequenceModelParams& params, const TrainingBatch& batch) {
  batch.Validate();
  std::vector<MatrixXd> outputs;
  outputs.reserve(batch.size());
  for (const MatrixXd& x : batch.inputs) outputs.push_back(Forward(params, x).y);
  return MseLoss(outputs, batch.targets);
}

SequenceModelParams Gradients(const SequenceModelParams& params, const TrainingBatch& batch,
                              double* loss) {
  batch.Validate();
  if (batch.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  std::size_t entries = 0;
  for (const MatrixXd& t : batch.targets) {
    if (t.rows() != params.output_dim) {
      throw Error(ErrorCode::kShapeMismatch, "target dimension does not match the model");
    }
    entries += static_cast<std::size_t>(t.size());
  }
  if (entries == 0) throw Error(ErrorCode::kInvalidArgument, "loss over zero entries");
  const double scale = 2.0 / static_cast<double>(entries);

  SequenceModelParams grad = params.ZerosLike();
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const MatrixXd& x = batch.inputs[s];
    CheckInput(params, x);
    const DirectionCache fwd = RunDirection(params.cell_kind, params.forward, x);
    const MatrixXd x_reversed = x.rowwise().reverse();
    const DirectionCache bwd = RunDirection(params.cell_kind, params.backward, x_reversed);
    const MatrixXd h_bwd = bwd.h.rowwise().reverse();
    MatrixXd y = params.w_fy * fwd.h + params.w_by * h_bwd;
    y.colwise() += params.b_y.col(0);
    CheckFinite(y, "forward pass");

    const MatrixXd diff = y - batch.targets[s];
    sum_sq += diff.squaredNorm();
    const MatrixXd dy = scale * diff;
    grad.w_fy.noalias() += dy * fwd.h.transpose();
    grad.w_by.noalias() += dy * h_bwd.transpose();
    grad.b_y.col(0) += dy.rowwise().sum();
    const MatrixXd dh_fwd = params.w_fy.transpose() * dy;
    const MatrixXd dh_bwd = (params.w_by.transpose() * dy).rowwise().reverse();
    BackpropDirection(params.cell_kind, params.forward, x, fwd, dh_fwd, grad.forward);
    BackpropDirection(params.cell_kind, params.backward, x_reversed, bwd, dh_bwd, grad.backward);
  }
  for (std::size_t i = 0; i < kTensorCount; ++i) {
    CheckFinite(*grad.Tensors()[i], "gradient");
  }
  if (loss != nullptr) *loss = sum_sq / static_cast<double>(entries);
  return grad;
}

TrainResult Train(const SequenceModelParams& initial, const TrainingBatch& train,
                  const TrainOptions& options, const TrainingBatch* validation) {
  initial.Validate();
  train.Validate();
  if (train.size() == 0) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  if (options.epochs < 0) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  if (!(options.learning_rate >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  }
  if (options.batch_size < 0) throw Error(ErrorCode::kInvalidArgument, "batch size must be >= 0");

  TrainResult result;
  result.params = initial;
  const std::size_t n = train.size();
  const std::size_t batch_size =
      options.batch_size == 0 ? n : std::min<std::size_t>(n, options.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (batch_size < n) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += batch_size) {
      TrainingBatch mini;
      for (std::size_t i = start; i < std::min(n, start + batch_size); ++i) {
        mini.inputs.push_back(train.inputs[order[i]]);
        mini.targets.push_back(train.targets[order[i]]);
      }
      SequenceModelParams grad;
      try {
        grad = Gradients(result.params, mini);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNonFinite) throw;
        throw Error(ErrorCode::kDiverged,
                    "training diverged in epoch " + std::to_string(epoch + 1) + ": " + e.what());
      }
      auto params = result.params.Tensors();
      const auto grads = grad.Tensors();
      for (std::size_t i = 0; i < kTensorCount; ++i) {
        *params[i] -= options.learning_rate * *grads[i];
      }
    }
    const double loss = BatchLoss(result.params, train);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDiverged,
                  "training loss is not finite after epoch " + std::to_string(epoch + 1));
    }
    result.train_loss.push_back(loss);
    if (validation != nullptr) result.validation_loss.push_back(BatchLoss(result.params, *validation));
  }
  return result;
}

ToyDataset MakeToyDataset(const ToyDataOptions& options) {
  if (options.samples <= 0 || options.validation_samples < 0 || options.frames < 2 || options.input_dim < 3 ||
      options.output_dim <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "toy dataset needs samples >= 1, frames >= 2, input_dim >= 3, output_dim >= 1");
  }
  const int classes = options.input_dim - 2;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> proto_dist(-0.6, 0.6);
  std::uniform_int_distribution<int> class_dist(0, classes - 1);
  std::uniform_int_distribution<int> length_dist(3, 6);

  MatrixXd prototypes(options.output_dim, classes);
  for (Eigen::Index c = 0; c < prototypes.cols(); ++c) {
    for (Eigen::Index r = 0; r < prototypes.rows(); ++r) prototypes(r, c) = proto_dist(rng);
  }

  ToyDataset data;
  for (int s = 0; s < options.samples + options.validation_samples; ++s) {
    TrainingBatch& batch = s < options.samples ? data.train : data.validation;
    std::vector<int> phones(options.frames);
    for (int t = 0; t < options.frames;) {
      const int phone = class_dist(rng);
      const int len = length_dist(rng);
      for (int k = 0; k < len && t < options.frames; ++k, ++t) phones[t] = phone;
    }
    MatrixXd x = MatrixXd::Zero(options.input_dim, options.frames);
    MatrixXd raw(options.output_dim, options.frames);
    for (int t = 0; t < options.frames; ++t) {
      const double pos = static_cast<double>(t) / (options.frames - 1);
      x(phones[t], t) = 1.0;
      x(classes, t) = pos;
      x(classes + 1, t) = 1.0 - pos;
      raw.col(t) = prototypes.col(phones[t]);
    }
    // Smoothed phone transitions plus a linear declination whose slope
    // alternates in sign across outputs.
    MatrixXd y(options.output_dim, options.frames);
    for (int t = 0; t < options.frames; ++t) {
      const int lo = std::max(0, t - 1), hi = std::min(options.frames - 1, t + 1);
      const VectorXd smooth = raw.middleCols(lo, hi - lo + 1).rowwise().mean();
      const double pos = static_cast<double>(t) / (options.frames - 1);
      for (int o = 0; o < options.output_dim; ++o) {
        const double slope = o % 2 == 0 ? 1.0 : -1.0;
        y(o, t) = 0.7 * smooth(o) + 0.3 * slope * (0.5 - pos);
      }
    }
    batch.inputs.push_back(std::move(x));
    batch.targets.push_back(std::move(y));
  }
  return data;
}

std::string SerializeModel(const SequenceModelParams& params) {
  params.Validate();
  std::ostringstream out;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "cell_kind " << CellKindName(params.cell_kind) << '\n';
  out << "dims " << params.input_dim << ' ' << params.hidden_dim << ' ' << params.output_dim
      << '\n';
  out << "seed " << params.seed << '\n';
  const auto tensors = params.Tensors();
  for (std::size_t i = 0; i < kTensorCount; ++i) {
    const MatrixXd& m = *tensors[i];
    out << "tensor " << SequenceModelParams::TensorNames()[i] << ' ' << m.rows() << ' '
        << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c > 0) out << ' ';
        out << internal::FormatDouble(m(r, c));
      }
      out << '\n';
    }
  }
  return out.str();
}

SequenceModelParams ParseModel(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : internal::Split(text, '\n')) {
    line = internal::Trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  std::size_t next = 0;
  auto take = [&](std::string_view key) {
    if (next >= lines.size()) {
      throw Error(ErrorCode::kUnsupportedFormat, "model file truncated before '" +
                                                     std::string(key) + "'");
    }
    auto fields = internal::Split(lines[next++], ' ');
    if (fields.empty() || fields[0] != key) {
      throw Error(ErrorCode::kUnsupportedFormat, "model file: expected '" + std::string(key) + "'");
    }
    return fields;
  };
  const auto header = take(kModelMagic);
  if (header.size() != 2 || internal::ParseInteger(header[1], "model version") != kModelVersion) {
    throw Error(ErrorCode::kUnsupportedFormat, "unsupported model file version");
  }
  const auto kind = take("cell_kind");
  if (kind.size() != 2) throw Error(ErrorCode::kUnsupportedFormat, "model file: bad cell_kind");
  const auto dims = take("dims");
  if (dims.size() != 4) throw Error(ErrorCode::kUnsupportedFormat, "model file: bad dims");
  const auto seed = take("seed");
  if (seed.size() != 2) throw Error(ErrorCode::kUnsupportedFormat, "model file: bad seed");

  SequenceModelParams params;
  try {
    params = SequenceModelParams::Zeros(ParseCellKind(kind[1]),
                                        internal::ParseInteger(dims[1], "dims"),
                                        internal::ParseInteger(dims[2], "dims"),
                                        internal::ParseInteger(dims[3], "dims"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kUnsupportedFormat, std::string("model file: ") + e.what());
  }
  params.seed = static_cast<std::uint64_t>(internal::ParseInteger(seed[1], "seed"));
  const auto tensors = params.Tensors();
  for (std::size_t i = 0; i < kTensorCount; ++i) {
    const auto fields = take("tensor");
    MatrixXd& m = *tensors[i];
    if (fields.size() != 4 || fields[1] != SequenceModelParams::TensorNames()[i]) {
      throw Error(ErrorCode::kUnsupportedFormat,
                  "model file: expected tensor " +
                      std::string(SequenceModelParams::TensorNames()[i]));
    }
    if (internal::ParseInteger(fields[2], "tensor rows") != m.rows() ||
        internal::ParseInteger(fields[3], "tensor cols") != m.cols()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "model file: tensor " + std::string(fields[1]) + " does not match the dims");
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (next >= lines.size()) throw Error(ErrorCode::kUnsupportedFormat, "model file truncated");
      const auto values = internal::Split(lines[next++], ' ');
      if (static_cast<Eigen::Index>(values.size()) != m.cols()) {
        throw Error(ErrorCode::kShapeMismatch, "model file: row length mismatch");
      }
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = internal::ParseDouble(values[c], "model tensor");
      }
    }
  }
  if (next != lines.size()) throw Error(ErrorCode::kUnsupportedFormat, "model file: trailing data");
  params.Validate();
  return params;
}

void SaveModel(const SequenceModelParams& params, const std::string& path) {
  const std::string text = SerializeModel(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

SequenceModelParams LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

}  // namespace contvoc
