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

#include "contvoc/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "contvoc/error.h"

namespace contvoc {

namespace {

void CheckPair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "tracks differ in length");
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "tracks are empty");
}

}  // namespace

double MelCepstralDistortion(const CepstrumTrack& ref, const CepstrumTrack& test) {
  if (ref.size() != test.size()) {
    throw Error(ErrorCode::kShapeMismatch, "cepstral tracks differ in frame count");
  }
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "cepstral tracks are empty");
  const double scale = 10.0 / std::numbers::ln10;
  double total = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (ref[k].size() != test[k].size()) {
      throw Error(ErrorCode::kShapeMismatch, "cepstral orders differ");
    }
    double sq = 0.0;
    for (std::size_t i = 1; i < ref[k].size(); ++i) {
      const double d = ref[k][i] - test[k][i];
      sq += d * d;
    }
    total += scale * std::sqrt(2.0 * sq);
  }
  return total / static_cast<double>(ref.size());
}

double Rmse(std::span<const double> ref, std::span<const double> test) {
  CheckPair(ref, test);
  double sq = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - test[i];
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(ref.size()));
}

double PearsonCorrelation(std::span<const double> ref, std::span<const double> test) {
  CheckPair(ref, test);
  if (ref.size() < 2) throw Error(ErrorCode::kInvalidArgument, "correlation needs two points");
  const double n = static_cast<double>(ref.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    mean_a += ref[i];
    mean_b += test[i];
  }
  mean_a /= n;
  mean_b /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double da = ref[i] - mean_a, db = test[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    throw Error(ErrorCode::kZeroVariance, "correlation undefined for a constant track");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

EcdfCurve Ecdf(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "ECDF of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "ECDF input must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  EcdfCurve curve;
  curve.sample_count = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    curve.sorted_values.push_back(sorted[i]);
    curve.cumulative.push_back(static_cast<double>(i + 1) / n);
  }
  return curve;
}

double EvaluateEcdf(const EcdfCurve& curve, double x) {
  const auto it = std::upper_bound(curve.sorted_values.begin(), curve.sorted_values.end(), x);
  if (it == curve.sorted_values.begin()) return 0.0;
  return curve.cumulative[static_cast<std::size_t>(it - curve.sorted_values.begin()) - 1];
}

MetricReport EvaluateParams(const ContinuousParams& ref, const ContinuousParams& test) {
  ref.Validate();
  test.Validate();
  if (ref.frame_count() != test.frame_count()) {
    throw Error(ErrorCode::kShapeMismatch,
                "parameter tracks are not aligned (" + std::to_string(ref.frame_count()) +
                    " vs " + std::to_string(test.frame_count()) + " frames)");
  }
  if (ref.sample_rate != test.sample_rate) {
    throw Error(ErrorCode::kShapeMismatch, "sample rates differ");
  }
  MetricReport report;
  report.frame_count = ref.frame_count();
  report.mcd_db = MelCepstralDistortion(ref.envelope, test.envelope);
  report.f0_rmse_hz = Rmse(ref.cont_f0, test.cont_f0);
  report.mvf_rmse_hz = Rmse(ref.mvf, test.mvf);
  report.mvf_rmse_norm = report.mvf_rmse_hz / (0.5 * ref.sample_rate);
  try {
    report.corr = PearsonCorrelation(ref.cont_f0, test.cont_f0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroVariance && e.code() != ErrorCode::kInvalidArgument) throw;
    report.corr = ref.cont_f0 == test.cont_f0 ? 1.0 : 0.0;
  }
  return report;
}

}  // namespace contvoc
