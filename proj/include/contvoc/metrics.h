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

// Objective evaluation: mel-cepstral distortion, RMSE, Pearson correlation and
// empirical CDFs. All metrics expect pre-aligned, equal-length inputs.

#ifndef CONTVOC_METRICS_H_
#define CONTVOC_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "contvoc/analysis.h"

namespace contvoc {

// Mean over frames of (10 / ln 10) * sqrt(2 * sum_{i>=1} (c_i - c'_i)^2); c0
// is excluded. Errors: kShapeMismatch, kInvalidArgument (no frames).
double MelCepstralDistortion(const CepstrumTrack& ref, const CepstrumTrack& test);

// Errors: kShapeMismatch, kInvalidArgument (empty).
double Rmse(std::span<const double> ref, std::span<const double> test);

// Errors: kShapeMismatch, kInvalidArgument (fewer than two points),
// kZeroVariance when either input is constant.
double PearsonCorrelation(std::span<const double> ref, std::span<const double> test);

// Distinct sample values in ascending order with the fraction of samples less
// than or equal to each.
struct EcdfCurve {
  std::vector<double> sorted_values;
  std::vector<double> cumulative;
  std::size_t sample_count = 0;
};

// Errors: kInvalidArgument (empty), kNonFinite.
EcdfCurve Ecdf(std::span<const double> values);
// (number of samples <= x) / n.
double EvaluateEcdf(const EcdfCurve& curve, double x);

struct MetricReport {
  double mcd_db = 0.0;
  double f0_rmse_hz = 0.0;
  double mvf_rmse_hz = 0.0;
  double mvf_rmse_norm = 0.0;  // MVF RMSE divided by Nyquist
  double corr = 0.0;           // Pearson correlation of the contF0 tracks
  std::size_t frame_count = 0;
};

// Compares two aligned parameter sets. When a contF0 track is constant the
// correlation is reported as 1 for identical tracks and 0 otherwise.
MetricReport EvaluateParams(const ContinuousParams& ref, const ContinuousParams& test);

}  // namespace contvoc

#endif  // CONTVOC_METRICS_H_
