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

// Phase distortion, phase distortion deviation (PDD) and the continuous noise
// mask (cNM) derived from it.
//
// Mask polarity is selectable. Under kFig1Operational (the default) the mask
// equals the regularized PDD, so voiced frames sit low and noisy frames high,
// which is the polarity the synthesis gate expects (keep voiced iff
// cnm <= threshold). kEq1Literal uses cnm = 1 - pdd.

#ifndef CONTVOC_MASK_H_
#define CONTVOC_MASK_H_

#include <span>
#include <string_view>
#include <vector>

#include "contvoc/analysis.h"

namespace contvoc {

inline constexpr double kDefaultThreshold = 0.77;
inline constexpr int kDefaultPddWindow = 11;
inline constexpr double kPddEpsilon = 1e-6;
// Relative amplitude (-60 dB) below which a harmonic's phase is ignored.
inline constexpr double kPhaseAmplitudeGate = 1e-3;

enum class MaskConvention { kFig1Operational, kEq1Literal };

std::string_view MaskConventionName(MaskConvention convention);
MaskConvention ParseMaskConvention(std::string_view name);

struct PhaseDistortionTrack {
  // pd[k] has harmonic_count(k) - 1 entries; empty when the frame has fewer
  // than two harmonics.
  std::vector<std::vector<double>> pd;
  std::vector<double> frame_times;  // seconds
};

struct NoiseMask {
  std::vector<double> pdd;  // [0, 1]
  std::vector<double> cnm;  // [0, 1]
  double threshold = kDefaultThreshold;
  MaskConvention convention = MaskConvention::kFig1Operational;

  std::size_t frame_count() const { return cnm.size(); }
  // Range and convention checks; throws kInvalidArgument / kShapeMismatch.
  void Validate() const;
};

// pd[h-1] = wrap(phi[h+1] - phi[h] - phi[1]) for h = 1..H-1. The subtraction
// of phi[1] cancels the linear phase of a time shift. Terms involving a
// harmonic weaker than kPhaseAmplitudeGate times the frame's strongest one are
// skipped: such a phase is numerically undefined. Throws kShapeMismatch.
PhaseDistortionTrack PhaseDistortion(std::span<const HarmonicFrame> frames,
                                     std::span<const double> frame_times);

// Deviation of a pooled set of phase distortions:
//   R = |mean(exp(j * pd))|, s = sqrt(-2 ln max(R, eps)),
//   result = min(1, s / sqrt(ln N)).
// sqrt(ln N) is the deviation whose R equals the expected resultant length
// 1/sqrt(N) of N independent uniformly random phases, so 1 reads as "no more
// coherent than noise". N is `independent_count` when positive (at least 2),
// else the pooled size. Fewer than two values give 1.
double PooledPhaseDeviation(std::span<const double> pooled,
                             double independent_count = 0.0);

// Per-frame deviation pooling all harmonics of frames [k - W/2, k + W/2], with
// N the mean number of values per non-empty pooled frame.
// `window_frames` must be odd and >= 3.
std::vector<double> PddEstimate(const PhaseDistortionTrack& track,
                                int window_frames = kDefaultPddWindow);

// Nearest-neighbour resampling from source to target times (ties go to the
// earlier source). Both time axes must be strictly increasing; values are
// clamped to [0, 1].
std::vector<double> RegularizePdd(std::span<const double> values,
                                  std::span<const double> source_times,
                                  std::span<const double> target_times);

// Values outside [0, 1] are rejected with kInvalidArgument.
NoiseMask ComputeCnm(std::span<const double> pdd,
                     MaskConvention convention = MaskConvention::kFig1Operational,
                     double threshold = kDefaultThreshold);

}  // namespace contvoc

#endif  // CONTVOC_MASK_H_
