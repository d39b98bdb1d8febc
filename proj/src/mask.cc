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

#include "contvoc/mask.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "contvoc/error.h"

namespace contvoc {

std::string_view MaskConventionName(MaskConvention convention) {
  switch (convention) {
    case MaskConvention::kFig1Operational: return "fig1-operational";
    case MaskConvention::kEq1Literal: return "eq1-literal";
  }
  return "fig1-operational";
}

MaskConvention ParseMaskConvention(std::string_view name) {
  if (name == "fig1-operational") return MaskConvention::kFig1Operational;
  if (name == "eq1-literal") return MaskConvention::kEq1Literal;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mask convention '" + std::string(name) + "'");
}

void NoiseMask::Validate() const {
  if (pdd.size() != cnm.size()) {
    throw Error(ErrorCode::kShapeMismatch, "pdd and cnm tracks differ in length");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in [0, 1]");
  }
  for (std::size_t k = 0; k < cnm.size(); ++k) {
    if (!(pdd[k] >= 0.0 && pdd[k] <= 1.0 && cnm[k] >= 0.0 && cnm[k] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mask values must lie in [0, 1] (frame " + std::to_string(k) + ")");
    }
  }
}

PhaseDistortionTrack PhaseDistortion(std::span<const HarmonicFrame> frames,
                                     std::span<const double> frame_times) {
  if (frame_times.size() != frames.size()) {
    throw Error(ErrorCode::kShapeMismatch, "frame times do not match the frames");
  }
  PhaseDistortionTrack track;
  track.frame_times.assign(frame_times.begin(), frame_times.end());
  track.pd.resize(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& phases = frames[k].phases;
    const auto& amps = frames[k].amplitudes;
    if (phases.size() < 2) continue;
    if (amps.size() != phases.size()) {
      throw Error(ErrorCode::kShapeMismatch, "harmonic amplitudes and phases differ in count");
    }
    const double gate = kPhaseAmplitudeGate * *std::max_element(amps.begin(), amps.end());
    if (!(amps[0] > gate)) continue;
    auto& row = track.pd[k];
    for (std::size_t h = 0; h + 1 < phases.size(); ++h) {
      if (amps[h] > gate && amps[h + 1] > gate) {
        row.push_back(WrapPhase(phases[h + 1] - phases[h] - phases[0]));
      }
    }
  }
  return track;
}

double PooledPhaseDeviation(std::span<const double> pooled, double independent_count) {
  if (pooled.size() < 2) return 1.0;
  std::complex<double> sum = 0.0;
  for (double v : pooled) sum += std::polar(1.0, v);
  const double n = static_cast<double>(pooled.size());
  const double resultant = std::min(1.0, std::abs(sum) / n);
  const double deviation =
      std::sqrt(std::max(0.0, -2.0 * std::log(std::max(resultant, kPddEpsilon))));
  const double m = independent_count > 0.0 ? std::max(2.0, independent_count) : n;
  return std::min(1.0, deviation / std::sqrt(std::log(m)));
}

std::vector<double> PddEstimate(const PhaseDistortionTrack& track, int window_frames) {
  if (window_frames < 3 || window_frames % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "PDD window must be odd and >= 3");
  }
  const long frames = static_cast<long>(track.pd.size());
  const long half = window_frames / 2;
  std::vector<double> out(track.pd.size());
  std::vector<double> pooled;
  for (long k = 0; k < frames; ++k) {
    pooled.clear();
    int rows = 0;
    for (long j = std::max(0L, k - half); j <= std::min(frames - 1, k + half); ++j) {
      pooled.insert(pooled.end(), track.pd[j].begin(), track.pd[j].end());
      rows += track.pd[j].empty() ? 0 : 1;
    }
    // Overlapping analysis windows make neighbouring rows strongly dependent;
    // only the harmonics within one row count as independent draws.
    const double per_row = rows > 0 ? static_cast<double>(pooled.size()) / rows : 0.0;
    out[k] = PooledPhaseDeviation(pooled, per_row);
  }
  return out;
}

std::vector<double> RegularizePdd(std::span<const double> values,
                                  std::span<const double> source_times,
                                  std::span<const double> target_times) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty source track");
  if (values.size() != source_times.size()) {
    throw Error(ErrorCode::kShapeMismatch, "source values and times differ in length");
  }
  auto strictly_increasing = [](std::span<const double> t) {
    return std::adjacent_find(t.begin(), t.end(),
                              [](double a, double b) { return !(a < b); }) == t.end();
  };
  if (!strictly_increasing(source_times) || !strictly_increasing(target_times)) {
    throw Error(ErrorCode::kInvalidArgument, "time axes must be strictly increasing");
  }
  std::vector<double> out(target_times.size());
  for (std::size_t i = 0; i < target_times.size(); ++i) {
    const double t = target_times[i];
    const auto upper = std::lower_bound(source_times.begin(), source_times.end(), t);
    std::size_t best;
    if (upper == source_times.begin()) {
      best = 0;
    } else if (upper == source_times.end()) {
      best = source_times.size() - 1;
    } else {
      const std::size_t hi = static_cast<std::size_t>(upper - source_times.begin());
      // Earlier source wins ties.
      best = (t - source_times[hi - 1] <= source_times[hi] - t) ? hi - 1 : hi;
    }
    out[i] = std::clamp(values[best], 0.0, 1.0);
  }
  return out;
}

NoiseMask ComputeCnm(std::span<const double> pdd, MaskConvention convention,
                     double threshold) {
  NoiseMask mask;
  mask.threshold = threshold;
  mask.convention = convention;
  mask.pdd.assign(pdd.begin(), pdd.end());
  mask.cnm.resize(pdd.size());
  for (std::size_t k = 0; k < pdd.size(); ++k) {
    if (!(pdd[k] >= 0.0 && pdd[k] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "PDD value outside [0, 1] at frame " + std::to_string(k));
    }
    mask.cnm[k] = convention == MaskConvention::kEq1Literal ? 1.0 - pdd[k] : pdd[k];
  }
  mask.Validate();
  return mask;
}

}  // namespace contvoc
