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


// End-to-end analysis and resynthesis built from the analysis, mask and
// synthesis modules.

#ifndef CONTVOC_VOCODER_H_
#define CONTVOC_VOCODER_H_

#include <cstdint>

#include "contvoc/analysis.h"
#include "contvoc/mask.h"
#include "contvoc/metrics.h"
#include "contvoc/signal_io.h"
#include "contvoc/synthesis.h"

namespace contvoc {

struct VocoderConfig {
  double hop_ms = 5.0;
  double window_ms = 25.0;
  double f0_min = kDefaultF0Min;
  double f0_max = kDefaultF0Max;
  int order = kDefaultEnvelopeOrder;
  double warp = kDefaultWarp;
  double threshold = kDefaultThreshold;
  MaskConvention convention = MaskConvention::kFig1Operational;
  int pdd_window = kDefaultPddWindow;
  std::uint64_t seed = kDefaultSeed;

  FrameSpec frame_spec(int sample_rate) const;
  // Throws kInvalidArgument naming the offending field.
  void Validate() const;
};

struct VocoderAnalysis {
  ContinuousParams params;
  NoiseMask mask;

  std::size_t frame_count() const { return params.frame_count(); }
  // Equal frame counts across all tracks; kShapeMismatch otherwise.
  void Validate() const;
};

// contF0 -> MVF -> F0-adaptive envelope -> harmonic phases -> phase distortion
// -> PDD -> regularized onto the frame grid -> cNM.
VocoderAnalysis Analyze(const Waveform& w, const VocoderConfig& config);

// Recomputes cNM from the stored PDD under another convention or threshold.
NoiseMask Remask(const NoiseMask& mask, MaskConvention convention, double threshold);

// Excitation, mask gating and filtering; frame_count * hop samples.
Waveform Resynthesize(const VocoderAnalysis& analysis, std::uint64_t seed = kDefaultSeed);

inline MetricReport Evaluate(const VocoderAnalysis& ref, const VocoderAnalysis& test) {
  return EvaluateParams(ref.params, test.params);
}

}  // namespace contvoc

#endif  // CONTVOC_VOCODER_H_
