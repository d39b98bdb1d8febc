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

// Pulse-plus-noise synthesis from continuous parameters, gated by the noise
// mask:
//   s(t) = sum_n v_n(t) + u_n(t)
//   v_n  kept when cnm[n] <= threshold, zeroed otherwise
//   u_n  scaled by cnm[n]
//
// Frame n owns a segment of 2 * hop samples centred on n * hop. Segments are
// cross-faded with a periodic Hann window (50% overlap), filtered by the
// frame's cepstral envelope (zero phase) and overlap-added.

#ifndef CONTVOC_SYNTHESIS_H_
#define CONTVOC_SYNTHESIS_H_

#include <cstdint>
#include <vector>

#include "contvoc/analysis.h"
#include "contvoc/mask.h"
#include "contvoc/signal_io.h"

namespace contvoc {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kOutputPeak = 0.99;

using SegmentTrack = std::vector<std::vector<double>>;

struct ExcitationPlan {
  SegmentTrack voiced;
  SegmentTrack unvoiced;
  FrameSpec frame_spec;
  int sample_rate = 16000;

  std::size_t frame_count() const { return voiced.size(); }
  int segment_length() const { return 2 * frame_spec.hop; }
  // Output sample index of the first sample of frame n's segment (may be < 0).
  long segment_start(std::size_t n) const {
    return static_cast<long>(n) * frame_spec.hop - frame_spec.hop;
  }
  // Equal frame counts and segment lengths; throws kShapeMismatch.
  void Validate() const;
};

// Band-limited pulse train sqrt(2/H) * sum_{h<=H} cos(h * phase(t)), with the
// phase accumulated sample by sample from the linearly interpolated contF0 and
// H the number of harmonics below the frame's MVF. Unit RMS for a stationary
// frame; pulses sit at phase = 2*pi*k.
SegmentTrack GenVoicedExcitation(const ContinuousParams& params);

// Gaussian white noise (one stream per utterance, seeded) high-passed above the
// frame's MVF with a per-segment FFT mask and rescaled to unit expected RMS.
// MVF at Nyquist yields silence.
SegmentTrack GenUnvoicedExcitation(const ContinuousParams& params,
                                   std::uint64_t seed = kDefaultSeed);

ExcitationPlan MakeExcitationPlan(const ContinuousParams& params,
                                  std::uint64_t seed = kDefaultSeed);

// Inclusive gate: a voiced segment survives when cnm[n] <= threshold.
// Errors: kShapeMismatch on frame-count mismatch.
ExcitationPlan ApplyMask(const ExcitationPlan& plan, const NoiseMask& mask);

// Overlap-add synthesis before peak normalization; length frame_count * hop.
std::vector<double> SynthesizeRaw(const ExcitationPlan& plan,
                                  const ContinuousParams& params);

// SynthesizeRaw scaled so that the peak magnitude is kOutputPeak (silence stays
// silent).
Waveform Synthesize(const ExcitationPlan& plan, const ContinuousParams& params);

// Scales in place so that max |x| == peak; returns the applied gain.
double PeakNormalize(std::vector<double>& x, double peak = kOutputPeak);

}  // namespace contvoc

#endif  // CONTVOC_SYNTHESIS_H_
