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


#include "contvoc/vocoder.h"

#include <cmath>
#include <string>

#include "contvoc/error.h"

namespace contvoc {

namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace

FrameSpec VocoderConfig::frame_spec(int sample_rate) const {
  return FrameSpec::FromMilliseconds(sample_rate, hop_ms, window_ms);
}

void VocoderConfig::Validate() const {
  Require(std::isfinite(hop_ms) && hop_ms > 0.0, "hop_ms must be positive");
  Require(std::isfinite(window_ms) && window_ms >= hop_ms, "window_ms must be >= hop_ms");
  Require(std::isfinite(f0_min) && f0_min > 0.0, "f0_min must be positive");
  Require(std::isfinite(f0_max) && f0_max > f0_min, "f0_max must exceed f0_min");
  Require(order >= 1, "order must be >= 1");
  Require(std::isfinite(warp) && std::abs(warp) < 1.0, "warp must lie in (-1, 1)");
  Require(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0, 1]");
  Require(pdd_window >= 3 && pdd_window % 2 == 1, "pdd_window must be odd and >= 3");
}

void VocoderAnalysis::Validate() const {
  params.Validate();
  mask.Validate();
  if (mask.frame_count() != params.frame_count()) {
    throw Error(ErrorCode::kShapeMismatch, "mask and parameter frame counts differ");
  }
}

VocoderAnalysis Analyze(const Waveform& w, const VocoderConfig& config) {
  config.Validate();
  const FrameSpec spec = config.frame_spec(w.sample_rate());
  spec.Validate();
  Require(config.f0_max < w.nyquist(), "f0_max must be below Nyquist");

  VocoderAnalysis out;
  ContinuousParams& p = out.params;
  p.frame_spec = spec;
  p.sample_rate = w.sample_rate();
  p.warp = config.warp;
  p.cont_f0 = EstimateContF0(w, spec, config.f0_min, config.f0_max);
  p.mvf = EstimateMvf(w, p.cont_f0, spec);
  EnvelopeOptions env;
  env.order = config.order;
  env.warp = config.warp;
  env.f0_track = p.cont_f0;
  p.envelope = EstimateEnvelope(w, spec, env);

  std::vector<double> times(p.frame_count());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = p.frame_time(k);
  const auto harmonics = HarmonicAnalysis(w, p.cont_f0, p.mvf, spec);
  const auto pd = PhaseDistortion(harmonics, times);
  const auto pdd = PddEstimate(pd, config.pdd_window);
  const auto regular = RegularizePdd(pdd, pd.frame_times, times);
  out.mask = ComputeCnm(regular, config.convention, config.threshold);
  out.Validate();
  return out;
}

NoiseMask Remask(const NoiseMask& mask, MaskConvention convention, double threshold) {
  return ComputeCnm(mask.pdd, convention, threshold);
}

Waveform Resynthesize(const VocoderAnalysis& analysis, std::uint64_t seed) {
  analysis.Validate();
  const ExcitationPlan plan = ApplyMask(MakeExcitationPlan(analysis.params, seed), analysis.mask);
  return Synthesize(plan, analysis.params);
}

}  // namespace contvoc
