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

#include "contvoc/synthesis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "contvoc/error.h"
#include "spectrum.h"

namespace contvoc {

namespace {

constexpr double kPi = std::numbers::pi;

// contF0 at an arbitrary (possibly out of range) sample index, linear between
// frame centres and held beyond the ends.
double F0AtSample(const ContinuousParams& params, long sample) {
  const auto& f0 = params.cont_f0;
  const double pos = static_cast<double>(sample) / params.frame_spec.hop;
  if (pos <= 0.0) return f0.front();
  const auto last = static_cast<double>(f0.size() - 1);
  if (pos >= last) return f0.back();
  const auto k = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(k);
  return (1.0 - t) * f0[k] + t * f0[k + 1];
}

}  // namespace

void ExcitationPlan::Validate() const {
  if (voiced.size() != unvoiced.size()) {
    throw Error(ErrorCode::kShapeMismatch, "voiced and unvoiced frame counts differ");
  }
  const auto len = static_cast<std::size_t>(segment_length());
  for (std::size_t n = 0; n < voiced.size(); ++n) {
    if (voiced[n].size() != len || unvoiced[n].size() != len) {
      throw Error(ErrorCode::kShapeMismatch, "excitation segment has the wrong length");
    }
  }
}

SegmentTrack GenVoicedExcitation(const ContinuousParams& params) {
  params.Validate();
  const std::size_t frames = params.frame_count();
  const int hop = params.frame_spec.hop;
  const int seg_len = 2 * hop;
  const double sr = params.sample_rate;
  const double nyquist = 0.5 * sr;

  // Running phase over [-hop, frames * hop + hop), zero at sample 0.
  const long first = -hop;
  const long total = static_cast<long>(frames) * hop + 2L * hop;
  std::vector<double> phase(static_cast<std::size_t>(total));
  std::vector<double> f0_at(phase.size());
  for (long i = 0; i < total; ++i) f0_at[i] = F0AtSample(params, first + i);
  phase[hop] = 0.0;
  for (long i = hop + 1; i < total; ++i) phase[i] = phase[i - 1] + 2.0 * kPi * f0_at[i] / sr;
  for (long i = hop - 1; i >= 0; --i) phase[i] = phase[i + 1] - 2.0 * kPi * f0_at[i + 1] / sr;

  SegmentTrack out(frames, std::vector<double>(seg_len, 0.0));
  for (std::size_t n = 0; n < frames; ++n) {
    const long offset = static_cast<long>(n) * hop;  // index of segment start in `phase`
    const double f_max = *std::max_element(f0_at.begin() + offset, f0_at.begin() + offset + seg_len);
    const double band = std::min(params.mvf[n], nyquist);
    const int harmonics = static_cast<int>(std::floor(band / f_max));
    if (harmonics < 1) continue;
    const double gain = std::sqrt(2.0 / harmonics);
    auto& seg = out[n];
    for (int i = 0; i < seg_len; ++i) {
      // Chebyshev recurrence for cos(h * phi).
      const double c1 = std::cos(phase[offset + i]);
      double prev = 1.0, cur = c1, acc = c1;
      for (int h = 2; h <= harmonics; ++h) {
        const double next = 2.0 * c1 * cur - prev;
        prev = cur;
        cur = next;
        acc += cur;
      }
      seg[i] = gain * acc;
    }
  }
  return out;
}

SegmentTrack GenUnvoicedExcitation(const ContinuousParams& params, std::uint64_t seed) {
  params.Validate();
  const std::size_t frames = params.frame_count();
  const int hop = params.frame_spec.hop;
  const int seg_len = 2 * hop;
  const double sr = params.sample_rate;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(frames * hop + 2 * static_cast<std::size_t>(hop));
  for (double& v : noise) v = normal(rng);

  const internal::RealFft fft(seg_len);
  const int bins = fft.bins();
  SegmentTrack out(frames, std::vector<double>(seg_len, 0.0));
  for (std::size_t n = 0; n < frames; ++n) {
    const std::span<const double> slice(noise.data() + n * hop, seg_len);
    auto spectrum = fft.Forward(slice);
    double kept = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double freq = b * sr / seg_len;
      if (freq < params.mvf[n] || params.mvf[n] >= 0.5 * sr) {
        spectrum[b] = 0.0;
      } else {
        // Power share of bin b in a real spectrum of seg_len points.
        kept += (b == 0 || 2 * b == seg_len) ? 1.0 : 2.0;
      }
    }
    if (kept == 0.0) continue;
    const double gain = std::sqrt(seg_len / kept);
    auto seg = fft.Inverse(spectrum);
    for (double& v : seg) v *= gain;
    out[n] = std::move(seg);
  }
  return out;
}

ExcitationPlan MakeExcitationPlan(const ContinuousParams& params, std::uint64_t seed) {
  ExcitationPlan plan;
  plan.voiced = GenVoicedExcitation(params);
  plan.unvoiced = GenUnvoicedExcitation(params, seed);
  plan.frame_spec = params.frame_spec;
  plan.sample_rate = params.sample_rate;
  return plan;
}

ExcitationPlan ApplyMask(const ExcitationPlan& plan, const NoiseMask& mask) {
  plan.Validate();
  mask.Validate();
  if (mask.frame_count() != plan.frame_count()) {
    throw Error(ErrorCode::kShapeMismatch, "mask and excitation frame counts differ");
  }
  ExcitationPlan out = plan;
  for (std::size_t n = 0; n < out.frame_count(); ++n) {
    const double c = mask.cnm[n];
    if (c > mask.threshold) std::fill(out.voiced[n].begin(), out.voiced[n].end(), 0.0);
    for (double& v : out.unvoiced[n]) v *= c;
  }
  return out;
}

std::vector<double> SynthesizeRaw(const ExcitationPlan& plan, const ContinuousParams& params) {
  plan.Validate();
  params.Validate();
  if (plan.frame_count() != params.frame_count() || plan.frame_spec.hop != params.frame_spec.hop) {
    throw Error(ErrorCode::kShapeMismatch, "excitation plan and parameters are not aligned");
  }
  const std::size_t frames = plan.frame_count();
  const int hop = plan.frame_spec.hop;
  const int seg_len = plan.segment_length();
  const long out_len = static_cast<long>(frames) * hop;
  std::vector<double> out(static_cast<std::size_t>(out_len), 0.0);
  if (frames == 0) return out;

  // Cross-fade window, renormalized so the weights covering every output
  // sample sum to one (only the last half segment differs from plain Hann).
  const auto hann = MakeWindow(WindowKind::kHann, seg_len);
  std::vector<double> coverage(out.size(), 0.0);
  for (std::size_t n = 0; n < frames; ++n) {
    const long start = plan.segment_start(n);
    for (int i = 0; i < seg_len; ++i) {
      const long t = start + i;
      if (t >= 0 && t < out_len) coverage[t] += hann[i];
    }
  }

  const int fft_size = internal::NextPowerOfTwo(std::max(1024, 4 * seg_len));
  const internal::RealFft fft(fft_size);
  const int bins = fft.bins();
  const int offset = (fft_size - seg_len) / 2;
  const int order = params.order();
  // cos(m * warped(omega_b)) table shared by all frames.
  std::vector<double> cos_table(static_cast<std::size_t>(bins) * (order + 1));
  for (int b = 0; b < bins; ++b) {
    const double wt = WarpFrequency(kPi * b / (bins - 1), params.warp);
    for (int m = 0; m <= order; ++m) cos_table[b * (order + 1) + m] = std::cos(m * wt);
  }

  std::vector<double> block(static_cast<std::size_t>(fft_size));
  for (std::size_t n = 0; n < frames; ++n) {
    const long start = plan.segment_start(n);
    std::fill(block.begin(), block.end(), 0.0);
    bool silent = true;
    for (int i = 0; i < seg_len; ++i) {
      const long t = start + i;
      if (t < 0 || t >= out_len || coverage[t] <= 0.0) continue;
      const double e = plan.voiced[n][i] + plan.unvoiced[n][i];
      block[offset + i] = e * hann[i] / coverage[t];
      silent = silent && block[offset + i] == 0.0;
    }
    if (silent) continue;

    auto spectrum = fft.Forward(block);
    const auto& c = params.envelope[n];
    for (int b = 0; b < bins; ++b) {
      double log_amp = 0.0;
      const double* row = &cos_table[b * (order + 1)];
      for (int m = 0; m <= order; ++m) log_amp += c[m] * row[m];
      spectrum[b] *= std::exp(log_amp);
    }
    const auto filtered = fft.Inverse(spectrum);
    const long base = start - offset;
    for (int i = 0; i < fft_size; ++i) {
      const long t = base + i;
      if (t >= 0 && t < out_len) out[t] += filtered[i];
    }
  }
  return out;
}

double PeakNormalize(std::vector<double>& x, double peak) {
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 1.0;
  const double gain = peak / max_abs;
  for (double& v : x) v *= gain;
  return gain;
}

Waveform Synthesize(const ExcitationPlan& plan, const ContinuousParams& params) {
  auto samples = SynthesizeRaw(plan, params);
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "synthesis produced a non-finite sample");
  }
  PeakNormalize(samples);
  return Waveform(std::move(samples), plan.sample_rate);
}

}  // namespace contvoc
