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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "contvoc/vocoder.h"
#include "spectrum.h"
#include "support/error_code.h"
#include "support/signals.h"

namespace contvoc {
namespace {

using testing::CodeOf;

constexpr int kSr = 16000;

// Flat (all-zero cepstrum) parameters with constant tracks.
ContinuousParams FlatParams(std::size_t frames, double f0, double mvf, int order = 24) {
  ContinuousParams p;
  p.cont_f0.assign(frames, f0);
  p.mvf.assign(frames, mvf);
  p.envelope.assign(frames, std::vector<double>(order + 1, 0.0));
  p.frame_spec = FrameSpec::Default(kSr);
  p.sample_rate = kSr;
  return p;
}

// Random but valid parameters: smooth contF0, MVF and a mildly shaped envelope.
ContinuousParams RandomParams(std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ContinuousParams p = FlatParams(frames, 100.0, 4000.0, 16);
  const double base = 90.0 + 150.0 * uni(rng);
  for (std::size_t k = 0; k < frames; ++k) {
    p.cont_f0[k] = base * (1.0 + 0.1 * std::sin(0.05 * k + 6.0 * uni(rng) * 0.01));
    p.mvf[k] = 1000.0 + 7000.0 * uni(rng);
    for (std::size_t i = 0; i < p.envelope[k].size(); ++i) {
      p.envelope[k][i] = (uni(rng) - 0.5) / (1.0 + i);
    }
  }
  return p;
}

NoiseMask MaskOf(std::vector<double> cnm, double threshold = kDefaultThreshold) {
  NoiseMask m;
  m.pdd = cnm;
  m.cnm = std::move(cnm);
  m.threshold = threshold;
  return m;
}

double SumSquares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Power spectrum of a Hann-windowed segment, zero padded to 1024 points.
std::vector<double> SegmentPower(std::span<const double> seg) {
  const internal::RealFft fft(1024);
  const auto w = MakeWindow(WindowKind::kHann, static_cast<int>(seg.size()));
  std::vector<double> x(seg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) x[i] = seg[i] * w[i];
  const auto spec = fft.Forward(x);
  std::vector<double> p(spec.size());
  for (std::size_t b = 0; b < spec.size(); ++b) p[b] = std::norm(spec[b]);
  return p;
}

TEST(VoicedExcitationTest, PulsesOnePeriodApart) {
  const auto params = FlatParams(200, 100.0, 8000.0);
  ExcitationPlan plan = MakeExcitationPlan(params);
  for (auto& seg : plan.unvoiced) std::fill(seg.begin(), seg.end(), 0.0);
  const auto y = SynthesizeRaw(plan, params);
  const double peak = *std::max_element(y.begin(), y.end());
  std::vector<long> onsets;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > 0.5 * peak && y[i] >= y[i - 1] && y[i] > y[i + 1]) onsets.push_back(static_cast<long>(i));
  }
  ASSERT_GE(onsets.size(), 95u);
  for (std::size_t j = 1; j < onsets.size(); ++j) {
    EXPECT_NEAR(onsets[j] - onsets[j - 1], 160, 1) << "pulse " << j;
  }
}

TEST(VoicedExcitationTest, ZeroMvfIsSilent) {
  for (const auto& seg : GenVoicedExcitation(FlatParams(50, 150.0, 0.0))) {
    for (double v : seg) ASSERT_EQ(v, 0.0);
  }
}

TEST(VoicedExcitationTest, BandLimitedToMvf) {
  const auto segs = GenVoicedExcitation(FlatParams(100, 200.0, 4000.0));
  for (std::size_t n = 0; n < segs.size(); ++n) {
    const auto p = SegmentPower(segs[n]);
    double total = 0.0, high = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
      total += p[b];
      if (b * static_cast<double>(kSr) / 1024 > 4500.0) high += p[b];
    }
    EXPECT_LT(high, 0.01 * total) << "frame " << n;
  }
}

TEST(VoicedExcitationTest, UnitRmsWhenStationary) {
  for (double f0 : {100.0, 200.0, 250.0}) {
    // The second halves of consecutive segments tile the signal; measure over
    // 40 of them (a whole number of periods for every f0 here).
    const auto segs = GenVoicedExcitation(FlatParams(60, f0, 5000.0));
    std::vector<double> joined;
    for (std::size_t n = 10; n < 50; ++n) joined.insert(joined.end(), segs[n].begin() + 80, segs[n].end());
    EXPECT_NEAR(testing::Rms(joined), 1.0, 0.1) << "f0 " << f0;
  }
}

TEST(UnvoicedExcitationTest, DeterministicPerSeed) {
  const auto params = FlatParams(50, 120.0, 3000.0);
  EXPECT_EQ(GenUnvoicedExcitation(params, 7), GenUnvoicedExcitation(params, 7));
  EXPECT_NE(GenUnvoicedExcitation(params, 7), GenUnvoicedExcitation(params, 8));
}

TEST(UnvoicedExcitationTest, NyquistMvfIsSilent) {
  for (const auto& seg : GenUnvoicedExcitation(FlatParams(50, 120.0, 8000.0), 1)) {
    for (double v : seg) ASSERT_EQ(v, 0.0);
  }
}

TEST(UnvoicedExcitationTest, HighPassedAboveMvf) {
  const auto segs = GenUnvoicedExcitation(FlatParams(200, 120.0, 2000.0), 3);
  double total = 0.0, low = 0.0, energy = 0.0, samples = 0.0;
  for (const auto& seg : segs) {
    const auto p = SegmentPower(seg);
    for (std::size_t b = 0; b < p.size(); ++b) {
      total += p[b];
      if (b * static_cast<double>(kSr) / 1024 < 1500.0) low += p[b];
    }
    energy += SumSquares(seg);
    samples += static_cast<double>(seg.size());
  }
  EXPECT_LT(low, 0.05 * total);
  EXPECT_NEAR(std::sqrt(energy / samples), 1.0, 0.05);
}

TEST(ApplyMaskTest, Examples) {
  const auto params = FlatParams(3, 150.0, 3000.0);
  const auto plan = MakeExcitationPlan(params, 1);
  const auto out = ApplyMask(plan, MaskOf({0.5, 0.9, 0.77}, 0.77));
  EXPECT_EQ(out.voiced[0], plan.voiced[0]);
  for (double v : out.voiced[1]) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(out.voiced[2], plan.voiced[2]);
  for (std::size_t n = 0; n < 3; ++n) {
    const double c = std::vector<double>{0.5, 0.9, 0.77}[n];
    for (std::size_t i = 0; i < out.unvoiced[n].size(); ++i) {
      ASSERT_EQ(out.unvoiced[n][i], c * plan.unvoiced[n][i]);
    }
  }
}

TEST(ApplyMaskTest, FrameCountMismatch) {
  const auto plan = MakeExcitationPlan(FlatParams(3, 150.0, 3000.0));
  EXPECT_EQ(CodeOf([&] { ApplyMask(plan, MaskOf({0.1, 0.2})); }), ErrorCode::kShapeMismatch);
}

TEST(ApplyMaskTest, IdempotentOnVoicedQuadraticOnUnvoiced) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto params = RandomParams(40, 4);
  const auto plan = MakeExcitationPlan(params, 2);
  std::vector<double> binary(40), continuous(40);
  for (std::size_t n = 0; n < 40; ++n) {
    binary[n] = uni(rng) < 0.5 ? 0.0 : 1.0;
    continuous[n] = uni(rng);
  }
  const auto mb = MaskOf(binary);
  const auto once_b = ApplyMask(plan, mb);
  const auto twice_b = ApplyMask(once_b, mb);
  EXPECT_EQ(twice_b.voiced, once_b.voiced);
  EXPECT_EQ(twice_b.unvoiced, once_b.unvoiced);

  const auto mc = MaskOf(continuous);
  const auto once = ApplyMask(plan, mc);
  const auto twice = ApplyMask(once, mc);
  EXPECT_EQ(twice.voiced, once.voiced);
  for (std::size_t n = 0; n < 40; ++n) {
    const double c = continuous[n];
    for (std::size_t i = 0; i < plan.unvoiced[n].size(); ++i) {
      ASSERT_NEAR(twice.unvoiced[n][i], c * c * plan.unvoiced[n][i], 1e-15);
    }
  }
}

TEST(ApplyMaskTest, RaisingThresholdNeverDropsVoicedFrames) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> cnm(300);
  for (double& c : cnm) c = uni(rng);
  const auto plan = MakeExcitationPlan(FlatParams(300, 120.0, 4000.0));
  int last = -1;
  for (double thr = 0.0; thr <= 1.0; thr += 0.05) {
    const auto out = ApplyMask(plan, MaskOf(cnm, thr));
    int kept = 0;
    for (const auto& seg : out.voiced) kept += SumSquares(seg) > 0.0 ? 1 : 0;
    EXPECT_GE(kept, last);
    last = kept;
  }
}

TEST(SynthesizeTest, SuperpositionAndLength) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto params = RandomParams(120 + 7 * seed, seed);
    const auto full = MakeExcitationPlan(params, seed);
    auto voiced_only = full, unvoiced_only = full;
    for (auto& s : voiced_only.unvoiced) std::fill(s.begin(), s.end(), 0.0);
    for (auto& s : unvoiced_only.voiced) std::fill(s.begin(), s.end(), 0.0);
    const auto y = SynthesizeRaw(full, params);
    const auto a = SynthesizeRaw(voiced_only, params);
    const auto b = SynthesizeRaw(unvoiced_only, params);
    ASSERT_EQ(y.size(), params.frame_count() * 80);
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) err += (a[i] + b[i] - y[i]) * (a[i] + b[i] - y[i]);
    EXPECT_LT(std::sqrt(err / y.size()), 1e-6);
  }
}

TEST(SynthesizeTest, ZeroExcitationIsSilent) {
  const auto params = RandomParams(30, 9);
  auto plan = MakeExcitationPlan(params);
  for (auto& s : plan.voiced) std::fill(s.begin(), s.end(), 0.0);
  for (auto& s : plan.unvoiced) std::fill(s.begin(), s.end(), 0.0);
  const auto w = Synthesize(plan, params);
  EXPECT_EQ(w.size(), 30u * 80);
  for (double v : w.samples()) ASSERT_EQ(v, 0.0);
}

TEST(SynthesizeTest, PeakNormalized) {
  const auto params = RandomParams(50, 2);
  const auto w = Synthesize(MakeExcitationPlan(params), params);
  double peak = 0.0;
  for (double v : w.samples()) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, kOutputPeak, 1e-12);
}

TEST(SynthesizeTest, FlatEnvelopeIsIdentityFilter) {
  // With c = 0 the filter is unity, so stationary voiced excitation keeps its
  // unit RMS away from the edges.
  const auto params = FlatParams(100, 125.0, 4000.0);
  auto plan = MakeExcitationPlan(params);
  for (auto& s : plan.unvoiced) std::fill(s.begin(), s.end(), 0.0);
  const auto y = SynthesizeRaw(plan, params);
  EXPECT_NEAR(testing::Rms(std::span<const double>(y).subspan(800, 6400)), 1.0, 0.05);
}

TEST(CopySynthesisTest, SawtoothPitchSurvives) {
  const auto x = testing::Sawtooth(200.0, 1.0, kSr);
  const VocoderConfig config;
  const auto analysis = Analyze(Waveform(x, kSr), config);
  const auto y = Resynthesize(analysis, config.seed);
  ASSERT_EQ(y.size(), analysis.frame_count() * 80);
  const auto f0 = EstimateContF0(y, FrameSpec::Default(kSr));
  int good = 0;
  for (double v : f0) good += std::abs(v - 200.0) <= 3.0 ? 1 : 0;
  EXPECT_GE(good, static_cast<int>(0.9 * f0.size()));
}

}  // namespace
}  // namespace contvoc
