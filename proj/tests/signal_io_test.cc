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


#include "contvoc/signal_io.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "contvoc/error.h"
#include "support/error_code.h"
#include "support/files.h"
#include "support/signals.h"

namespace contvoc {
namespace {

using testing::CodeOf;
using testing::ScratchDir;
using testing::WavBytes;
using testing::WriteBytes;

TEST(WaveformTest, RejectsBadRateAndNonFiniteSamples) {
  EXPECT_EQ(CodeOf([] { Waveform({0.0}, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { Waveform({0.0, NAN}, 16000); }), ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([] { Waveform({INFINITY}, 16000); }), ErrorCode::kNonFinite);
}

TEST(LoadWaveformTest, OneSecondMono16) {
  ScratchDir dir("io");
  std::vector<std::int64_t> codes(16000);
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = static_cast<std::int64_t>(i % 2000) - 1000;
  WriteBytes(dir / "a.wav", WavBytes(codes, 1, 16, 16000));
  const Waveform w = LoadWaveform(dir / "a.wav");
  EXPECT_EQ(w.size(), 16000u);
  EXPECT_EQ(w.sample_rate(), 16000);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    ASSERT_EQ(w.samples()[i], static_cast<double>(codes[i]) / 32768.0);
  }
}

TEST(LoadWaveformTest, StereoAntiphaseAveragesToSilence) {
  ScratchDir dir("io");
  std::vector<std::int64_t> codes;
  for (int i = 0; i < 500; ++i) {
    const std::int64_t x = (i * 37) % 30000 - 15000;
    codes.push_back(x);
    codes.push_back(-x);
  }
  WriteBytes(dir / "s.wav", WavBytes(codes, 2, 16, 16000));
  const Waveform w = LoadWaveform(dir / "s.wav");
  ASSERT_EQ(w.size(), 500u);
  for (double v : w.samples()) EXPECT_EQ(v, 0.0);
}

TEST(LoadWaveformTest, DecodesOtherIntegerDepths) {
  ScratchDir dir("io");
  WriteBytes(dir / "8.wav", WavBytes({-128, 0, 64}, 1, 8, 8000));
  WriteBytes(dir / "24.wav", WavBytes({-(1 << 23), 1 << 22, 1}, 1, 24, 8000));
  WriteBytes(dir / "32.wav", WavBytes({INT32_MIN, 1 << 30, -1}, 1, 32, 8000));
  WriteBytes(dir / "ext.wav", WavBytes({16384, -16384}, 1, 16, 8000, 0xFFFE));
  const auto w8 = LoadWaveform(dir / "8.wav");
  EXPECT_EQ(w8.samples()[0], -1.0);
  EXPECT_EQ(w8.samples()[1], 0.0);
  EXPECT_EQ(w8.samples()[2], 0.5);
  const auto w24 = LoadWaveform(dir / "24.wav");
  EXPECT_EQ(w24.samples()[0], -1.0);
  EXPECT_EQ(w24.samples()[1], 0.5);
  EXPECT_EQ(w24.samples()[2], 1.0 / (1 << 23));
  const auto w32 = LoadWaveform(dir / "32.wav");
  EXPECT_EQ(w32.samples()[0], -1.0);
  EXPECT_EQ(w32.samples()[1], 0.5);
  const auto ext = LoadWaveform(dir / "ext.wav");
  EXPECT_EQ(ext.samples()[0], 0.5);
  EXPECT_EQ(ext.samples()[1], -0.5);
}

TEST(LoadWaveformTest, DistinctErrors) {
  ScratchDir dir("io");
  EXPECT_EQ(CodeOf([&] { LoadWaveform(dir / "missing.wav"); }), ErrorCode::kFileNotFound);
  WriteBytes(dir / "float.wav", WavBytes({0, 0}, 1, 32, 16000, 3));
  EXPECT_EQ(CodeOf([&] { LoadWaveform(dir / "float.wav"); }), ErrorCode::kUnsupportedFormat);
  WriteBytes(dir / "junk.wav", {'n', 'o', 't', ' ', 'a', ' ', 'w', 'a', 'v', 'e', '!', '!'});
  EXPECT_EQ(CodeOf([&] { LoadWaveform(dir / "junk.wav"); }), ErrorCode::kUnsupportedFormat);
  WriteBytes(dir / "empty.wav", WavBytes({}, 1, 16, 16000));
  EXPECT_EQ(CodeOf([&] { LoadWaveform(dir / "empty.wav"); }), ErrorCode::kEmptyAudio);
}

TEST(SaveWaveformTest, RoundTripWithinOneQuantizationStep) {
  ScratchDir dir("io");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(4000);
  for (double& v : x) v = dist(rng);
  SaveWaveform(Waveform(x, 22050), dir / "r.wav");
  const Waveform back = LoadWaveform(dir / "r.wav");
  ASSERT_EQ(back.size(), x.size());
  EXPECT_EQ(back.sample_rate(), 22050);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_LE(std::abs(back.samples()[i] - x[i]), 1.0 / 32768.0);
  }
}

TEST(SaveWaveformTest, ZerosAndFullScale) {
  ScratchDir dir("io");
  SaveWaveform(Waveform(std::vector<double>(100, 0.0), 16000), dir / "z.wav");
  const auto z = LoadWaveform(dir / "z.wav");
  for (double v : z.samples()) EXPECT_EQ(v, 0.0);
  SaveWaveform(Waveform({1.0, -1.0, 2.0}, 16000), dir / "f.wav");
  const auto f = LoadWaveform(dir / "f.wav");
  EXPECT_EQ(f.samples()[0], 32767.0 / 32768.0);
  EXPECT_EQ(f.samples()[1], -1.0);
  EXPECT_EQ(f.samples()[2], 32767.0 / 32768.0);
}

TEST(SaveWaveformTest, UnwritablePathIsIoError) {
  EXPECT_EQ(CodeOf([] { SaveWaveform(Waveform({0.0}, 16000), "/nonexistent_dir/x/y.wav"); }),
            ErrorCode::kIo);
}

TEST(FrameSpecTest, DefaultsAndValidation) {
  const FrameSpec d = FrameSpec::Default(16000);
  EXPECT_EQ(d.hop, 80);
  EXPECT_EQ(d.window_len, 400);
  EXPECT_EQ(d.window_kind, WindowKind::kHann);
  EXPECT_EQ(FrameSpec::FromMilliseconds(16000, 5.0, 25.0), d);
  EXPECT_EQ(FrameSpec::Default(48000).hop, 240);
  EXPECT_EQ(CodeOf([] { FrameSpec{0, 400}.Validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { FrameSpec{401, 400}.Validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW((FrameSpec{400, 400}.Validate()));
}

TEST(FrameCountTest, CeilOfLengthOverHop) {
  EXPECT_EQ(FrameCount(160, FrameSpec::Default(16000)), 2u);
  EXPECT_EQ(FrameCount(16000, FrameSpec::Default(16000)), 200u);
  EXPECT_EQ(FrameCount(16001, FrameSpec::Default(16000)), 201u);
  EXPECT_EQ(FrameCount(1, FrameSpec::Default(16000)), 1u);
}

TEST(SegmentFramesTest, ConstantSignalRectangularWindow) {
  const FrameSpec spec{80, 200, WindowKind::kRectangular};
  const Waveform w(std::vector<double>(1000, 1.0), 16000);
  const auto frames = SegmentFrames(w, spec);
  ASSERT_EQ(frames.size(), 13u);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    ASSERT_EQ(frames[k].size(), 200u);
    for (int i = 0; i < 200; ++i) {
      const std::size_t t = k * 80 + i;
      ASSERT_EQ(frames[k][i], t < 1000 ? 1.0 : 0.0) << "frame " << k << " sample " << i;
    }
  }
}

TEST(SegmentFramesTest, HopEqualWindowPartitionsSignal) {
  const FrameSpec spec{100, 100, WindowKind::kRectangular};
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * i);
  const auto frames = SegmentFrames(Waveform(x, 16000), spec);
  ASSERT_EQ(frames.size(), 10u);
  std::vector<double> joined;
  for (const auto& f : frames) joined.insert(joined.end(), f.begin(), f.end());
  EXPECT_EQ(joined, x);
}

TEST(SegmentFramesTest, SixteenThousandSamplesGive200Frames) {
  EXPECT_EQ(SegmentFrames(Waveform(std::vector<double>(16000, 0.1), 16000),
                          FrameSpec::Default(16000))
                .size(),
            200u);
}

TEST(WindowTest, PeriodicHann) {
  const auto w = MakeWindow(WindowKind::kHann, 400);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[200], 1.0, 1e-15);
  for (int n = 1; n < 400; ++n) EXPECT_NEAR(w[n], w[400 - n], 1e-15);
  EXPECT_EQ(ParseWindowKind(WindowKindName(WindowKind::kRectangular)), WindowKind::kRectangular);
  EXPECT_EQ(CodeOf([] { ParseWindowKind("kaiser"); }), ErrorCode::kInvalidArgument);
}

// Default framing is Hann at hop = window / 5, whose shifted copies sum to a
// constant: overlap-adding unmodified frames reconstructs the interior.
TEST(SegmentFramesTest, OverlapAddIdentity) {
  const FrameSpec spec = FrameSpec::Default(16000);
  const auto x = testing::WhiteNoise(8000, 0.3, 11);
  const auto frames = SegmentFrames(Waveform(x, 16000), spec);
  std::vector<double> y(x.size() + spec.window_len, 0.0);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    for (int i = 0; i < spec.window_len; ++i) y[k * spec.hop + i] += frames[k][i];
  }
  const double gain = 400.0 / 80.0 * 0.5;
  double err = 0.0;
  std::size_t n = 0;
  for (std::size_t t = spec.window_len; t < x.size(); ++t, ++n) {
    const double d = y[t] / gain - x[t];
    err += d * d;
  }
  EXPECT_LT(std::sqrt(err / n), 1e-6);
}

}  // namespace
}  // namespace contvoc
