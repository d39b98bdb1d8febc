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

// Audio file I/O, framing and windowing shared by the DSP modules.

#ifndef CONTVOC_SIGNAL_IO_H_
#define CONTVOC_SIGNAL_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace contvoc {

// Mono audio. Samples are finite; files loaded from disk are additionally
// bounded by 1 in magnitude.
class Waveform {
 public:
  // Throws kInvalidArgument for a non-positive rate and kNonFinite for
  // NaN/Inf samples.
  Waveform(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double nyquist() const { return 0.5 * sample_rate_; }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

enum class WindowKind { kRectangular, kHann };

std::string_view WindowKindName(WindowKind kind);
WindowKind ParseWindowKind(std::string_view name);

// Periodic windows, so that Hann at hop = len / k (k >= 2) sums to a constant.
std::vector<double> MakeWindow(WindowKind kind, int length);

struct FrameSpec {
  int hop = 80;
  int window_len = 400;
  WindowKind window_kind = WindowKind::kHann;

  // Default analysis framing: 5 ms hop, 25 ms Hann window.
  static FrameSpec Default(int sample_rate);
  static FrameSpec FromMilliseconds(int sample_rate, double hop_ms,
                                    double window_ms,
                                    WindowKind kind = WindowKind::kHann);

  // Throws kInvalidArgument unless 0 < hop <= window_len.
  void Validate() const;

  friend bool operator==(const FrameSpec&, const FrameSpec&) = default;
};

// ceil(num_samples / hop).
std::size_t FrameCount(std::size_t num_samples, const FrameSpec& spec);

// Frame k covers samples [k*hop, k*hop + window_len), zero padded past the end
// of the signal and multiplied by the window.
std::vector<std::vector<double>> SegmentFrames(const Waveform& w,
                                               const FrameSpec& spec);

// Reads linear PCM RIFF/WAVE (8/16/24/32-bit integer). Multichannel input is
// averaged to mono; integer samples are scaled by 1/2^(bits-1).
// Errors: kFileNotFound, kUnsupportedFormat (not RIFF/WAVE or not integer
// PCM), kEmptyAudio (no sample frames).
Waveform LoadWaveform(const std::filesystem::path& path);

// Writes 16-bit PCM mono. Samples are rounded to round(x * 32768) and clipped
// to [-32768, 32767]. Errors: kIo.
void SaveWaveform(const Waveform& w, const std::filesystem::path& path);

}  // namespace contvoc

#endif  // CONTVOC_SIGNAL_IO_H_
