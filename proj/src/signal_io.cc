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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "contvoc/error.h"

namespace contvoc {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadLe(const unsigned char* p, int bytes) {
  std::uint32_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void PutLe(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<char>(v & 0xFF));
    v >>= 8;
  }
}

// Decodes one little-endian integer PCM sample into [-1, 1).
double DecodeSample(const unsigned char* p, int bytes) {
  if (bytes == 1) return (static_cast<int>(p[0]) - 128) / 128.0;
  std::uint32_t raw = ReadLe(p, bytes);
  const int bits = 8 * bytes;
  std::int64_t value = raw;
  if (bits < 32 && (raw & (1u << (bits - 1)))) value -= (std::int64_t{1} << bits);
  if (bits == 32) value = static_cast<std::int32_t>(raw);
  return static_cast<double>(value) / static_cast<double>(std::int64_t{1} << (bits - 1));
}

}  // namespace

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  for (double s : samples_) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFinite, "waveform contains a non-finite sample");
    }
  }
}

std::string_view WindowKindName(WindowKind kind) {
  switch (kind) {
    case WindowKind::kRectangular: return "rectangular";
    case WindowKind::kHann: return "hann";
  }
  return "hann";
}

WindowKind ParseWindowKind(std::string_view name) {
  if (name == "rectangular") return WindowKind::kRectangular;
  if (name == "hann") return WindowKind::kHann;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown window kind '" + std::string(name) + "'");
}

std::vector<double> MakeWindow(WindowKind kind, int length) {
  std::vector<double> w(static_cast<std::size_t>(std::max(length, 0)), 1.0);
  if (kind == WindowKind::kHann) {
    for (int i = 0; i < length; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
    }
  }
  return w;
}

FrameSpec FrameSpec::Default(int sample_rate) {
  return FromMilliseconds(sample_rate, 5.0, 25.0, WindowKind::kHann);
}

FrameSpec FrameSpec::FromMilliseconds(int sample_rate, double hop_ms,
                                      double window_ms, WindowKind kind) {
  FrameSpec spec;
  spec.hop = static_cast<int>(std::lround(hop_ms * 1e-3 * sample_rate));
  spec.window_len = static_cast<int>(std::lround(window_ms * 1e-3 * sample_rate));
  spec.window_kind = kind;
  spec.Validate();
  return spec;
}

void FrameSpec::Validate() const {
  if (hop <= 0 || hop > window_len) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame spec requires 0 < hop <= window_len (hop=" +
                    std::to_string(hop) + ", window_len=" +
                    std::to_string(window_len) + ")");
  }
}

std::size_t FrameCount(std::size_t num_samples, const FrameSpec& spec) {
  spec.Validate();
  const auto hop = static_cast<std::size_t>(spec.hop);
  return (num_samples + hop - 1) / hop;
}

std::vector<std::vector<double>> SegmentFrames(const Waveform& w,
                                               const FrameSpec& spec) {
  const std::size_t count = FrameCount(w.size(), spec);
  const std::vector<double> window = MakeWindow(spec.window_kind, spec.window_len);
  const auto x = w.samples();
  std::vector<std::vector<double>> frames(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto& frame = frames[k];
    frame.assign(window.size(), 0.0);
    const std::size_t start = k * static_cast<std::size_t>(spec.hop);
    const std::size_t avail = std::min(window.size(), x.size() - start);
    for (std::size_t i = 0; i < avail; ++i) frame[i] = x[start + i] * window[i];
  }
  return frames;
}

Waveform LoadWaveform(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = ReadLe(chunk + 4, 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) {
        throw Error(ErrorCode::kUnsupportedFormat, "truncated fmt chunk");
      }
      std::uint16_t format = ReadLe(chunk + 8, 2);
      channels = static_cast<int>(ReadLe(chunk + 10, 2));
      sample_rate = static_cast<int>(ReadLe(chunk + 12, 4));
      bits = static_cast<int>(ReadLe(chunk + 22, 2));
      if (format == kFormatExtensible && avail >= 26) {
        // First two bytes of the SubFormat GUID carry the actual format tag.
        format = ReadLe(chunk + 8 + 24, 2);
      }
      if (format != kFormatPcm) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    "only integer linear PCM is supported (format tag " +
                        std::to_string(format) + ")");
      }
      if (bits != 8 && bits != 16 && bits != 24 && bits != 32) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    "unsupported bit depth " + std::to_string(bits));
      }
      if (channels <= 0 || sample_rate <= 0) {
        throw Error(ErrorCode::kUnsupportedFormat, "invalid fmt chunk");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "missing fmt or data chunk: " + path.string());
  }

  const int bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = static_cast<std::size_t>(bytes_per_sample) * channels;
  const std::size_t num_frames = data_size / frame_bytes;
  if (num_frames == 0) {
    throw Error(ErrorCode::kEmptyAudio, "no audio samples in " + path.string());
  }
  std::vector<double> mono(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      acc += DecodeSample(data + i * frame_bytes + c * bytes_per_sample,
                          bytes_per_sample);
    }
    mono[i] = acc / channels;
  }
  return Waveform(std::move(mono), sample_rate);
}

void SaveWaveform(const Waveform& w, const std::filesystem::path& path) {
  const auto samples = w.samples();
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutLe(out, 36 + data_bytes, 4);
  out += "WAVEfmt ";
  PutLe(out, 16, 4);
  PutLe(out, kFormatPcm, 2);
  PutLe(out, 1, 2);
  PutLe(out, static_cast<std::uint32_t>(w.sample_rate()), 4);
  PutLe(out, static_cast<std::uint32_t>(w.sample_rate()) * 2, 4);
  PutLe(out, 2, 2);
  PutLe(out, 16, 2);
  out += "data";
  PutLe(out, data_bytes, 4);
  for (double s : samples) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutLe(out, static_cast<std::uint32_t>(static_cast<std::int16_t>(q)) & 0xFFFF, 2);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace contvoc
