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

#include "contvoc/analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "contvoc/error.h"
#include "spectrum.h"

namespace contvoc {

namespace {

constexpr double kPi = std::numbers::pi;

// Periodicity above which a frame anchors the F0 track, and below which it is
// fully interpolated.
constexpr double kAnchorPeriodicity = 0.75;
constexpr double kMinPeriodicity = 0.5;
constexpr double kMaxSlew = 1.25;
// Pitch is measured on a copy low-passed at max(kPitchBandHz, 2 * f0_max):
// with broadband pulses, integer lags miss a fractional period by enough to
// drop the correlation peak below that of an integer multiple of the period.
constexpr double kPitchBandHz = 1000.0;

// Zero-phase Hann-windowed sinc low-pass; output has the input's length.
std::vector<double> LowPass(std::span<const double> x, double cutoff_hz, double sample_rate) {
  const double fc = cutoff_hz / sample_rate;
  const int half = static_cast<int>(std::ceil(2.0 / fc));
  std::vector<double> taps(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double sinc = i == 0 ? 2.0 * fc : std::sin(2.0 * kPi * fc * i) / (kPi * i);
    const double hann = 0.5 + 0.5 * std::cos(kPi * i / (half + 1));
    taps[i + half] = sinc * hann;
    sum += taps[i + half];
  }
  for (double& t : taps) t /= sum;
  const long n = static_cast<long>(x.size());
  std::vector<double> y(x.size(), 0.0);
  for (long t = 0; t < n; ++t) {
    double acc = 0.0;
    const long lo = std::max(-static_cast<long>(half), -t);
    const long hi = std::min(static_cast<long>(half), n - 1 - t);
    for (long i = lo; i <= hi; ++i) acc += taps[i + half] * x[t + i];
    y[t] = acc;
  }
  return y;
}

std::vector<double> MedianFilter(std::span<const double> x, int width) {
  const int n = static_cast<int>(x.size());
  const int half = width / 2;
  std::vector<double> out(x.size());
  std::vector<double> buf;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    buf.assign(x.begin() + lo, x.begin() + hi + 1);
    auto mid = buf.begin() + buf.size() / 2;
    std::nth_element(buf.begin(), mid, buf.end());
    out[i] = *mid;
  }
  return out;
}

struct PitchCandidate {
  double f0 = 0.0;
  double periodicity = 0.0;
};

// Normalized cross-correlation over lags [lag_min, lag_max] of a segment of
// `integration + lag_max` samples; picks the shortest-lag local maximum within
// 90% of the best one.
PitchCandidate FramePitch(std::span<const double> seg, int integration, int lag_min,
                          int lag_max, int sample_rate) {
  std::vector<double> r(static_cast<std::size_t>(lag_max) + 2, -1.0);
  double e0 = 0.0;
  for (int n = 0; n < integration; ++n) e0 += seg[n] * seg[n];
  if (e0 <= 1e-12 * integration) return {};
  double et = 0.0;
  for (int n = 0; n < integration; ++n) et += seg[n + lag_min - 1] * seg[n + lag_min - 1];
  for (int lag = lag_min - 1; lag <= lag_max + 1 && lag + integration <= static_cast<int>(seg.size()); ++lag) {
    if (lag > lag_min - 1) {
      et += seg[lag + integration - 1] * seg[lag + integration - 1] -
            seg[lag - 1] * seg[lag - 1];
    }
    double acc = 0.0;
    for (int n = 0; n < integration; ++n) acc += seg[n] * seg[n + lag];
    const double denom = std::sqrt(e0 * std::max(et, 0.0));
    r[lag] = denom > 0.0 ? acc / denom : 0.0;
  }

  double best = -1.0;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1]) best = std::max(best, r[lag]);
  }
  if (best <= 0.0) return {};
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= 0.9 * best) {
      const double a = r[lag - 1], b = r[lag], c = r[lag + 1];
      const double curvature = a - 2.0 * b + c;
      double offset = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
      offset = std::clamp(offset, -0.5, 0.5);
      return {sample_rate / (lag + offset), std::min(1.0, b - 0.25 * (a - c) * offset)};
    }
  }
  return {};
}

}  // namespace

double WrapPhase(double phase) {
  double r = std::remainder(phase, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

void ContinuousParams::Validate() const {
  const std::size_t n = cont_f0.size();
  if (mvf.size() != n || envelope.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "contF0, MVF and envelope tracks must have equal frame counts");
  }
  frame_spec.Validate();
  if (sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  if (!(warp >= 0.0 && warp < 1.0)) throw Error(ErrorCode::kInvalidArgument, "warp must be in [0, 1)");
  const double nyquist = 0.5 * sample_rate;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::isfinite(cont_f0[k]) && cont_f0[k] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "contF0 must be positive and finite (frame " + std::to_string(k) + ")");
    }
    if (!(mvf[k] >= 0.0 && mvf[k] <= nyquist)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "MVF outside [0, nyquist] (frame " + std::to_string(k) + ")");
    }
    if (envelope[k].size() != envelope.front().size() || envelope[k].empty()) {
      throw Error(ErrorCode::kShapeMismatch, "inconsistent envelope order");
    }
    for (double c : envelope[k]) {
      if (!std::isfinite(c)) throw Error(ErrorCode::kNonFinite, "non-finite cepstral coefficient");
    }
  }
}

std::vector<double> EstimateContF0(const Waveform& w, const FrameSpec& spec,
                                   double f0_min, double f0_max) {
  spec.Validate();
  const int sr = w.sample_rate();
  if (!(f0_min > 0.0 && f0_min < f0_max && f0_max <= w.nyquist())) {
    throw Error(ErrorCode::kInvalidArgument, "F0 range must satisfy 0 < f0_min < f0_max <= nyquist");
  }
  if (static_cast<double>(w.size()) < sr / f0_min) {
    throw Error(ErrorCode::kSignalTooShort,
                "signal shorter than one pitch period at f0_min");
  }
  const int lag_min = std::max(2, static_cast<int>(std::floor(sr / f0_max)));
  const int lag_max = static_cast<int>(std::ceil(sr / f0_min));
  const int integration = std::max(spec.window_len, lag_max);
  const int seg_len = integration + lag_max + 2;

  const double cutoff = std::max(kPitchBandHz, 2.0 * f0_max);
  const std::vector<double> band =
      cutoff < 0.9 * w.nyquist() ? LowPass(w.samples(), cutoff, sr)
                                 : std::vector<double>(w.samples().begin(), w.samples().end());

  const std::size_t frames = FrameCount(w.size(), spec);
  std::vector<double> raw(frames, 0.0);
  std::vector<double> weight(frames, 0.0);
  for (std::size_t k = 0; k < frames; ++k) {
    const long centre = static_cast<long>(k) * spec.hop;
    const auto seg = internal::CenteredSegment(band, centre, seg_len);
    const PitchCandidate c = FramePitch(seg, integration, lag_min, lag_max, sr);
    raw[k] = c.f0;
    if (c.f0 > 0.0) {
      weight[k] = std::clamp((c.periodicity - kMinPeriodicity) /
                                 (kAnchorPeriodicity - kMinPeriodicity),
                             0.0, 1.0);
    }
  }

  // Demote anchors that disagree with their anchored neighbourhood (octave
  // slips and spurious peaks).
  std::vector<double> demoted = weight;
  for (std::size_t k = 0; k < frames; ++k) {
    if (weight[k] < 1.0) continue;
    std::vector<double> local;
    for (std::size_t j = (k >= 3 ? k - 3 : 0); j < std::min(frames, k + 4); ++j) {
      if (weight[j] >= 1.0) local.push_back(raw[j]);
    }
    if (local.size() < 3) continue;
    std::nth_element(local.begin(), local.begin() + local.size() / 2, local.end());
    const double med = local[local.size() / 2];
    if (std::abs(raw[k] / med - 1.0) > 0.2) demoted[k] = 0.0;
  }
  weight = std::move(demoted);

  std::vector<std::size_t> anchors;
  for (std::size_t k = 0; k < frames; ++k) {
    if (weight[k] >= 1.0) anchors.push_back(k);
  }
  if (anchors.empty()) {
    for (std::size_t k = 0; k < frames; ++k) {
      if (weight[k] > 0.0) anchors.push_back(k);
    }
  }

  std::vector<double> interp(frames);
  if (anchors.empty()) {
    std::vector<double> candidates;
    for (double f : raw) {
      if (f > 0.0) candidates.push_back(f);
    }
    double fill = std::sqrt(f0_min * f0_max);
    if (!candidates.empty()) {
      std::nth_element(candidates.begin(), candidates.begin() + candidates.size() / 2,
                       candidates.end());
      fill = candidates[candidates.size() / 2];
    }
    std::fill(interp.begin(), interp.end(), std::clamp(fill, f0_min, f0_max));
  } else {
    std::size_t next = 0;
    for (std::size_t k = 0; k < frames; ++k) {
      while (next < anchors.size() && anchors[next] < k) ++next;
      if (next == anchors.size()) {
        interp[k] = raw[anchors.back()];
      } else if (anchors[next] == k || next == 0) {
        interp[k] = raw[anchors[next]];
      } else {
        const std::size_t a = anchors[next - 1], b = anchors[next];
        const double t = static_cast<double>(k - a) / static_cast<double>(b - a);
        interp[k] = (1.0 - t) * raw[a] + t * raw[b];
      }
    }
  }

  std::vector<double> blended(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    blended[k] = weight[k] * raw[k] + (1.0 - weight[k]) * interp[k];
  }
  std::vector<double> f0 = MedianFilter(blended, 3);
  for (std::size_t k = 0; k < frames; ++k) {
    if (k > 0) f0[k] = std::clamp(f0[k], f0[k - 1] / kMaxSlew, f0[k - 1] * kMaxSlew);
    f0[k] = std::clamp(f0[k], f0_min, f0_max);
  }
  return f0;
}

std::vector<double> EstimateMvf(const Waveform& w, std::span<const double> f0_track,
                                const FrameSpec& spec, const MvfOptions& options) {
  spec.Validate();
  const std::size_t frames = FrameCount(w.size(), spec);
  if (f0_track.size() != frames) {
    throw Error(ErrorCode::kShapeMismatch, "F0 track does not match the frame count");
  }
  const double sr = w.sample_rate();
  const double nyquist = w.nyquist();
  const double mvf_min = std::clamp(options.mvf_min, 0.0, nyquist);

  std::vector<double> mvf(frames, mvf_min);
  for (std::size_t k = 0; k < frames; ++k) {
    const double f0 = f0_track[k];
    if (!(f0 > 0.0) || f0 >= nyquist) continue;
    const int top = static_cast<int>(std::floor(nyquist / f0 - 0.5));
    if (top < 1) continue;
    const int len = std::max(8, static_cast<int>(std::lround(options.window_periods * sr / f0)));
    const auto window = MakeWindow(WindowKind::kHann, len);
    const auto seg = internal::CenteredSegment(w.samples(), static_cast<long>(k) * spec.hop, len);
    const double centre = len / 2;
    const double omega0 = 2.0 * kPi * f0 / sr;

    std::vector<double> harmonic(top + 2, 0.0), inter(top + 2, 0.0);
    std::vector<double> half(top + 2, 0.0);  // energy at (h + 0.5) f0, h = 0..top
    for (int h = 0; h <= top; ++h) {
      half[h] = std::norm(internal::WindowedProjection(seg, window, (h + 0.5) * omega0, centre));
    }
    for (int h = 1; h <= top; ++h) {
      harmonic[h] = std::norm(internal::WindowedProjection(seg, window, h * omega0, centre));
      inter[h] = 0.5 * (half[h - 1] + half[h]);
    }

    int last = 0;
    for (int h = 1; h <= top; ++h) {
      double e = 0.0, i = 0.0;
      for (int j = std::max(1, h - 1); j <= std::min(top, h + 1); ++j) {
        e += harmonic[j];
        i += inter[j];
      }
      const double score = e > 0.0 ? 1.0 - i / e : 0.0;
      if (score <= options.score_threshold) break;
      last = h;
    }
    if (last == top) {
      mvf[k] = nyquist;
    } else if (last > 0) {
      mvf[k] = std::clamp((last + 0.5) * f0, mvf_min, nyquist);
    }
  }
  if (options.median_frames > 1) mvf = MedianFilter(mvf, options.median_frames);
  return mvf;
}

double WarpFrequency(double omega, double warp) {
  return omega + 2.0 * std::atan2(warp * std::sin(omega), 1.0 - warp * std::cos(omega));
}

double UnwarpFrequency(double warped, double warp) {
  return WarpFrequency(warped, -warp);
}

double EnvelopeLogAmplitude(std::span<const double> cepstrum, double warp, double omega) {
  const double wt = WarpFrequency(omega, warp);
  double acc = 0.0;
  for (std::size_t m = 0; m < cepstrum.size(); ++m) acc += cepstrum[m] * std::cos(m * wt);
  return acc;
}

CepstrumTrack EstimateEnvelope(const Waveform& w, const FrameSpec& spec, int order,
                               double warp) {
  EnvelopeOptions options;
  options.order = order;
  options.warp = warp;
  return EstimateEnvelope(w, spec, options);
}

CepstrumTrack EstimateEnvelope(const Waveform& w, const FrameSpec& spec,
                               const EnvelopeOptions& options) {
  spec.Validate();
  if (options.order < 1) throw Error(ErrorCode::kInvalidArgument, "envelope order must be >= 1");
  if (!(options.warp >= 0.0 && options.warp < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "warp must be in [0, 1)");
  }
  const std::size_t frames = FrameCount(w.size(), spec);
  if (!options.f0_track.empty() && options.f0_track.size() != frames) {
    throw Error(ErrorCode::kShapeMismatch, "F0 track does not match the frame count");
  }

  // Centre frames on k * hop by padding half a window in front.
  std::vector<double> padded(static_cast<std::size_t>(spec.window_len / 2), 0.0);
  padded.insert(padded.end(), w.samples().begin(), w.samples().end());
  const auto windowed = SegmentFrames(Waveform(std::move(padded), w.sample_rate()), spec);
  const auto window = MakeWindow(spec.window_kind, spec.window_len);
  const double window_power = std::inner_product(window.begin(), window.end(), window.begin(), 0.0);

  const int fft_size = internal::NextPowerOfTwo(std::max(1024, 2 * spec.window_len));
  const internal::RealFft fft(fft_size);
  const int bins = fft.bins();
  const double bin_hz = static_cast<double>(w.sample_rate()) / fft_size;
  const double floor_power = kSpectralFloor * kSpectralFloor;

  constexpr int kWarpedPoints = 512;
  std::vector<double> source_bin(kWarpedPoints + 1);
  for (int j = 0; j <= kWarpedPoints; ++j) {
    const double omega = UnwarpFrequency(kPi * j / kWarpedPoints, options.warp);
    source_bin[j] = std::clamp(omega / kPi * (bins - 1), 0.0, bins - 1.0);
  }

  CepstrumTrack envelope(frames);
  std::vector<double> power(bins), smoothed(bins), log_amp(kWarpedPoints + 1);
  for (std::size_t k = 0; k < frames; ++k) {
    const auto spectrum = fft.Forward(windowed[k]);
    for (int b = 0; b < bins; ++b) power[b] = std::norm(spectrum[b]) / window_power;

    const double width_hz = options.f0_track.empty() ? options.smoothing_hz : options.f0_track[k];
    const int half = static_cast<int>(std::lround(0.5 * width_hz / bin_hz));
    if (half > 0) {
      // Even reflection about DC and Nyquist keeps flat spectra flat.
      auto at = [&](int b) {
        const int period = 2 * (bins - 1);
        b = ((b % period) + period) % period;
        if (b >= bins) b = period - b;
        return power[b];
      };
      for (int b = 0; b < bins; ++b) {
        double acc = 0.0;
        for (int d = -half; d <= half; ++d) acc += at(b + d);
        smoothed[b] = acc / (2 * half + 1);
      }
    } else {
      smoothed = power;
    }

    for (int j = 0; j <= kWarpedPoints; ++j) {
      const double pos = source_bin[j];
      const int b0 = std::min(static_cast<int>(pos), bins - 2);
      const double t = pos - b0;
      const double p = (1.0 - t) * smoothed[b0] + t * smoothed[b0 + 1];
      log_amp[j] = 0.5 * std::log(std::max(p, floor_power));
    }

    // Cosine series on the warped axis by the trapezoid rule (DCT-I).
    auto& c = envelope[k];
    c.assign(static_cast<std::size_t>(options.order) + 1, 0.0);
    for (int m = 0; m <= options.order; ++m) {
      double acc = 0.5 * (log_amp[0] + log_amp[kWarpedPoints] * (m % 2 == 0 ? 1.0 : -1.0));
      for (int j = 1; j < kWarpedPoints; ++j) {
        acc += log_amp[j] * std::cos(kPi * m * j / kWarpedPoints);
      }
      c[m] = acc / kWarpedPoints * (m == 0 ? 1.0 : 2.0);
    }
  }
  return envelope;
}

std::vector<HarmonicFrame> HarmonicAnalysis(const Waveform& w,
                                            std::span<const double> cont_f0,
                                            std::span<const double> mvf,
                                            const FrameSpec& spec,
                                            const HarmonicOptions& options) {
  spec.Validate();
  const std::size_t frames = FrameCount(w.size(), spec);
  if (cont_f0.size() != frames || mvf.size() != frames) {
    throw Error(ErrorCode::kShapeMismatch, "tracks do not match the frame count");
  }
  const double sr = w.sample_rate();
  const double nyquist = w.nyquist();
  std::vector<HarmonicFrame> out(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    const double f0 = cont_f0[k];
    if (!(f0 > 0.0) || f0 > nyquist) {
      throw Error(ErrorCode::kInvalidArgument,
                  "F0 must lie in (0, nyquist] (frame " + std::to_string(k) + ")");
    }
    // Harmonics within half a spacing of Nyquist overlap their mirror image.
    const double band = std::min(std::max(mvf[k], options.band_floor_hz), nyquist - 0.5 * f0);
    const int count = std::max(1, static_cast<int>(std::floor(band / f0)));
    const int len = std::max(8, static_cast<int>(std::lround(options.window_periods * sr / f0)));
    const auto window = MakeWindow(WindowKind::kHann, len);
    const double gain = 2.0 / std::accumulate(window.begin(), window.end(), 0.0);
    const auto seg = internal::CenteredSegment(w.samples(), static_cast<long>(k) * spec.hop, len);
    const double centre = len / 2;

    HarmonicFrame& frame = out[k];
    frame.f0 = f0;
    frame.amplitudes.resize(count);
    frame.phases.resize(count);
    for (int h = 1; h <= count; ++h) {
      const auto p = internal::WindowedProjection(seg, window, 2.0 * kPi * h * f0 / sr, centre);
      frame.amplitudes[h - 1] = gain * std::abs(p);
      frame.phases[h - 1] = WrapPhase(std::arg(p));
    }
  }
  return out;
}

}  // namespace contvoc
