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

// Extraction of the continuous vocoder parameters (continuous F0, maximum
// voiced frequency, mel-cepstral envelope) and of per-harmonic phases.
//
// Frame k of every track is centred on sample k * hop, so a signal of L
// samples has ceil(L / hop) frames.

#ifndef CONTVOC_ANALYSIS_H_
#define CONTVOC_ANALYSIS_H_

#include <span>
#include <vector>

#include "contvoc/signal_io.h"

namespace contvoc {

inline constexpr double kDefaultF0Min = 50.0;
inline constexpr double kDefaultF0Max = 500.0;
inline constexpr int kDefaultEnvelopeOrder = 24;
inline constexpr double kDefaultWarp = 0.42;
inline constexpr double kDefaultMvfMin = 1000.0;
// Amplitude floor of the normalized spectrum; log(kSpectralFloor) is the c0 of
// a silent frame.
inline constexpr double kSpectralFloor = 1e-6;

using CepstrumTrack = std::vector<std::vector<double>>;

struct ContinuousParams {
  std::vector<double> cont_f0;  // Hz, positive in every frame
  std::vector<double> mvf;      // Hz, within [0, sample_rate / 2]
  CepstrumTrack envelope;       // order + 1 mel-cepstral coefficients per frame
  FrameSpec frame_spec;
  int sample_rate = 16000;
  double warp = kDefaultWarp;

  std::size_t frame_count() const { return cont_f0.size(); }
  int order() const {
    return envelope.empty() ? 0 : static_cast<int>(envelope.front().size()) - 1;
  }
  double frame_time(std::size_t k) const {
    return static_cast<double>(k) * frame_spec.hop / sample_rate;
  }

  // Structural checks: equal track lengths, positive finite F0, MVF in range,
  // consistent envelope order. Throws kShapeMismatch / kInvalidArgument.
  void Validate() const;
};

struct HarmonicFrame {
  double f0 = 0.0;
  std::vector<double> amplitudes;  // linear, >= 0
  std::vector<double> phases;      // wrapped to (-pi, pi], relative to frame centre

  int harmonic_count() const { return static_cast<int>(amplitudes.size()); }
};

// Wraps to (-pi, pi].
double WrapPhase(double phase);

// --- continuous F0 --------------------------------------------------------

// Per-frame normalized-autocorrelation pitch, measured on a low-passed copy of
// the signal, with interpolation through
// low-periodicity frames, a 3-frame median and a 25% per-frame slew limit.
// Every output value lies in [f0_min, f0_max].
// Errors: kInvalidArgument (bad range), kSignalTooShort (fewer samples than one
// period at f0_min).
std::vector<double> EstimateContF0(const Waveform& w, const FrameSpec& spec,
                                   double f0_min = kDefaultF0Min,
                                   double f0_max = kDefaultF0Max);

// --- maximum voiced frequency ---------------------------------------------

struct MvfOptions {
  double mvf_min = kDefaultMvfMin;
  double score_threshold = 0.5;
  int median_frames = 5;
  // Analysis window length in pitch periods.
  double window_periods = 6.0;
};

// Scans harmonics upward scoring 1 - (inter-harmonic energy / harmonic energy)
// over a 3-harmonic neighbourhood; the MVF is the upper edge of the lowest
// contiguous run of harmonics scoring above the threshold. A frame whose run
// reaches the top harmonic gets the Nyquist frequency.
std::vector<double> EstimateMvf(const Waveform& w, std::span<const double> f0_track,
                                const FrameSpec& spec, const MvfOptions& options = {});

// --- spectral envelope ----------------------------------------------------

struct EnvelopeOptions {
  int order = kDefaultEnvelopeOrder;
  double warp = kDefaultWarp;
  // Width of the moving average applied to the power spectrum before taking
  // the log. Ignored when `f0_track` is given, in which case the width follows
  // the frame's F0 (one harmonic spacing).
  double smoothing_hz = 200.0;
  std::span<const double> f0_track;
};

// Mel-cepstrum by cepstral truncation of the all-pass warped log amplitude
// spectrum of each windowed frame. The spectrum is normalized so that white
// noise of variance s^2 has unit-less power s^2 per bin.
CepstrumTrack EstimateEnvelope(const Waveform& w, const FrameSpec& spec,
                               int order, double warp);
CepstrumTrack EstimateEnvelope(const Waveform& w, const FrameSpec& spec,
                               const EnvelopeOptions& options);

// All-pass frequency warping of a normalized angular frequency in [0, pi].
double WarpFrequency(double omega, double warp);
double UnwarpFrequency(double warped, double warp);

// log |H(omega)| = sum_m c_m cos(m * warp(omega)).
double EnvelopeLogAmplitude(std::span<const double> cepstrum, double warp,
                            double omega);

// --- harmonic analysis ----------------------------------------------------

struct HarmonicOptions {
  // Harmonics are taken up to max(mvf, band_floor_hz), capped half a harmonic
  // spacing below Nyquist, so that noise frames still contribute enough phases
  // to the deviation.
  double band_floor_hz = 4000.0;
  double window_periods = 6.0;
};

// Amplitude and phase at h * f0 (h = 1..H) by projecting a Hann-windowed,
// frame-centred segment onto complex exponentials. A unit cosine yields
// amplitude 1. Errors: kInvalidArgument when f0 exceeds Nyquist or the tracks
// do not match the frame count.
std::vector<HarmonicFrame> HarmonicAnalysis(const Waveform& w,
                                            std::span<const double> cont_f0,
                                            std::span<const double> mvf,
                                            const FrameSpec& spec,
                                            const HarmonicOptions& options = {});

}  // namespace contvoc

#endif  // CONTVOC_ANALYSIS_H_
