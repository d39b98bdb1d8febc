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


// Synthetic test signals with known ground truth.

#ifndef CONTVOC_TESTS_SUPPORT_SIGNALS_H_
#define CONTVOC_TESTS_SUPPORT_SIGNALS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace contvoc::testing {

inline constexpr double kPi = std::numbers::pi;

// Sum of unit cosines at h * f0 for every harmonic at or below max_hz, scaled
// by `gain`. All harmonics share phase zero at t = start_phase_s.
inline std::vector<double> HarmonicSum(double f0, double max_hz, double seconds, int sample_rate,
                                       double gain = 0.1, double start_phase_s = 0.0) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  std::vector<double> x(n, 0.0);
  for (int h = 1; h * f0 <= max_hz && h * f0 < 0.5 * sample_rate; ++h) {
    const double w = 2.0 * kPi * h * f0 / sample_rate;
    const double t0 = start_phase_s * sample_rate;
    for (std::size_t i = 0; i < n; ++i) x[i] += gain * std::cos(w * (static_cast<double>(i) - t0));
  }
  return x;
}

// Band-limited sawtooth sum_h sin(h w t) / h. When `envelope` is non-null each
// harmonic amplitude is multiplied by envelope(h * f0) (zero-phase shaping).
template <typename Envelope>
std::vector<double> ShapedSawtooth(std::span<const double> f0_per_sample, int sample_rate,
                                   double gain, Envelope envelope) {
  const double nyquist = 0.5 * sample_rate;
  std::vector<double> x(f0_per_sample.size(), 0.0);
  double phase = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f0 = f0_per_sample[i];
    double acc = 0.0;
    for (int h = 1; h * f0 < nyquist; ++h) acc += envelope(h * f0) * std::sin(h * phase) / h;
    x[i] = gain * acc;
    phase += 2.0 * kPi * f0 / sample_rate;
    if (phase > 2.0 * kPi) phase -= 2.0 * kPi;
  }
  return x;
}

inline std::vector<double> Sawtooth(double f0, double seconds, int sample_rate,
                                    double gain = 0.2) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  const std::vector<double> f0s(n, f0);
  return ShapedSawtooth(f0s, sample_rate, gain, [](double) { return 1.0; });
}

// Magnitude response of a cascade of second-order resonances (centre, bandwidth
// in Hz), normalized to 1 at DC.
struct FormantEnvelope {
  std::vector<std::pair<double, double>> formants;
  int sample_rate = 16000;

  double operator()(double hz) const {
    double gain = 1.0;
    for (const auto& [centre, bandwidth] : formants) {
      const double r = std::exp(-kPi * bandwidth / sample_rate);
      const double theta = 2.0 * kPi * centre / sample_rate;
      const double w = 2.0 * kPi * hz / sample_rate;
      auto mag = [&](double omega) {
        // |1 / ((1 - r e^{j(theta-omega)}) (1 - r e^{-j(theta+omega)}))|
        const double a = 1.0 - 2.0 * r * std::cos(theta - omega) + r * r;
        const double b = 1.0 - 2.0 * r * std::cos(theta + omega) + r * r;
        return 1.0 / std::sqrt(a * b);
      };
      gain *= mag(w) / mag(0.0);
    }
    return gain;
  }
};

// Five vowel-like formant patterns (F1..F3 with bandwidths).
inline std::vector<FormantEnvelope> VowelEnvelopes(int sample_rate = 16000) {
  return {
      {{{730, 90}, {1090, 110}, {2440, 170}}, sample_rate},  // a
      {{{270, 60}, {2290, 100}, {3010, 120}}, sample_rate},  // i
      {{{300, 60}, {870, 90}, {2240, 150}}, sample_rate},    // u
      {{{530, 70}, {1840, 100}, {2480, 160}}, sample_rate},  // e
      {{{570, 80}, {840, 90}, {2410, 160}}, sample_rate},    // o
  };
}

inline std::vector<double> WhiteNoise(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

inline double Rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

// x + white noise scaled to the requested SNR in dB.
inline std::vector<double> AddNoise(std::span<const double> x, double snr_db, std::uint64_t seed) {
  auto noise = WhiteNoise(x.size(), 1.0, seed);
  const double scale = Rms(x) / Rms(noise) * std::pow(10.0, -snr_db / 20.0);
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * noise[i];
  return y;
}

inline double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace contvoc::testing

#endif  // CONTVOC_TESTS_SUPPORT_SIGNALS_H_
