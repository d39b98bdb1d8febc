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

// Internal spectral helpers: an FFTW-backed real FFT and windowed projections
// at arbitrary frequencies.

#ifndef CONTVOC_SRC_SPECTRUM_H_
#define CONTVOC_SRC_SPECTRUM_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace contvoc::internal {

// Real <-> half-complex transform of a fixed size. Execution is thread safe;
// plans are created with FFTW_ESTIMATE under a global lock.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  // `in` may be shorter than size(); the remainder is zero padded.
  std::vector<std::complex<double>> Forward(std::span<const double> in) const;
  // Inverse including the 1/size normalization.
  std::vector<double> Inverse(std::span<const std::complex<double>> in) const;

 private:
  struct Plans;
  int size_;
  std::unique_ptr<Plans> plans_;
};

int NextPowerOfTwo(int n);

// sum_n window[n] * x[n] * exp(-j * omega * (n - center)), omega in rad/sample.
std::complex<double> WindowedProjection(std::span<const double> x,
                                        std::span<const double> window,
                                        double omega, double center);

// Copies x[center - half .. center - half + length) with zero padding outside
// the signal. `center` may lie anywhere relative to the signal.
std::vector<double> CenteredSegment(std::span<const double> x, long center,
                                    int length);

}  // namespace contvoc::internal

#endif  // CONTVOC_SRC_SPECTRUM_H_
