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

#include "spectrum.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "contvoc/error.h"

namespace contvoc::internal {

namespace {

std::mutex& PlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwRealDeleter {
  void operator()(double* p) const { fftw_free(p); }
};
struct FftwComplexDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(int size) : size_(size), plans_(std::make_unique<Plans>()) {
  if (size <= 0) throw Error(ErrorCode::kInvalidArgument, "FFT size must be positive");
  std::unique_ptr<double, FftwRealDeleter> real(fftw_alloc_real(size_));
  std::unique_ptr<fftw_complex, FftwComplexDeleter> cplx(fftw_alloc_complex(bins()));
  std::lock_guard<std::mutex> lock(PlannerMutex());
  plans_->forward = fftw_plan_dft_r2c_1d(size_, real.get(), cplx.get(), FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(size_, cplx.get(), real.get(), FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw Error(ErrorCode::kInternal, "FFTW planning failed");
  }
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

std::vector<std::complex<double>> RealFft::Forward(std::span<const double> in) const {
  std::unique_ptr<double, FftwRealDeleter> real(fftw_alloc_real(size_));
  std::unique_ptr<fftw_complex, FftwComplexDeleter> cplx(fftw_alloc_complex(bins()));
  const std::size_t n = std::min<std::size_t>(in.size(), size_);
  std::copy_n(in.begin(), n, real.get());
  std::fill(real.get() + n, real.get() + size_, 0.0);
  fftw_execute_dft_r2c(plans_->forward, real.get(), cplx.get());
  std::vector<std::complex<double>> out(bins());
  for (int k = 0; k < bins(); ++k) out[k] = {cplx.get()[k][0], cplx.get()[k][1]};
  return out;
}

std::vector<double> RealFft::Inverse(std::span<const std::complex<double>> in) const {
  if (static_cast<int>(in.size()) != bins()) {
    throw Error(ErrorCode::kShapeMismatch, "inverse FFT expects size/2+1 bins");
  }
  std::unique_ptr<double, FftwRealDeleter> real(fftw_alloc_real(size_));
  std::unique_ptr<fftw_complex, FftwComplexDeleter> cplx(fftw_alloc_complex(bins()));
  for (int k = 0; k < bins(); ++k) {
    cplx.get()[k][0] = in[k].real();
    cplx.get()[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(plans_->inverse, cplx.get(), real.get());
  std::vector<double> out(real.get(), real.get() + size_);
  const double scale = 1.0 / size_;
  for (double& v : out) v *= scale;
  return out;
}

int NextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::complex<double> WindowedProjection(std::span<const double> x,
                                        std::span<const double> window,
                                        double omega, double center) {
  const std::size_t n = std::min(x.size(), window.size());
  // Rotating phasor, renormalized every block to keep drift negligible.
  const std::complex<double> step = std::polar(1.0, -omega);
  std::complex<double> phasor = std::polar(1.0, omega * center);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & 255) == 0) phasor = std::polar(1.0, -omega * (static_cast<double>(i) - center));
    acc += (window[i] * x[i]) * phasor;
    phasor *= step;
  }
  return acc;
}

std::vector<double> CenteredSegment(std::span<const double> x, long center,
                                    int length) {
  std::vector<double> seg(static_cast<std::size_t>(length), 0.0);
  const long start = center - length / 2;
  const long lo = std::max(0L, start);
  const long hi = std::min(static_cast<long>(x.size()), start + length);
  for (long i = lo; i < hi; ++i) seg[i - start] = x[i];
  return seg;
}

}  // namespace contvoc::internal
