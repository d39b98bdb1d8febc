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


// Exercises the shared library through its C interface only.

#include "contvoc/contvoc.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "support/files.h"
#include "support/signals.h"

namespace {

using contvoc::testing::ScratchDir;

constexpr int kSr = 16000;

struct WaveDeleter {
  void operator()(cv_waveform* w) const { cv_waveform_free(w); }
};
struct ArchiveDeleter {
  void operator()(cv_archive* a) const { cv_archive_free(a); }
};
using WavePtr = std::unique_ptr<cv_waveform, WaveDeleter>;
using ArchivePtr = std::unique_ptr<cv_archive, ArchiveDeleter>;

WavePtr MakeWave(const std::vector<double>& x) {
  cv_waveform* w = nullptr;
  EXPECT_EQ(cv_waveform_from_samples(x.data(), x.size(), kSr, &w), CV_OK);
  return WavePtr(w);
}

ArchivePtr AnalyzeDefault(const cv_waveform* w) {
  cv_config config;
  cv_config_init(&config);
  cv_archive* a = nullptr;
  EXPECT_EQ(cv_analyze(w, &config, &a), CV_OK) << cv_last_error();
  return ArchivePtr(a);
}

TEST(CApiTest, VersionAndStatusStrings) {
  EXPECT_STREQ(cv_version(), "1.0.0");
  EXPECT_STREQ(cv_status_string(CV_OK), "ok");
  EXPECT_STRNE(cv_status_string(CV_FILE_NOT_FOUND), cv_status_string(CV_IO));
}

TEST(CApiTest, ConfigDefaults) {
  cv_config c;
  cv_config_init(&c);
  EXPECT_EQ(c.hop_ms, 5.0);
  EXPECT_EQ(c.window_ms, 25.0);
  EXPECT_EQ(c.order, 24);
  EXPECT_EQ(c.threshold, 0.77);
  EXPECT_EQ(c.mask_convention, CV_MASK_FIG1_OPERATIONAL);
  EXPECT_EQ(c.pdd_window, 11);
  EXPECT_EQ(c.seed, 42u);
}

TEST(CApiTest, ErrorsCarryCodeAndMessage) {
  cv_waveform* w = nullptr;
  EXPECT_EQ(cv_waveform_load("/nonexistent/file.wav", &w), CV_FILE_NOT_FOUND);
  EXPECT_EQ(w, nullptr);
  EXPECT_NE(std::string(cv_last_error()).find("file.wav"), std::string::npos);
  EXPECT_EQ(cv_waveform_load(nullptr, &w), CV_INVALID_ARGUMENT);
  const double bad[] = {0.0, NAN};
  EXPECT_EQ(cv_waveform_from_samples(bad, 2, kSr, &w), CV_NON_FINITE);
  EXPECT_EQ(cv_waveform_from_samples(bad, 1, 0, &w), CV_INVALID_ARGUMENT);
  cv_archive* a = nullptr;
  EXPECT_EQ(cv_archive_load("/nonexistent/archive", &a), CV_FILE_NOT_FOUND);
  double out = 0.0;
  const double c[] = {1, 1, 1}, v[] = {1, 2, 3};
  EXPECT_EQ(cv_pearson(c, v, 3, &out), CV_ZERO_VARIANCE);
  cv_waveform_free(nullptr);
  cv_archive_free(nullptr);
}

TEST(CApiTest, WaveformRoundTrip) {
  ScratchDir dir("capi");
  const auto x = contvoc::testing::Sawtooth(150.0, 0.2, kSr);
  auto w = MakeWave(x);
  EXPECT_EQ(cv_waveform_length(w.get()), x.size());
  EXPECT_EQ(cv_waveform_sample_rate(w.get()), kSr);
  const std::string path = (dir / "a.wav").string();
  ASSERT_EQ(cv_waveform_save(w.get(), path.c_str()), CV_OK);
  cv_waveform* back = nullptr;
  ASSERT_EQ(cv_waveform_load(path.c_str(), &back), CV_OK);
  WavePtr owned(back);
  ASSERT_EQ(cv_waveform_length(back), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_LE(std::abs(cv_waveform_samples(back)[i] - x[i]), 1.0 / 32768.0);
  }
}

TEST(CApiTest, AnalyzeSaveLoadSynthesize) {
  ScratchDir dir("capi");
  auto w = MakeWave(contvoc::testing::Sawtooth(180.0, 1.0, kSr));
  auto a = AnalyzeDefault(w.get());
  ASSERT_TRUE(a);
  EXPECT_EQ(cv_archive_frame_count(a.get()), 200u);
  EXPECT_EQ(cv_archive_order(a.get()), 24);
  EXPECT_EQ(cv_archive_hop(a.get()), 80);
  EXPECT_EQ(cv_archive_sample_rate(a.get()), kSr);
  const double* f0 = nullptr;
  std::size_t n = 0;
  ASSERT_EQ(cv_archive_track(a.get(), CV_TRACK_CONT_F0, &f0, &n), CV_OK);
  ASSERT_EQ(n, 200u);
  EXPECT_NEAR(f0[100], 180.0, 2.0);
  const double* c = nullptr;
  ASSERT_EQ(cv_archive_envelope(a.get(), 10, &c, &n), CV_OK);
  EXPECT_EQ(n, 25u);
  EXPECT_EQ(cv_archive_envelope(a.get(), 200, &c, &n), CV_INVALID_ARGUMENT);

  const std::string path = (dir / "arc").string();
  ASSERT_EQ(cv_archive_save(a.get(), path.c_str()), CV_OK);
  cv_archive* loaded = nullptr;
  ASSERT_EQ(cv_archive_load(path.c_str(), &loaded), CV_OK);
  ArchivePtr b(loaded);

  cv_waveform *y1 = nullptr, *y2 = nullptr;
  ASSERT_EQ(cv_synthesize(a.get(), 9, &y1), CV_OK);
  ASSERT_EQ(cv_synthesize(b.get(), 9, &y2), CV_OK);
  WavePtr o1(y1), o2(y2);
  ASSERT_EQ(cv_waveform_length(y1), 200u * 80);
  EXPECT_EQ(std::memcmp(cv_waveform_samples(y1), cv_waveform_samples(y2),
                        cv_waveform_length(y1) * sizeof(double)),
            0);

  cv_metric_report r;
  ASSERT_EQ(cv_evaluate(a.get(), b.get(), &r), CV_OK);
  EXPECT_EQ(r.mcd_db, 0.0);
  EXPECT_EQ(r.f0_rmse_hz, 0.0);
  EXPECT_EQ(r.corr, 1.0);
  EXPECT_EQ(r.frame_count, 200u);
}

TEST(CApiTest, MaskEditingAndRemask) {
  auto w = MakeWave(contvoc::testing::Sawtooth(120.0, 0.3, kSr));
  auto a = AnalyzeDefault(w.get());
  ASSERT_EQ(cv_archive_set_value(a.get(), CV_TRACK_CNM, 3, 0.25), CV_OK);
  const double* cnm = nullptr;
  std::size_t n = 0;
  ASSERT_EQ(cv_archive_track(a.get(), CV_TRACK_CNM, &cnm, &n), CV_OK);
  EXPECT_EQ(cnm[3], 0.25);
  EXPECT_EQ(cv_archive_set_value(a.get(), CV_TRACK_CNM, 3, 1.5), CV_INVALID_ARGUMENT);
  EXPECT_EQ(cv_archive_set_value(a.get(), CV_TRACK_CNM, n, 0.5), CV_INVALID_ARGUMENT);

  ASSERT_EQ(cv_archive_remask(a.get(), CV_MASK_EQ1_LITERAL, 0.4), CV_OK);
  // Accessor pointers are refreshed after the handle is modified.
  const double* pdd = nullptr;
  ASSERT_EQ(cv_archive_track(a.get(), CV_TRACK_PDD, &pdd, &n), CV_OK);
  ASSERT_EQ(cv_archive_track(a.get(), CV_TRACK_CNM, &cnm, &n), CV_OK);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(cnm[k] + pdd[k], 1.0, 1e-15);
  EXPECT_EQ(cv_archive_threshold(a.get()), 0.4);
  EXPECT_EQ(cv_archive_mask_convention(a.get()), CV_MASK_EQ1_LITERAL);
  EXPECT_EQ(cv_archive_remask(a.get(), 7, 0.4), CV_INVALID_ARGUMENT);
}

TEST(CApiTest, ScalarMetrics) {
  const double ref[] = {0, 1, 0, 0, 2, 0};
  const double test[] = {0, 1, 0, 0, 2, 0.5};
  double out = -1.0;
  ASSERT_EQ(cv_mcd(ref, test, 2, 3, &out), CV_OK);
  EXPECT_NEAR(out, 10.0 * std::sqrt(2.0) / std::log(10.0) * 0.5 / 2.0, 1e-12);
  ASSERT_EQ(cv_rmse(ref, test, 6, &out), CV_OK);
  EXPECT_NEAR(out, std::sqrt(0.25 / 6.0), 1e-15);
  ASSERT_EQ(cv_pearson(ref, ref, 6, &out), CV_OK);
  EXPECT_NEAR(out, 1.0, 1e-15);
  EXPECT_EQ(cv_rmse(ref, test, 0, &out), CV_INVALID_ARGUMENT);
  EXPECT_EQ(cv_mcd(ref, nullptr, 2, 3, &out), CV_INVALID_ARGUMENT);
}

TEST(CApiTest, Ecdf) {
  const double values[] = {3, 1, 2, 2};
  cv_ecdf* e = nullptr;
  ASSERT_EQ(cv_ecdf_create(values, 4, &e), CV_OK);
  EXPECT_EQ(cv_ecdf_size(e), 3u);
  double v = 0, c = 0;
  ASSERT_EQ(cv_ecdf_point(e, 1, &v, &c), CV_OK);
  EXPECT_EQ(v, 2.0);
  EXPECT_EQ(c, 0.75);
  EXPECT_EQ(cv_ecdf_point(e, 3, &v, &c), CV_INVALID_ARGUMENT);
  double out = 0;
  ASSERT_EQ(cv_ecdf_evaluate(e, 2.5, &out), CV_OK);
  EXPECT_EQ(out, 0.75);
  cv_ecdf_free(e);
  EXPECT_EQ(cv_ecdf_create(values, 0, &e), CV_INVALID_ARGUMENT);
}

TEST(CApiTest, ModelLifecycle) {
  ScratchDir dir("capi");
  cv_model* m = nullptr;
  ASSERT_EQ(cv_model_create(CV_CELL_LSTM, 3, 5, 2, 7, &m), CV_OK);
  EXPECT_EQ(cv_model_cell_kind(m), CV_CELL_LSTM);
  EXPECT_EQ(cv_model_input_dim(m), 3);
  EXPECT_EQ(cv_model_output_dim(m), 2);
  std::vector<double> x(3 * 4);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.1 * static_cast<double>(i);
  std::vector<double> y1(2 * 4), y2(2 * 4);
  ASSERT_EQ(cv_model_forward(m, x.data(), 4, y1.data()), CV_OK);
  const std::string path = (dir / "m.txt").string();
  ASSERT_EQ(cv_model_save(m, path.c_str()), CV_OK);
  cv_model* back = nullptr;
  ASSERT_EQ(cv_model_load(path.c_str(), &back), CV_OK);
  ASSERT_EQ(cv_model_forward(back, x.data(), 4, y2.data()), CV_OK);
  EXPECT_EQ(y1, y2);
  EXPECT_EQ(cv_model_forward(m, x.data(), 0, y1.data()), CV_INVALID_ARGUMENT);
  EXPECT_EQ(cv_model_create(9, 3, 5, 2, 7, &back), CV_INVALID_ARGUMENT);
  cv_model_free(m);
  cv_model_free(back);
}

TEST(CApiTest, ToyTraining) {
  cv_toy_options o;
  cv_toy_options_init(&o);
  EXPECT_EQ(o.samples, 4);
  EXPECT_EQ(o.epochs, 2000);
  EXPECT_EQ(o.learning_rate, 0.01);
  o.epochs = 30;
  o.hidden_dim = 6;
  cv_model* m = nullptr;
  cv_train_trace* t = nullptr;
  ASSERT_EQ(cv_train_toy(&o, &m, &t), CV_OK) << cv_last_error();
  ASSERT_EQ(cv_train_trace_epochs(t), 30u);
  EXPECT_LT(cv_train_trace_train_loss(t, 29), cv_train_trace_train_loss(t, 0));
  EXPECT_TRUE(std::isfinite(cv_train_trace_validation_loss(t, 29)));
  cv_train_trace_free(t);
  cv_model_free(m);

  o.validation_samples = 0;
  ASSERT_EQ(cv_train_toy(&o, &m, &t), CV_OK);
  EXPECT_TRUE(std::isnan(cv_train_trace_validation_loss(t, 0)));
  cv_train_trace_free(t);
  cv_model_free(m);

  o.learning_rate = 1e6;
  o.epochs = 200;
  EXPECT_EQ(cv_train_toy(&o, &m, &t), CV_DIVERGED);
}

}  // namespace
