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


#include "contvoc/contvoc.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>

#include "contvoc/acoustic_model.h"
#include "contvoc/archive.h"
#include "contvoc/error.h"
#include "contvoc/metrics.h"
#include "contvoc/vocoder.h"

struct cv_waveform {
  contvoc::Waveform wave;
};

struct cv_archive {
  contvoc::VocoderAnalysis analysis;
};

struct cv_ecdf {
  contvoc::EcdfCurve curve;
};

struct cv_model {
  contvoc::SequenceModelParams params;
};

struct cv_train_trace {
  std::vector<double> train;
  std::vector<double> validation;
};

namespace {

thread_local std::string last_error;

cv_status Fail(cv_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, mapping exceptions to status codes.
template <typename F>
cv_status Guard(F&& body) {
  try {
    body();
    return CV_OK;
  } catch (const contvoc::Error& e) {
    return Fail(static_cast<cv_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(CV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(CV_INTERNAL, e.what());
  }
}

void Need(bool ok, const char* what) {
  if (!ok) throw contvoc::Error(contvoc::ErrorCode::kInvalidArgument, what);
}

contvoc::VocoderConfig ToConfig(const cv_config* c) {
  contvoc::VocoderConfig config;
  if (c == nullptr) return config;
  config.hop_ms = c->hop_ms;
  config.window_ms = c->window_ms;
  config.f0_min = c->f0_min;
  config.f0_max = c->f0_max;
  config.order = c->order;
  config.warp = c->warp;
  config.threshold = c->threshold;
  Need(c->mask_convention == CV_MASK_FIG1_OPERATIONAL || c->mask_convention == CV_MASK_EQ1_LITERAL,
       "unknown mask convention");
  config.convention = static_cast<contvoc::MaskConvention>(c->mask_convention);
  config.pdd_window = c->pdd_window;
  config.seed = c->seed;
  return config;
}

contvoc::CellKind ToCellKind(int kind) {
  Need(kind >= CV_CELL_VANILLA_BIDIRECTIONAL && kind <= CV_CELL_GRU, "unknown cell kind");
  return static_cast<contvoc::CellKind>(kind);
}

const std::vector<double>& Track(const contvoc::VocoderAnalysis& a, cv_track track) {
  switch (track) {
    case CV_TRACK_CONT_F0: return a.params.cont_f0;
    case CV_TRACK_MVF: return a.params.mvf;
    case CV_TRACK_PDD: return a.mask.pdd;
    case CV_TRACK_CNM: return a.mask.cnm;
  }
  throw contvoc::Error(contvoc::ErrorCode::kInvalidArgument, "unknown track");
}

}  // namespace

extern "C" {

const char* cv_version(void) { return "1.0.0"; }

const char* cv_status_string(cv_status status) {
  switch (status) {
    case CV_OK: return "ok";
    case CV_INTERNAL: return "internal";
    default: return contvoc::ErrorCodeName(static_cast<contvoc::ErrorCode>(status));
  }
}

const char* cv_last_error(void) { return last_error.c_str(); }

void cv_config_init(cv_config* config) {
  if (config == nullptr) return;
  const contvoc::VocoderConfig d;
  config->hop_ms = d.hop_ms;
  config->window_ms = d.window_ms;
  config->f0_min = d.f0_min;
  config->f0_max = d.f0_max;
  config->order = d.order;
  config->warp = d.warp;
  config->threshold = d.threshold;
  config->mask_convention = CV_MASK_FIG1_OPERATIONAL;
  config->pdd_window = d.pdd_window;
  config->seed = d.seed;
}

cv_status cv_waveform_load(const char* path, cv_waveform** out) {
  return Guard([&] {
    Need(path != nullptr && out != nullptr, "null argument");
    *out = new cv_waveform{contvoc::LoadWaveform(path)};
  });
}

cv_status cv_waveform_from_samples(const double* samples, size_t length, int sample_rate,
                                   cv_waveform** out) {
  return Guard([&] {
    Need(out != nullptr && (samples != nullptr || length == 0), "null argument");
    *out = new cv_waveform{
        contvoc::Waveform(std::vector<double>(samples, samples + length), sample_rate)};
  });
}

cv_status cv_waveform_save(const cv_waveform* wave, const char* path) {
  return Guard([&] {
    Need(wave != nullptr && path != nullptr, "null argument");
    contvoc::SaveWaveform(wave->wave, path);
  });
}

size_t cv_waveform_length(const cv_waveform* wave) { return wave ? wave->wave.size() : 0; }
int cv_waveform_sample_rate(const cv_waveform* wave) {
  return wave ? wave->wave.sample_rate() : 0;
}
const double* cv_waveform_samples(const cv_waveform* wave) {
  return wave ? wave->wave.samples().data() : nullptr;
}
void cv_waveform_free(cv_waveform* wave) { delete wave; }

cv_status cv_analyze(const cv_waveform* wave, const cv_config* config, cv_archive** out) {
  return Guard([&] {
    Need(wave != nullptr && out != nullptr, "null argument");
    *out = new cv_archive{contvoc::Analyze(wave->wave, ToConfig(config))};
  });
}

cv_status cv_archive_save(const cv_archive* archive, const char* dir) {
  return Guard([&] {
    Need(archive != nullptr && dir != nullptr, "null argument");
    contvoc::SaveArchive(archive->analysis, dir);
  });
}

cv_status cv_archive_load(const char* dir, cv_archive** out) {
  return Guard([&] {
    Need(dir != nullptr && out != nullptr, "null argument");
    *out = new cv_archive{contvoc::LoadArchive(dir)};
  });
}

void cv_archive_free(cv_archive* archive) { delete archive; }

size_t cv_archive_frame_count(const cv_archive* a) { return a ? a->analysis.frame_count() : 0; }
int cv_archive_order(const cv_archive* a) { return a ? a->analysis.params.order() : 0; }
int cv_archive_sample_rate(const cv_archive* a) { return a ? a->analysis.params.sample_rate : 0; }
int cv_archive_hop(const cv_archive* a) { return a ? a->analysis.params.frame_spec.hop : 0; }
double cv_archive_threshold(const cv_archive* a) {
  return a ? a->analysis.mask.threshold : std::numeric_limits<double>::quiet_NaN();
}
int cv_archive_mask_convention(const cv_archive* a) {
  return a ? static_cast<int>(a->analysis.mask.convention) : -1;
}

cv_status cv_archive_track(const cv_archive* archive, cv_track track, const double** data,
                           size_t* length) {
  return Guard([&] {
    Need(archive != nullptr && data != nullptr && length != nullptr, "null argument");
    const auto& values = Track(archive->analysis, track);
    *data = values.data();
    *length = values.size();
  });
}

cv_status cv_archive_envelope(const cv_archive* archive, size_t frame,
                              const double** coefficients, size_t* length) {
  return Guard([&] {
    Need(archive != nullptr && coefficients != nullptr && length != nullptr, "null argument");
    const auto& env = archive->analysis.params.envelope;
    Need(frame < env.size(), "frame index out of range");
    *coefficients = env[frame].data();
    *length = env[frame].size();
  });
}

cv_status cv_archive_set_value(cv_archive* archive, cv_track track, size_t frame, double value) {
  return Guard([&] {
    Need(archive != nullptr, "null argument");
    contvoc::VocoderAnalysis edited = archive->analysis;
    auto& values = const_cast<std::vector<double>&>(Track(edited, track));
    Need(frame < values.size(), "frame index out of range");
    values[frame] = value;
    edited.Validate();
    archive->analysis = std::move(edited);
  });
}

cv_status cv_archive_remask(cv_archive* archive, int mask_convention, double threshold) {
  return Guard([&] {
    Need(archive != nullptr, "null argument");
    Need(mask_convention == CV_MASK_FIG1_OPERATIONAL || mask_convention == CV_MASK_EQ1_LITERAL,
         "unknown mask convention");
    archive->analysis.mask =
        contvoc::Remask(archive->analysis.mask,
                        static_cast<contvoc::MaskConvention>(mask_convention), threshold);
  });
}

cv_status cv_synthesize(const cv_archive* archive, uint64_t seed, cv_waveform** out) {
  return Guard([&] {
    Need(archive != nullptr && out != nullptr, "null argument");
    *out = new cv_waveform{contvoc::Resynthesize(archive->analysis, seed)};
  });
}

cv_status cv_evaluate(const cv_archive* ref, const cv_archive* test, cv_metric_report* out) {
  return Guard([&] {
    Need(ref != nullptr && test != nullptr && out != nullptr, "null argument");
    const auto r = contvoc::Evaluate(ref->analysis, test->analysis);
    *out = {r.mcd_db, r.f0_rmse_hz, r.mvf_rmse_hz, r.mvf_rmse_norm, r.corr, r.frame_count};
  });
}

cv_status cv_mcd(const double* ref, const double* test, size_t frames, size_t coefficients,
                 double* out) {
  return Guard([&] {
    Need(ref != nullptr && test != nullptr && out != nullptr, "null argument");
    contvoc::CepstrumTrack a(frames), b(frames);
    for (size_t k = 0; k < frames; ++k) {
      a[k].assign(ref + k * coefficients, ref + (k + 1) * coefficients);
      b[k].assign(test + k * coefficients, test + (k + 1) * coefficients);
    }
    *out = contvoc::MelCepstralDistortion(a, b);
  });
}

cv_status cv_rmse(const double* ref, const double* test, size_t length, double* out) {
  return Guard([&] {
    Need(ref != nullptr && test != nullptr && out != nullptr, "null argument");
    *out = contvoc::Rmse({ref, length}, {test, length});
  });
}

cv_status cv_pearson(const double* ref, const double* test, size_t length, double* out) {
  return Guard([&] {
    Need(ref != nullptr && test != nullptr && out != nullptr, "null argument");
    *out = contvoc::PearsonCorrelation({ref, length}, {test, length});
  });
}

cv_status cv_ecdf_create(const double* values, size_t length, cv_ecdf** out) {
  return Guard([&] {
    Need(out != nullptr && (values != nullptr || length == 0), "null argument");
    *out = new cv_ecdf{contvoc::Ecdf({values, length})};
  });
}

cv_status cv_ecdf_evaluate(const cv_ecdf* ecdf, double x, double* out) {
  return Guard([&] {
    Need(ecdf != nullptr && out != nullptr, "null argument");
    *out = contvoc::EvaluateEcdf(ecdf->curve, x);
  });
}

size_t cv_ecdf_size(const cv_ecdf* ecdf) { return ecdf ? ecdf->curve.sorted_values.size() : 0; }

cv_status cv_ecdf_point(const cv_ecdf* ecdf, size_t index, double* value, double* cumulative) {
  return Guard([&] {
    Need(ecdf != nullptr && value != nullptr && cumulative != nullptr, "null argument");
    Need(index < ecdf->curve.sorted_values.size(), "ECDF index out of range");
    *value = ecdf->curve.sorted_values[index];
    *cumulative = ecdf->curve.cumulative[index];
  });
}

void cv_ecdf_free(cv_ecdf* ecdf) { delete ecdf; }

cv_status cv_model_create(int cell_kind, int input_dim, int hidden_dim, int output_dim,
                          uint64_t seed, cv_model** out) {
  return Guard([&] {
    Need(out != nullptr, "null argument");
    *out = new cv_model{contvoc::SequenceModelParams::Random(ToCellKind(cell_kind), input_dim,
                                                             hidden_dim, output_dim, seed)};
  });
}

cv_status cv_model_load(const char* path, cv_model** out) {
  return Guard([&] {
    Need(path != nullptr && out != nullptr, "null argument");
    *out = new cv_model{contvoc::LoadModel(path)};
  });
}

cv_status cv_model_save(const cv_model* model, const char* path) {
  return Guard([&] {
    Need(model != nullptr && path != nullptr, "null argument");
    contvoc::SaveModel(model->params, path);
  });
}

void cv_model_free(cv_model* model) { delete model; }
int cv_model_cell_kind(const cv_model* m) { return m ? static_cast<int>(m->params.cell_kind) : -1; }
int cv_model_input_dim(const cv_model* m) { return m ? m->params.input_dim : 0; }
int cv_model_output_dim(const cv_model* m) { return m ? m->params.output_dim : 0; }

cv_status cv_model_forward(const cv_model* model, const double* inputs, size_t frames,
                           double* outputs) {
  return Guard([&] {
    Need(model != nullptr && inputs != nullptr && outputs != nullptr, "null argument");
    const auto& p = model->params;
    const Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(
        inputs, p.input_dim, static_cast<Eigen::Index>(frames));
    const Eigen::MatrixXd y = contvoc::Forward(p, x).y;
    Eigen::Map<Eigen::MatrixXd>(outputs, p.output_dim, static_cast<Eigen::Index>(frames)) = y;
  });
}

void cv_toy_options_init(cv_toy_options* o) {
  if (o == nullptr) return;
  const contvoc::ToyDataOptions data;
  const contvoc::TrainOptions train;
  o->cell_kind = CV_CELL_VANILLA_BIDIRECTIONAL;
  o->samples = data.samples;
  o->validation_samples = 4;
  o->frames = data.frames;
  o->input_dim = data.input_dim;
  o->hidden_dim = 16;
  o->output_dim = data.output_dim;
  o->epochs = train.epochs;
  o->learning_rate = train.learning_rate;
  o->batch_size = train.batch_size;
  o->seed = train.seed;
}

cv_status cv_train_toy(const cv_toy_options* options, cv_model** model, cv_train_trace** trace) {
  return Guard([&] {
    Need(options != nullptr && model != nullptr && trace != nullptr, "null argument");
    contvoc::ToyDataOptions data_options;
    data_options.samples = options->samples;
    data_options.validation_samples = options->validation_samples;
    data_options.frames = options->frames;
    data_options.input_dim = options->input_dim;
    data_options.output_dim = options->output_dim;
    data_options.seed = options->seed;
    const contvoc::ToyDataset data = contvoc::MakeToyDataset(data_options);

    contvoc::TrainOptions train;
    train.epochs = options->epochs;
    train.learning_rate = options->learning_rate;
    train.batch_size = options->batch_size;
    train.seed = options->seed;
    const auto initial = contvoc::SequenceModelParams::Random(
        ToCellKind(options->cell_kind), options->input_dim, options->hidden_dim,
        options->output_dim, options->seed);
    auto result = contvoc::Train(initial, data.train, train,
                                 data.validation.size() > 0 ? &data.validation : nullptr);
    auto* t = new cv_train_trace{std::move(result.train_loss), std::move(result.validation_loss)};
    *model = new cv_model{std::move(result.params)};
    *trace = t;
  });
}

size_t cv_train_trace_epochs(const cv_train_trace* trace) {
  return trace ? trace->train.size() : 0;
}

double cv_train_trace_train_loss(const cv_train_trace* trace, size_t epoch) {
  if (trace == nullptr || epoch >= trace->train.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return trace->train[epoch];
}

double cv_train_trace_validation_loss(const cv_train_trace* trace, size_t epoch) {
  if (trace == nullptr || epoch >= trace->validation.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return trace->validation[epoch];
}

void cv_train_trace_free(cv_train_trace* trace) { delete trace; }

}  // extern "C"
