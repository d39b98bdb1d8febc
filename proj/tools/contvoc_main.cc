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


// contvoc command-line tool: analysis, synthesis, evaluation, ECDF export and
// toy acoustic-model training. Exit status is 0 exactly when every requested
// output was fully written.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contvoc/contvoc.h"

namespace fs = std::filesystem;

namespace {

// Thrown to abort a subcommand; the message is printed and the tool exits 1.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(cv_status status, const std::string& context) {
  if (status != CV_OK) {
    throw CommandError(context + ": " + cv_status_string(status) + ": " + cv_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using WaveformPtr = std::unique_ptr<cv_waveform, Deleter<cv_waveform, cv_waveform_free>>;
using ArchivePtr = std::unique_ptr<cv_archive, Deleter<cv_archive, cv_archive_free>>;
using EcdfPtr = std::unique_ptr<cv_ecdf, Deleter<cv_ecdf, cv_ecdf_free>>;
using ModelPtr = std::unique_ptr<cv_model, Deleter<cv_model, cv_model_free>>;
using TracePtr = std::unique_ptr<cv_train_trace, Deleter<cv_train_trace, cv_train_trace_free>>;

std::string Num(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

// Temporary sibling path used for atomic writes.
fs::path TempSibling(const fs::path& path) {
  std::random_device rd;
  return path.parent_path() / ("." + path.filename().string() + ".tmp-" + std::to_string(rd()));
}

void EnsureParent(const fs::path& path) {
  const fs::path parent = fs::absolute(path).parent_path();
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw CommandError("cannot create directory '" + parent.string() + "': " + ec.message());
}

void CommitFile(const fs::path& tmp, const fs::path& path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CommandError("cannot write '" + path.string() + "'");
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  EnsureParent(path);
  const fs::path tmp = TempSibling(fs::absolute(path));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw CommandError("cannot write '" + path.string() + "'");
    }
  }
  CommitFile(tmp, path);
}

void SaveWave(const cv_waveform* wave, const fs::path& path) {
  EnsureParent(path);
  const fs::path tmp = TempSibling(fs::absolute(path));
  Check(cv_waveform_save(wave, tmp.c_str()), "writing " + path.string());
  CommitFile(tmp, path);
}

// Flags shared by the signal-processing subcommands.
struct SharedFlags {
  int sample_rate = 0;
  cv_config config{};
  std::string mask_convention = "fig1-operational";
};

void AddSharedFlags(CLI::App* app, SharedFlags& f) {
  app->add_option("--sample-rate", f.sample_rate,
                  "Expected input sample rate in Hz; inputs at another rate are rejected")
      ->check(CLI::PositiveNumber);
  app->add_option("--hop-ms", f.config.hop_ms, "Frame hop in ms")->capture_default_str();
  app->add_option("--window-ms", f.config.window_ms, "Analysis window in ms")->capture_default_str();
  app->add_option("--f0-min", f.config.f0_min, "Lowest F0 in Hz")->capture_default_str();
  app->add_option("--f0-max", f.config.f0_max, "Highest F0 in Hz")->capture_default_str();
  app->add_option("--order", f.config.order, "Mel-cepstral order")->capture_default_str();
  app->add_option("--warp", f.config.warp, "All-pass warping factor")->capture_default_str();
  app->add_option("--threshold", f.config.threshold, "Voiced gate threshold on cNM")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--mask-convention", f.mask_convention, "cNM convention")
      ->check(CLI::IsMember({"fig1-operational", "eq1-literal"}))
      ->capture_default_str();
  app->add_option("--pdd-window", f.config.pdd_window, "PDD pooling window in frames (odd)")
      ->capture_default_str();
  app->add_option("--seed", f.config.seed, "Noise seed for synthesis")->capture_default_str();
}

int ConventionCode(const std::string& name) {
  return name == "eq1-literal" ? CV_MASK_EQ1_LITERAL : CV_MASK_FIG1_OPERATIONAL;
}

cv_config ResolvedConfig(const SharedFlags& f) {
  cv_config c = f.config;
  c.mask_convention = ConventionCode(f.mask_convention);
  return c;
}

WaveformPtr LoadWave(const fs::path& path, const SharedFlags& f) {
  cv_waveform* raw = nullptr;
  Check(cv_waveform_load(path.c_str(), &raw), "reading " + path.string());
  WaveformPtr wave(raw);
  if (f.sample_rate > 0 && cv_waveform_sample_rate(wave.get()) != f.sample_rate) {
    throw CommandError(path.string() + ": sample rate " +
                       std::to_string(cv_waveform_sample_rate(wave.get())) + " Hz, expected " +
                       std::to_string(f.sample_rate) + " Hz (resampling is not supported)");
  }
  return wave;
}

ArchivePtr AnalyzeFile(const fs::path& path, const SharedFlags& f) {
  const WaveformPtr wave = LoadWave(path, f);
  const cv_config config = ResolvedConfig(f);
  cv_archive* raw = nullptr;
  Check(cv_analyze(wave.get(), &config, &raw), "analyzing " + path.string());
  return ArchivePtr(raw);
}

ArchivePtr LoadArchive(const fs::path& dir) {
  cv_archive* raw = nullptr;
  Check(cv_archive_load(dir.c_str(), &raw), "loading archive " + dir.string());
  return ArchivePtr(raw);
}

bool IsArchiveDir(const fs::path& p) {
  return fs::is_directory(p) && fs::is_regular_file(p / "manifest.txt");
}

bool IsWav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return fs::is_regular_file(p) && ext == ".wav";
}

ArchivePtr LoadItem(const fs::path& p, const SharedFlags& f) {
  return IsArchiveDir(p) ? LoadArchive(p) : AnalyzeFile(p, f);
}

// The stored mask is recomputed only when the command line overrides the
// convention or the threshold.
WaveformPtr SynthesizeArchive(cv_archive* archive, const SharedFlags& f, const CLI::App& cmd) {
  const bool new_convention = cmd.count("--mask-convention") > 0;
  const bool new_threshold = cmd.count("--threshold") > 0;
  if (new_convention || new_threshold) {
    const int convention =
        new_convention ? ConventionCode(f.mask_convention) : cv_archive_mask_convention(archive);
    const double threshold = new_threshold ? f.config.threshold : cv_archive_threshold(archive);
    Check(cv_archive_remask(archive, convention, threshold), "recomputing the noise mask");
  }
  cv_waveform* raw = nullptr;
  Check(cv_synthesize(archive, f.config.seed, &raw), "synthesizing");
  return WaveformPtr(raw);
}

// ---- eval -------------------------------------------------------------------

const char* kReportHeader = "utterance,mcd_db,f0_rmse_hz,mvf_rmse_hz,mvf_rmse_norm,corr,frame_count\n";

std::string ReportRow(const std::string& name, const cv_metric_report& r) {
  return name + "," + Num(r.mcd_db) + "," + Num(r.f0_rmse_hz) + "," + Num(r.mvf_rmse_hz) + "," +
         Num(r.mvf_rmse_norm) + "," + Num(r.corr) + "," + std::to_string(r.frame_count) + "\n";
}

// Stem -> path for every wav file or archive directory directly inside `dir`.
std::map<std::string, fs::path> CorpusItems(const fs::path& dir) {
  std::map<std::string, fs::path> items;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (p.filename().string().front() == '.') continue;
    if (IsWav(p) || IsArchiveDir(p)) {
      const std::string stem = IsWav(p) ? p.stem().string() : p.filename().string();
      if (!items.emplace(stem, p).second) {
        throw CommandError("duplicate utterance stem '" + stem + "' in " + dir.string());
      }
    }
  }
  return items;
}

int RunEval(const fs::path& ref, const fs::path& test, const std::string& out,
            const SharedFlags& f) {
  for (const auto& p : {ref, test}) {
    if (!fs::exists(p)) throw CommandError("no such file or directory: " + p.string());
  }
  const bool ref_corpus = fs::is_directory(ref) && !IsArchiveDir(ref);
  const bool test_corpus = fs::is_directory(test) && !IsArchiveDir(test);
  if (ref_corpus != test_corpus) {
    throw CommandError("reference and test must both be single utterances or both corpora");
  }

  std::vector<std::pair<std::string, std::pair<fs::path, fs::path>>> pairs;
  if (!ref_corpus) {
    pairs.push_back({ref.stem().string(), {ref, test}});
  } else {
    const auto refs = CorpusItems(ref);
    const auto tests = CorpusItems(test);
    if (refs.empty() || tests.empty()) {
      throw CommandError("empty corpus directory: " + (refs.empty() ? ref : test).string());
    }
    std::vector<std::string> unmatched;
    for (const auto& [stem, _] : refs) {
      if (!tests.count(stem)) unmatched.push_back(stem + " (missing in " + test.string() + ")");
    }
    for (const auto& [stem, _] : tests) {
      if (!refs.count(stem)) unmatched.push_back(stem + " (missing in " + ref.string() + ")");
    }
    if (!unmatched.empty()) {
      std::string msg = "unmatched utterance stems:";
      for (const auto& u : unmatched) msg += "\n  " + u;
      throw CommandError(msg);
    }
    for (const auto& [stem, path] : refs) pairs.push_back({stem, {path, tests.at(stem)}});
  }

  std::string csv = kReportHeader;
  cv_metric_report sum{};
  for (const auto& [stem, paths] : pairs) {
    const ArchivePtr a = LoadItem(paths.first, f);
    const ArchivePtr b = LoadItem(paths.second, f);
    cv_metric_report r{};
    Check(cv_evaluate(a.get(), b.get(), &r), "evaluating " + stem);
    csv += ReportRow(stem, r);
    sum.mcd_db += r.mcd_db;
    sum.f0_rmse_hz += r.f0_rmse_hz;
    sum.mvf_rmse_hz += r.mvf_rmse_hz;
    sum.mvf_rmse_norm += r.mvf_rmse_norm;
    sum.corr += r.corr;
    sum.frame_count += r.frame_count;
  }
  const double n = static_cast<double>(pairs.size());
  cv_metric_report mean = sum;
  mean.mcd_db /= n;
  mean.f0_rmse_hz /= n;
  mean.mvf_rmse_hz /= n;
  mean.mvf_rmse_norm /= n;
  mean.corr /= n;
  csv += ReportRow("aggregate", mean);
  if (out.empty()) {
    std::cout << csv;
  } else {
    WriteText(out, csv);
  }
  return 0;
}

// ---- ecdf -------------------------------------------------------------------

int RunEcdf(const std::vector<std::string>& archives, const fs::path& out_dir) {
  std::string merged = "archive,value,cumulative\n";
  std::vector<std::pair<fs::path, std::string>> outputs;
  std::map<std::string, int> seen;
  for (const auto& dir : archives) {
    const ArchivePtr a = LoadArchive(dir);
    const double* pdd = nullptr;
    std::size_t n = 0;
    Check(cv_archive_track(a.get(), CV_TRACK_PDD, &pdd, &n), "reading pdd of " + dir);
    cv_ecdf* raw = nullptr;
    Check(cv_ecdf_create(pdd, n, &raw), "ECDF of " + dir);
    const EcdfPtr curve(raw);
    std::string name = fs::path(dir).filename().string();
    if (name.empty()) name = fs::path(dir).parent_path().filename().string();
    if (seen[name]++ > 0) name += "_" + std::to_string(seen[name]);
    std::string csv = "value,cumulative\n";
    for (std::size_t i = 0; i < cv_ecdf_size(curve.get()); ++i) {
      double value = 0.0, cumulative = 0.0;
      Check(cv_ecdf_point(curve.get(), i, &value, &cumulative), "ECDF point");
      csv += Num(value) + "," + Num(cumulative) + "\n";
      merged += name + "," + Num(value) + "," + Num(cumulative) + "\n";
    }
    outputs.push_back({out_dir / (name + "_ecdf.csv"), std::move(csv)});
  }
  for (const auto& [path, text] : outputs) WriteText(path, text);
  WriteText(out_dir / "merged_ecdf.csv", merged);
  return 0;
}

// ---- train-toy --------------------------------------------------------------

struct ToyFlags {
  cv_toy_options options{};
  std::string cell = "vanilla-bidirectional";
};

int RunTrainToy(const ToyFlags& flags, const fs::path& out_dir) {
  cv_toy_options o = flags.options;
  o.cell_kind = flags.cell == "lstm" ? CV_CELL_LSTM
                : flags.cell == "gru" ? CV_CELL_GRU
                                      : CV_CELL_VANILLA_BIDIRECTIONAL;
  cv_model* model_raw = nullptr;
  cv_train_trace* trace_raw = nullptr;
  Check(cv_train_toy(&o, &model_raw, &trace_raw), "training");
  const ModelPtr model(model_raw);
  const TracePtr trace(trace_raw);

  std::string csv = "epoch,train_loss,validation_loss\n";
  for (std::size_t e = 0; e < cv_train_trace_epochs(trace.get()); ++e) {
    const double v = cv_train_trace_validation_loss(trace.get(), e);
    csv += std::to_string(e + 1) + "," + Num(cv_train_trace_train_loss(trace.get(), e)) + "," +
           (v == v ? Num(v) : std::string()) + "\n";
  }
  WriteText(out_dir / "loss_trace.csv", csv);
  EnsureParent(out_dir / "model.txt");
  const fs::path tmp = TempSibling(fs::absolute(out_dir / "model.txt"));
  Check(cv_model_save(model.get(), tmp.c_str()), "saving model");
  CommitFile(tmp, out_dir / "model.txt");
  const std::size_t epochs = cv_train_trace_epochs(trace.get());
  if (epochs > 0) {
    std::cout << "final train loss " << Num(cv_train_trace_train_loss(trace.get(), epochs - 1))
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contvoc: continuous vocoder with continuous noise masking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cv_version()));

  SharedFlags flags;
  cv_config_init(&flags.config);
  std::string out;

  // analyze
  std::string analyze_in, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Analyze a wav file into a parameter archive");
  analyze->add_option("input", analyze_in, "Input wav")->required();
  analyze->add_option("output", analyze_out, "Output archive directory");
  AddSharedFlags(analyze, flags);
  analyze->add_option("--out", out, "Output archive directory");

  // synth
  std::string synth_in, synth_out;
  auto* synth = app.add_subcommand("synth", "Synthesize a wav file from a parameter archive");
  synth->add_option("archive", synth_in, "Archive directory")->required();
  synth->add_option("output", synth_out, "Output wav");
  AddSharedFlags(synth, flags);
  synth->add_option("--out", out, "Output wav");

  // copysynth
  std::string copy_in, copy_out;
  auto* copysynth = app.add_subcommand("copysynth", "Analyze and resynthesize a wav file");
  copysynth->add_option("input", copy_in, "Input wav")->required();
  copysynth->add_option("output", copy_out, "Output wav");
  AddSharedFlags(copysynth, flags);
  copysynth->add_option("--out", out, "Output wav");

  // eval
  std::string eval_ref, eval_test;
  auto* eval = app.add_subcommand(
      "eval", "Compare reference and test (wav files, archives, or directories paired by stem)");
  eval->add_option("reference", eval_ref, "Reference wav, archive or directory")->required();
  eval->add_option("test", eval_test, "Test wav, archive or directory")->required();
  AddSharedFlags(eval, flags);
  eval->add_option("--out", out, "Report CSV (stdout when omitted)");

  // ecdf
  std::vector<std::string> ecdf_in;
  auto* ecdf = app.add_subcommand("ecdf", "Export the PDD ECDF of parameter archives");
  ecdf->add_option("archives", ecdf_in, "Archive directories")->required();
  AddSharedFlags(ecdf, flags);
  ecdf->add_option("--out", out, "Output directory")->required();

  // train-toy
  ToyFlags toy;
  cv_toy_options_init(&toy.options);
  auto* train = app.add_subcommand("train-toy", "Train a toy recurrent acoustic model");
  train->add_option("--cell", toy.cell, "Cell kind")
      ->check(CLI::IsMember({"vanilla-bidirectional", "lstm", "gru"}))
      ->capture_default_str();
  train->add_option("--samples", toy.options.samples, "Training sequences")->capture_default_str();
  train->add_option("--validation-samples", toy.options.validation_samples, "Held-out sequences")
      ->capture_default_str();
  train->add_option("--frames", toy.options.frames, "Frames per sequence")->capture_default_str();
  train->add_option("--input-dim", toy.options.input_dim, "Input features")->capture_default_str();
  train->add_option("--hidden", toy.options.hidden_dim, "Hidden units per direction")
      ->capture_default_str();
  train->add_option("--output-dim", toy.options.output_dim, "Output features")
      ->capture_default_str();
  train->add_option("--epochs", toy.options.epochs, "Epochs")->capture_default_str();
  train->add_option("--lr", toy.options.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--batch-size", toy.options.batch_size, "Sequences per update (0 = all)")
      ->capture_default_str();
  train->add_option("--seed", toy.options.seed, "Seed for data, initialization and order")
      ->capture_default_str();
  train->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error exits 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) {
      const std::string dest = !out.empty() ? out : analyze_out;
      if (dest.empty()) throw CommandError("analyze: an output archive directory is required");
      const ArchivePtr archive = AnalyzeFile(analyze_in, flags);
      Check(cv_archive_save(archive.get(), dest.c_str()), "writing archive " + dest);
      return 0;
    }
    if (synth->parsed()) {
      const std::string dest = !out.empty() ? out : synth_out;
      if (dest.empty()) throw CommandError("synth: an output wav path is required");
      const ArchivePtr archive = LoadArchive(synth_in);
      SaveWave(SynthesizeArchive(archive.get(), flags, *synth).get(), dest);
      return 0;
    }
    if (copysynth->parsed()) {
      const std::string dest = !out.empty() ? out : copy_out;
      if (dest.empty()) throw CommandError("copysynth: an output wav path is required");
      const ArchivePtr archive = AnalyzeFile(copy_in, flags);
      cv_waveform* raw = nullptr;
      Check(cv_synthesize(archive.get(), flags.config.seed, &raw), "synthesizing");
      SaveWave(WaveformPtr(raw).get(), dest);
      return 0;
    }
    if (eval->parsed()) return RunEval(eval_ref, eval_test, out, flags);
    if (ecdf->parsed()) return RunEcdf(ecdf_in, out);
    if (train->parsed()) return RunTrainToy(toy, out);
  } catch (const CommandError& e) {
    std::cerr << "contvoc: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "contvoc: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
