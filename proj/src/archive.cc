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


#include "contvoc/archive.h"

#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <vector>

#include "contvoc/error.h"
#include "text_format.h"

namespace contvoc {

namespace fs = std::filesystem;

namespace {

using internal::FormatDouble;

constexpr const char* kManifestFile = "manifest.txt";
constexpr const char* kFormatName = "contvoc-archive";

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInconsistentArchive, "archive file missing: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string ScalarTrackCsv(const std::string& name, const ContinuousParams& p,
                           const std::vector<double>& values) {
  std::string out = "frame,time," + name + "\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    out += std::to_string(k) + "," + FormatDouble(p.frame_time(k)) + "," +
           FormatDouble(values[k]) + "\n";
  }
  return out;
}

std::string EnvelopeCsv(const ContinuousParams& p) {
  std::string out = "frame,time";
  for (int m = 0; m <= p.order(); ++m) out += ",c" + std::to_string(m);
  out += "\n";
  for (std::size_t k = 0; k < p.envelope.size(); ++k) {
    out += std::to_string(k) + "," + FormatDouble(p.frame_time(k));
    for (double c : p.envelope[k]) out += "," + FormatDouble(c);
    out += "\n";
  }
  return out;
}

std::string MaskCurveCsv(const VocoderAnalysis& a) {
  std::string out = "time,cnm,mvf,threshold\n";
  const std::string threshold = FormatDouble(a.mask.threshold);
  for (std::size_t k = 0; k < a.frame_count(); ++k) {
    out += FormatDouble(a.params.frame_time(k)) + "," + FormatDouble(a.mask.cnm[k]) + "," +
           FormatDouble(a.params.mvf[k]) + "," + threshold + "\n";
  }
  return out;
}

[[noreturn]] void Inconsistent(const fs::path& file, const std::string& message) {
  throw Error(ErrorCode::kInconsistentArchive, file.filename().string() + ": " + message);
}

// Data rows of a track CSV (header checked and dropped), each split on commas.
std::vector<std::vector<std::string_view>> ReadRows(const fs::path& file, const std::string& text,
                                                    std::size_t columns,
                                                    std::size_t frame_count) {
  std::vector<std::string_view> lines;
  for (std::string_view line : internal::Split(text, '\n')) {
    if (!internal::Trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) Inconsistent(file, "missing header row");
  if (internal::Split(lines[0], ',').size() != columns) Inconsistent(file, "unexpected header");
  if (lines.size() - 1 != frame_count) {
    Inconsistent(file, std::to_string(lines.size() - 1) + " rows, manifest frame_count is " +
                           std::to_string(frame_count));
  }
  std::vector<std::vector<std::string_view>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = internal::Split(lines[i], ',');
    if (fields.size() != columns) Inconsistent(file, "row " + std::to_string(i) + " has wrong width");
    if (internal::ParseInteger(fields[0], file.filename().string()) != static_cast<long>(i - 1)) {
      Inconsistent(file, "frame index out of sequence at row " + std::to_string(i));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::vector<double> LoadScalarTrack(const fs::path& dir, const std::string& name,
                                    std::size_t frame_count) {
  const fs::path file = dir / (name + ".csv");
  const std::string text = ReadFile(file);
  std::vector<double> values;
  for (const auto& row : ReadRows(file, text, 3, frame_count)) {
    values.push_back(internal::ParseDouble(row[2], file.filename().string()));
  }
  return values;
}

const std::string& Get(const Manifest& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) Inconsistent(kManifestFile, "missing key '" + key + "'");
  return it->second;
}

Manifest ParseManifest(const std::string& text) {
  Manifest m;
  for (std::string_view line : internal::Split(text, '\n')) {
    line = internal::Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) Inconsistent(kManifestFile, "line without '='");
    m[std::string(internal::Trim(line.substr(0, eq)))] =
        std::string(internal::Trim(line.substr(eq + 1)));
  }
  return m;
}

}  // namespace

Manifest MakeManifest(const VocoderAnalysis& a) {
  const ContinuousParams& p = a.params;
  return {
      {"format", kFormatName},
      {"version", std::to_string(kArchiveVersion)},
      {"sample_rate", std::to_string(p.sample_rate)},
      {"hop", std::to_string(p.frame_spec.hop)},
      {"window_len", std::to_string(p.frame_spec.window_len)},
      {"window_kind", std::string(WindowKindName(p.frame_spec.window_kind))},
      {"order", std::to_string(p.order())},
      {"warp", FormatDouble(p.warp)},
      {"mask_convention", std::string(MaskConventionName(a.mask.convention))},
      {"threshold", FormatDouble(a.mask.threshold)},
      {"frame_count", std::to_string(p.frame_count())},
  };
}

void SaveArchive(const VocoderAnalysis& analysis, const fs::path& dir) {
  analysis.Validate();
  const fs::path target = fs::absolute(dir);
  const fs::path parent = target.parent_path();
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + parent.string() + "': " + ec.message());

  std::random_device rd;
  const std::string suffix = std::to_string(rd()) + std::to_string(rd());
  const fs::path tmp = parent / ("." + target.filename().string() + ".tmp-" + suffix);
  const fs::path old = parent / ("." + target.filename().string() + ".old-" + suffix);
  try {
    if (!fs::create_directory(tmp, ec) || ec) {
      throw Error(ErrorCode::kIo, "cannot create '" + tmp.string() + "'");
    }
    std::string manifest = "# " + std::string(kFormatName) + " parameter archive\n";
    for (const auto& [key, value] : MakeManifest(analysis)) manifest += key + "=" + value + "\n";
    const ContinuousParams& p = analysis.params;
    WriteFile(tmp / kManifestFile, manifest);
    WriteFile(tmp / "cont_f0.csv", ScalarTrackCsv("cont_f0", p, p.cont_f0));
    WriteFile(tmp / "mvf.csv", ScalarTrackCsv("mvf", p, p.mvf));
    WriteFile(tmp / "envelope.csv", EnvelopeCsv(p));
    WriteFile(tmp / "pdd.csv", ScalarTrackCsv("pdd", p, analysis.mask.pdd));
    WriteFile(tmp / "cnm.csv", ScalarTrackCsv("cnm", p, analysis.mask.cnm));
    WriteFile(tmp / "mask_curve.csv", MaskCurveCsv(analysis));

    const bool replace = fs::exists(target);
    if (replace) {
      fs::rename(target, old, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot replace '" + target.string() + "': " + ec.message());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
      if (replace) fs::rename(old, target);
      throw Error(ErrorCode::kIo, "cannot move archive into '" + target.string() + "': " + ec.message());
    }
    if (replace) fs::remove_all(old, ec);
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
}

bool IsArchiveDirectory(const fs::path& dir) {
  std::error_code ec;
  return fs::is_directory(dir, ec) && fs::is_regular_file(dir / kManifestFile, ec);
}

VocoderAnalysis LoadArchive(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kFileNotFound, "no archive directory at '" + dir.string() + "'");
  }
  VocoderAnalysis a;
  try {
    const Manifest m = ParseManifest(ReadFile(dir / kManifestFile));
    if (Get(m, "format") != kFormatName) Inconsistent(kManifestFile, "not a contvoc archive");
    if (internal::ParseInteger(Get(m, "version"), "version") != kArchiveVersion) {
      Inconsistent(kManifestFile, "unsupported archive version");
    }
    auto integer = [&m](const std::string& key) {
      return internal::ParseInteger(Get(m, key), key);
    };
    const long frames = integer("frame_count");
    const long order = integer("order");
    if (frames < 0 || order < 0) Inconsistent(kManifestFile, "negative frame_count or order");
    const auto frame_count = static_cast<std::size_t>(frames);

    ContinuousParams& p = a.params;
    p.sample_rate = static_cast<int>(integer("sample_rate"));
    p.frame_spec.hop = static_cast<int>(integer("hop"));
    p.frame_spec.window_len = static_cast<int>(integer("window_len"));
    if (m.count("window_kind")) p.frame_spec.window_kind = ParseWindowKind(Get(m, "window_kind"));
    p.warp = internal::ParseDouble(Get(m, "warp"), "warp");
    p.cont_f0 = LoadScalarTrack(dir, "cont_f0", frame_count);
    p.mvf = LoadScalarTrack(dir, "mvf", frame_count);

    const fs::path env_file = dir / "envelope.csv";
    const std::string env_text = ReadFile(env_file);
    for (const auto& row :
         ReadRows(env_file, env_text, static_cast<std::size_t>(order) + 3, frame_count)) {
      std::vector<double> c;
      for (std::size_t i = 2; i < row.size(); ++i) {
        c.push_back(internal::ParseDouble(row[i], "envelope.csv"));
      }
      p.envelope.push_back(std::move(c));
    }

    a.mask.pdd = LoadScalarTrack(dir, "pdd", frame_count);
    a.mask.cnm = LoadScalarTrack(dir, "cnm", frame_count);
    a.mask.threshold = internal::ParseDouble(Get(m, "threshold"), "threshold");
    a.mask.convention = ParseMaskConvention(Get(m, "mask_convention"));
    p.frame_spec.Validate();
    a.Validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInconsistentArchive) throw;
    throw Error(ErrorCode::kInconsistentArchive,
                "archive '" + dir.string() + "' is inconsistent: " + e.what());
  }
  return a;
}

}  // namespace contvoc
