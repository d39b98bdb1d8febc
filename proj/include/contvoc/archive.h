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


// Parameter archive: a directory holding manifest.txt (key=value lines) and
// one CSV per track:
//   cont_f0.csv, mvf.csv, pdd.csv, cnm.csv   frame,time,<track>
//   envelope.csv                             frame,time,c0..c<order>
//   mask_curve.csv                           time,cnm,mvf,threshold (export only)
// Numbers are written in the shortest form that parses back to the same
// double, so save/load round trips are exact.

#ifndef CONTVOC_ARCHIVE_H_
#define CONTVOC_ARCHIVE_H_

#include <filesystem>
#include <map>
#include <string>

#include "contvoc/vocoder.h"

namespace contvoc {

inline constexpr int kArchiveVersion = 1;

using Manifest = std::map<std::string, std::string>;

Manifest MakeManifest(const VocoderAnalysis& analysis);

// Writes into a sibling temporary directory and renames it into place, so a
// failure never leaves a partial archive. An existing archive at `dir` is
// replaced. Errors: kIo.
void SaveArchive(const VocoderAnalysis& analysis, const std::filesystem::path& dir);

// Errors: kFileNotFound (no such directory), kInconsistentArchive (missing or
// malformed files, row counts that disagree with the manifest).
VocoderAnalysis LoadArchive(const std::filesystem::path& dir);

// True when `dir` contains a manifest.txt.
bool IsArchiveDirectory(const std::filesystem::path& dir);

}  // namespace contvoc

#endif  // CONTVOC_ARCHIVE_H_
