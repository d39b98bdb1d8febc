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

#include "contvoc/error.h"

namespace contvoc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kFileNotFound: return "file not found";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kEmptyAudio: return "empty audio";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kZeroVariance: return "zero variance";
    case ErrorCode::kSignalTooShort: return "signal too short";
    case ErrorCode::kInconsistentArchive: return "inconsistent archive";
    case ErrorCode::kDiverged: return "training diverged";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

}  // namespace contvoc
