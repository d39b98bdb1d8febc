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


// Internal text helpers shared by the archive, model and report writers.
// Numbers use the shortest decimal form that parses back to the same double.

#ifndef CONTVOC_SRC_TEXT_FORMAT_H_
#define CONTVOC_SRC_TEXT_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

namespace contvoc::internal {

std::string FormatDouble(double value);

// Whole-token parse; throws Error(kUnsupportedFormat) naming `what`.
double ParseDouble(std::string_view text, std::string_view what);
long ParseInteger(std::string_view text, std::string_view what);

std::string_view Trim(std::string_view text);
std::vector<std::string_view> Split(std::string_view text, char separator);

}  // namespace contvoc::internal

#endif  // CONTVOC_SRC_TEXT_FORMAT_H_
