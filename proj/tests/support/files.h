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


// Hand-built RIFF/WAVE files and scratch directories for tests.

#ifndef CONTVOC_TESTS_SUPPORT_FILES_H_
#define CONTVOC_TESTS_SUPPORT_FILES_H_

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace contvoc::testing {

inline void PutLe(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

// Interleaved integer sample codes, written with the given bit depth and
// format tag (1 = PCM, 3 = IEEE float, 0xFFFE = extensible with PCM subformat).
inline std::vector<std::uint8_t> WavBytes(const std::vector<std::int64_t>& codes, int channels,
                                          int bits, int sample_rate, int format_tag = 1) {
  const int bytes = bits / 8;
  std::vector<std::uint8_t> data;
  for (std::int64_t c : codes) {
    if (bits == 8) {
      data.push_back(static_cast<std::uint8_t>(c + 128));
    } else {
      PutLe(data, static_cast<std::uint64_t>(c), bytes);
    }
  }
  std::vector<std::uint8_t> fmt;
  PutLe(fmt, static_cast<std::uint64_t>(format_tag), 2);
  PutLe(fmt, static_cast<std::uint64_t>(channels), 2);
  PutLe(fmt, static_cast<std::uint64_t>(sample_rate), 4);
  PutLe(fmt, static_cast<std::uint64_t>(sample_rate) * channels * bytes, 4);
  PutLe(fmt, static_cast<std::uint64_t>(channels) * bytes, 2);
  PutLe(fmt, static_cast<std::uint64_t>(bits), 2);
  if (format_tag == 0xFFFE) {
    PutLe(fmt, 22, 2);
    PutLe(fmt, static_cast<std::uint64_t>(bits), 2);
    PutLe(fmt, 0, 4);
    // KSDATAFORMAT_SUBTYPE_PCM
    const std::uint8_t guid[16] = {1, 0, 0, 0, 0, 0, 0x10, 0, 0x80, 0, 0, 0xAA, 0, 0x38, 0x9B, 0x71};
    fmt.insert(fmt.end(), guid, guid + 16);
  }
  std::vector<std::uint8_t> out = {'R', 'I', 'F', 'F'};
  PutLe(out, 4 + 8 + fmt.size() + 8 + data.size(), 4);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutLe(out, fmt.size(), 4);
  out.insert(out.end(), fmt.begin(), fmt.end());
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutLe(out, data.size(), 4);
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

inline void WriteBytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("contvoc_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

}  // namespace contvoc::testing

#endif  // CONTVOC_TESTS_SUPPORT_FILES_H_
