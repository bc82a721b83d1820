// Copyright 2026 The bevaug Authors. All Rights Reserved.
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

#ifndef BEVAUG_RASTER_HPP_
#define BEVAUG_RASTER_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace bevaug {

// 8-bit interleaved image, row-major, 1 (gray) or 3 (RGB) channels.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  Raster() = default;
  Raster(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

// Binary PGM (P5) / PPM (P6) with maxval 255. Throws FormatError.
Raster ReadPnm(const std::filesystem::path& path);
void WritePnm(const std::filesystem::path& path, const Raster& image);

}  // namespace bevaug

#endif  // BEVAUG_RASTER_HPP_
