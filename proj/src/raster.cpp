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

#include "bevaug/raster.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "bevaug/error.hpp"

namespace bevaug {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string NextToken(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

int ParsePositive(const std::string& token, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used == token.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw FormatError(path.string() + ": bad PNM header field '" + token + "'");
}

}  // namespace

Raster ReadPnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::string magic = NextToken(in);
  int channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw FormatError(path.string() + ": unsupported PNM magic '" + magic + "'");
  const int width = ParsePositive(NextToken(in), path);
  const int height = ParsePositive(NextToken(in), path);
  const int maxval = ParsePositive(NextToken(in), path);
  if (maxval != 255) throw FormatError(path.string() + ": only maxval 255 is supported");
  Raster image(width, height, channels);
  in.read(reinterpret_cast<char*>(image.data.data()),
          static_cast<std::streamsize>(image.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(image.data.size())) {
    throw FormatError(path.string() + ": truncated pixel data");
  }
  return image;
}

void WritePnm(const std::filesystem::path& path, const Raster& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw InvalidArgument("write_pnm: channels must be 1 or 3");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << '\n'
      << 255 << '\n';
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size()));
}

}  // namespace bevaug
