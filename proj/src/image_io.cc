// Copyright 2026 The optidct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optidct/image_io.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include <png.h>

#include "optidct/errors.h"
#include "optidct/quantizer.h"
#include "file_util.h"

namespace optidct {
namespace {

namespace fs = std::filesystem;

using internal::ReadFile;
using internal::WriteFile;

// Header tokenizer for PNM: whitespace separated, '#' comments to EOL.
class PnmHeader {
 public:
  explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  unsigned long next_number(const char* what) {
    skip_space_and_comments();
    unsigned long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw FormatError(std::string("PNM ") + what + " too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw FormatError(std::string("PNM header: expected ") + what);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("PNM header: missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

bool IsPng(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

ImagePlanes ParsePng(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError(std::string("PNG: ") + image.message);
  }
  ImagePlanes img(static_cast<int>(image.width), static_cast<int>(image.height));
  std::size_t k = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int ch = 0; ch < kNumChannels; ++ch) img.at(ch, x, y) = raster[k++];
    }
  }
  return img;
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0.0, 255.0));
}

std::vector<std::uint8_t> InterleavedRgb(const ImagePlanes& img) {
  if (img.color_space() != ColorSpace::kRgb) {
    throw std::invalid_argument("only RGB images can be written");
  }
  std::vector<std::uint8_t> raster;
  raster.reserve(img.samples_per_plane() * kNumChannels);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int ch = 0; ch < kNumChannels; ++ch) raster.push_back(ToByte(img.at(ch, x, y)));
    }
  }
  return raster;
}

void WritePng(const ImagePlanes& img, const fs::path& path) {
  const std::vector<std::uint8_t> raster = InterleavedRgb(img);
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.data(), 0,
                               nullptr)) {
    throw IoError("PNG write failed for " + path.string() + ": " +
                  image.message);
  }
}

}  // namespace

ImagePlanes parse_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw FormatError("not a binary PPM/PGM file");
  }
  const bool color = bytes[1] == '6';
  PnmHeader header(bytes);
  const auto width = header.next_number("width");
  const auto height = header.next_number("height");
  const auto maxval = header.next_number("maxval");
  if (width == 0 || height == 0) throw FormatError("PNM: zero dimension");
  if (maxval != 255) {
    throw FormatError("PNM: unsupported maxval " + std::to_string(maxval));
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t samples = color ? kNumChannels : 1;
  const std::size_t expected = static_cast<std::size_t>(width) * height * samples;
  if (bytes.size() - offset < expected) {
    throw FormatError("PNM: truncated payload, expected " +
                      std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size() - offset));
  }
  ImagePlanes img(static_cast<int>(width), static_cast<int>(height));
  const std::uint8_t* p = bytes.data() + offset;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (color) {
        for (int ch = 0; ch < kNumChannels; ++ch) img.at(ch, x, y) = *p++;
      } else {
        const double v = *p++;
        for (int ch = 0; ch < kNumChannels; ++ch) img.at(ch, x, y) = v;
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> serialize_ppm(const ImagePlanes& img) {
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::vector<std::uint8_t> raster = InterleavedRgb(img);
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

ImagePlanes read_image(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFile(path);
  try {
    return IsPng(bytes) ? ParsePng(bytes) : parse_pnm(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_image(const ImagePlanes& img, const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") {
    WritePng(img, path);
  } else {
    WriteFile(path, serialize_ppm(img));
  }
}

}  // namespace optidct
