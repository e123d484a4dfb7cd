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

// 8-bit image files. Binary PPM (P6) is the primary format; PGM (P5) and
// PNG are also read, grayscale being expanded to R = G = B.

#ifndef OPTIDCT_IMAGE_IO_H_
#define OPTIDCT_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "optidct/codec.h"

namespace optidct {

// Detects the format from the file contents. Throws IoError if the file
// cannot be read and FormatError for a malformed or unsupported file.
ImagePlanes read_image(const std::filesystem::path& path);

// Picks PNG for a ".png" extension and P6 otherwise. Samples are rounded
// and clamped to [0, 255]. Expects an RGB image.
void write_image(const ImagePlanes& img, const std::filesystem::path& path);

// In-memory PNM codec (P5 and P6 with maxval 255).
ImagePlanes parse_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_ppm(const ImagePlanes& img);

}  // namespace optidct

#endif  // OPTIDCT_IMAGE_IO_H_
