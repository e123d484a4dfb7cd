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

// Binary files for trained kernels and encoded images.
//
// Kernel file (".oidk"), all integers little-endian, no padding:
//
//   offset  size   field
//   0       4      magic "OIDK"
//   4       4      version, u32 = 1
//   8       1      training QF, u8
//   9       8      ridge lambda, IEEE-754 binary64
//   17      8      sample count, u64
//   25      32768  4096 x binary64 kernel entries, row-major
//   32793   4      CRC-32 (zlib polynomial) of bytes [0, 32793)
//
// Encoded image (".oide"):
//
//   magic "OIDE", version u32 = 1, width u32, height u32, QF u8,
//   channel count u8 = 3, then per channel a u32 block count followed by
//   count x 64 i16 quantized coefficients in raster order, and a trailing
//   CRC-32 of everything before it.

#ifndef OPTIDCT_PERSISTENCE_H_
#define OPTIDCT_PERSISTENCE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "optidct/codec.h"
#include "optidct/learner.h"

namespace optidct {

inline constexpr std::uint32_t kKernelFileVersion = 1;
inline constexpr std::size_t kKernelFileSize = 4 + 4 + 1 + 8 + 8 + 8 * 4096 + 4;
inline constexpr std::uint32_t kEncodedFileVersion = 1;

std::vector<std::uint8_t> serialize_kernel(const TrainedKernel& tk);
// FormatError for a short file, bad magic or unknown version;
// ChecksumError when the CRC does not match.
TrainedKernel parse_kernel(std::span<const std::uint8_t> bytes);

void save_kernel(const TrainedKernel& tk, const std::filesystem::path& path);
TrainedKernel load_kernel(const std::filesystem::path& path);

// "kernel_qf050.oidk"
std::string kernel_file_name(int qf);

// Every *.oidk in `dir`, sorted by training QF. Throws IoError if the
// directory holds none.
std::vector<TrainedKernel> load_kernel_bank(const std::filesystem::path& dir);

std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc);
EncodedImage parse_encoded(std::span<const std::uint8_t> bytes);

void save_encoded(const EncodedImage& enc, const std::filesystem::path& path);
EncodedImage load_encoded(const std::filesystem::path& path);

}  // namespace optidct

#endif  // OPTIDCT_PERSISTENCE_H_
