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

#ifndef OPTIDCT_QUANTIZER_H_
#define OPTIDCT_QUANTIZER_H_

#include <array>
#include <cstdint>

#include "optidct/transform.h"

namespace optidct {

inline constexpr int kMinQuality = 1;
inline constexpr int kMaxQuality = 100;

// Standard JPEG luminance table, raster order.
inline constexpr std::array<int, kBlockArea> kBaseLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

// Integer-valued coefficient block, the output of quantize().
using QuantizedBlock = std::array<std::int32_t, kBlockArea>;

struct QuantTable {
  int qf = 50;
  // Raster order, every entry in [1, 255].
  std::array<int, kBlockArea> divisors{};

  int operator()(int row, int col) const {
    return divisors[kBlockDim * row + col];
  }
};

// libjpeg quality scaling of the luminance table. Throws std::out_of_range
// unless 1 <= qf <= 100.
QuantTable table_from_qf(int qf);

// Round-half-away-from-zero of coeff / divisor.
QuantizedBlock quantize(const CoeffBlock& coeffs, const QuantTable& table);
CoeffBlock dequantize(const QuantizedBlock& q, const QuantTable& table);

double round_half_away(double x);

}  // namespace optidct

#endif  // OPTIDCT_QUANTIZER_H_
