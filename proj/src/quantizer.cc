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

#include "optidct/quantizer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace optidct {

double round_half_away(double x) {
  return std::copysign(std::floor(std::fabs(x) + 0.5), x);
}

QuantTable table_from_qf(int qf) {
  if (qf < kMinQuality || qf > kMaxQuality) {
    throw std::out_of_range("quality factor " + std::to_string(qf) +
                            " outside [1, 100]");
  }
  // Integer arithmetic as in libjpeg's jpeg_quality_scaling().
  const long scale = qf < 50 ? 5000 / qf : 200 - 2 * qf;
  QuantTable table;
  table.qf = qf;
  for (int i = 0; i < kBlockArea; ++i) {
    const long scaled = (kBaseLuminanceTable[i] * scale + 50) / 100;
    table.divisors[i] = static_cast<int>(std::clamp(scaled, 1L, 255L));
  }
  return table;
}

QuantizedBlock quantize(const CoeffBlock& coeffs, const QuantTable& table) {
  QuantizedBlock q;
  const auto& raster = coeffs.raster();
  for (int i = 0; i < kBlockArea; ++i) {
    q[i] = static_cast<std::int32_t>(
        round_half_away(raster[i] / table.divisors[i]));
  }
  return q;
}

CoeffBlock dequantize(const QuantizedBlock& q, const QuantTable& table) {
  CoeffBlock out;
  for (int i = 0; i < kBlockArea; ++i) {
    out(i / kBlockDim, i % kBlockDim) =
        static_cast<double>(q[i]) * table.divisors[i];
  }
  return out;
}

}  // namespace optidct
