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

#include "optidct/transform.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace optidct {
namespace {

// Columns handed to one OpenMP work item. Fixed so the partition does not
// depend on the thread count.
constexpr Eigen::Index kChunkColumns = 256;

void RequireInverse(const KernelMatrix& kernel) {
  if (!kernel.is_inverse()) {
    throw std::invalid_argument(
        "inverse transform called with a forward kernel");
  }
}

void ApplySerial(const Mat64& m, const BlockMatrix& in, BlockMatrix& out) {
  for (Eigen::Index b = 0; b < in.cols(); ++b) {
    for (int r = 0; r < kBlockArea; ++r) {
      double sum = 0.0;
      for (int c = 0; c < kBlockArea; ++c) sum += m(r, c) * in(c, b);
      out(r, b) = sum;
    }
  }
}

void ApplyParallel(const Mat64& m, const BlockMatrix& in, BlockMatrix& out) {
  const Eigen::Index n = in.cols();
  const Eigen::Index chunks = (n + kChunkColumns - 1) / kChunkColumns;
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < chunks; ++k) {
    const Eigen::Index first = k * kChunkColumns;
    const Eigen::Index width = std::min(kChunkColumns, n - first);
    out.middleCols(first, width).noalias() = m * in.middleCols(first, width);
  }
}

}  // namespace

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kForward:
      return "forward";
    case KernelKind::kStandardInverse:
      return "standard-inverse";
    case KernelKind::kLearnedInverse:
      return "learned-inverse";
  }
  return "unknown";
}

KernelMatrix KernelMatrix::Forward() {
  const auto norm = [](int k) { return k == 0 ? std::numbers::sqrt2 / 2 : 1.0; };
  Mat64 k;
  for (int u = 0; u < kBlockDim; ++u) {
    for (int v = 0; v < kBlockDim; ++v) {
      for (int i = 0; i < kBlockDim; ++i) {
        for (int j = 0; j < kBlockDim; ++j) {
          k(kBlockDim * u + v, kBlockDim * i + j) =
              norm(u) * norm(v) / 4.0 *
              std::cos((2 * i + 1) * u * std::numbers::pi / 16.0) *
              std::cos((2 * j + 1) * v * std::numbers::pi / 16.0);
        }
      }
    }
  }
  return KernelMatrix(k, KernelKind::kForward);
}

KernelMatrix KernelMatrix::StandardInverse() {
  return KernelMatrix(forward_kernel().entries().transpose(),
                      KernelKind::kStandardInverse);
}

KernelMatrix KernelMatrix::LearnedInverse(const Mat64& entries) {
  if (!entries.allFinite()) {
    throw std::invalid_argument("learned kernel has non-finite entries");
  }
  return KernelMatrix(entries, KernelKind::kLearnedInverse);
}

KernelMatrix build_forward_kernel() { return KernelMatrix::Forward(); }

const KernelMatrix& forward_kernel() {
  static const KernelMatrix kernel = KernelMatrix::Forward();
  return kernel;
}

const KernelMatrix& standard_inverse_kernel() {
  static const KernelMatrix kernel = KernelMatrix::StandardInverse();
  return kernel;
}

CoeffBlock forward_dct(const PixelBlock& block) {
  const Vec64 coeffs = forward_kernel().entries() * flatten(block);
  return unflatten<CoeffBlock>(coeffs);
}

PixelBlock inverse_transform(const CoeffBlock& coeffs,
                             const KernelMatrix& kernel) {
  RequireInverse(kernel);
  const Vec64 pixels = kernel.entries() * flatten(coeffs);
  return unflatten<PixelBlock>(pixels);
}

void apply_blocks(const Mat64& matrix, const BlockMatrix& in, BlockMatrix& out,
                  Execution exec) {
  out.resize(kBlockArea, in.cols());
  if (exec == Execution::kSerial) {
    ApplySerial(matrix, in, out);
  } else {
    ApplyParallel(matrix, in, out);
  }
}

void forward_dct_blocks(const BlockMatrix& pixels, BlockMatrix& coeffs,
                        Execution exec) {
  apply_blocks(forward_kernel().entries(), pixels, coeffs, exec);
}

void inverse_transform_blocks(const BlockMatrix& coeffs,
                              const KernelMatrix& kernel, BlockMatrix& pixels,
                              Execution exec) {
  RequireInverse(kernel);
  apply_blocks(kernel.entries(), coeffs, pixels, exec);
}

}  // namespace optidct
