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

// 8x8 block DCT expressed as 64x64 matrices acting on flattened blocks.
//
// A block is flattened in row-major raster order: sample (r, c) lands at
// index 8 * r + c. The same order is used for pixels and coefficients, and
// the learner and codec rely on it.

#ifndef OPTIDCT_TRANSFORM_H_
#define OPTIDCT_TRANSFORM_H_

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace optidct {

inline constexpr int kBlockDim = 8;
inline constexpr int kBlockArea = kBlockDim * kBlockDim;

using Vec64 = Eigen::Matrix<double, kBlockArea, 1>;
using Mat64 = Eigen::Matrix<double, kBlockArea, kBlockArea, Eigen::RowMajor>;
// Column i holds the i-th flattened block.
using BlockMatrix = Eigen::Matrix<double, kBlockArea, Eigen::Dynamic>;

// Selects the serial reference loop or the OpenMP kernel for the batched
// operations. Both produce the same values up to floating-point
// reassociation; the serial path exists for testing and benchmarking.
enum class Execution { kSerial, kParallel };

template <class Tag>
class Block {
 public:
  Block() = default;
  explicit Block(const std::array<double, kBlockArea>& values)
      : values_(values) {}

  double& operator()(int row, int col) { return values_[kBlockDim * row + col]; }
  double operator()(int row, int col) const {
    return values_[kBlockDim * row + col];
  }

  const std::array<double, kBlockArea>& raster() const { return values_; }

  friend bool operator==(const Block&, const Block&) = default;

 private:
  std::array<double, kBlockArea> values_{};
};

struct PixelTag {};
struct CoeffTag {};

// Level-shifted pixel intensities, nominally in [-128, 127].
using PixelBlock = Block<PixelTag>;
// DCT coefficients (raw or dequantized).
using CoeffBlock = Block<CoeffTag>;

template <class Tag>
Vec64 flatten(const Block<Tag>& block) {
  return Eigen::Map<const Vec64>(block.raster().data());
}

template <class BlockT>
BlockT unflatten(const Vec64& v) {
  BlockT block;
  for (int i = 0; i < kBlockArea; ++i) block(i / kBlockDim, i % kBlockDim) = v[i];
  return block;
}

enum class KernelKind { kForward, kStandardInverse, kLearnedInverse };

const char* to_string(KernelKind kind);

// Immutable 64x64 kernel tagged with its role. Safe to share across threads.
class KernelMatrix {
 public:
  // Orthonormal 2-D DCT-II: row (u, v), column (i, j) holds
  // c(u) c(v) / 4 * cos((2i+1)u pi/16) * cos((2j+1)v pi/16).
  static KernelMatrix Forward();
  // Transpose of Forward().
  static KernelMatrix StandardInverse();
  // Throws std::invalid_argument if any entry is not finite.
  static KernelMatrix LearnedInverse(const Mat64& entries);

  const Mat64& entries() const { return entries_; }
  KernelKind kind() const { return kind_; }
  bool is_inverse() const { return kind_ != KernelKind::kForward; }

 private:
  KernelMatrix(const Mat64& entries, KernelKind kind)
      : entries_(entries), kind_(kind) {}

  Mat64 entries_;
  KernelKind kind_;
};

KernelMatrix build_forward_kernel();

// Process-wide instances built once.
const KernelMatrix& forward_kernel();
const KernelMatrix& standard_inverse_kernel();

CoeffBlock forward_dct(const PixelBlock& block);

// Applies an inverse kernel. Throws std::invalid_argument for a forward
// kernel, which always means the caller wired the wrong matrix.
PixelBlock inverse_transform(const CoeffBlock& coeffs,
                             const KernelMatrix& kernel);

// out = matrix * in, one column per block.
void apply_blocks(const Mat64& matrix, const BlockMatrix& in, BlockMatrix& out,
                  Execution exec = Execution::kParallel);

void forward_dct_blocks(const BlockMatrix& pixels, BlockMatrix& coeffs,
                        Execution exec = Execution::kParallel);

void inverse_transform_blocks(const BlockMatrix& coeffs,
                              const KernelMatrix& kernel, BlockMatrix& pixels,
                              Execution exec = Execution::kParallel);

}  // namespace optidct

#endif  // OPTIDCT_TRANSFORM_H_
