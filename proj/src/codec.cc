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

#include "optidct/codec.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace optidct {
namespace {

using Eigen::Index;

// BT.601 full range, offsets excluded.
const Eigen::Matrix3d& RgbToYcc() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d t;
    t << 0.299, 0.587, 0.114,           //
        -0.168736, -0.331264, 0.5,      //
        0.5, -0.418688, -0.081312;
    return t;
  }();
  return m;
}

const Eigen::Matrix3d& YccToRgb() {
  static const Eigen::Matrix3d m = RgbToYcc().inverse();
  return m;
}

const Eigen::Vector3d kChromaOffset(0.0, 128.0, 128.0);

ImagePlanes ConvertColor(const ImagePlanes& in, ColorSpace to,
                         const Eigen::Matrix3d& m, const Eigen::Vector3d& pre,
                         const Eigen::Vector3d& post) {
  ImagePlanes out(in.width(), in.height(), to);
  const auto n = static_cast<std::int64_t>(in.samples_per_plane());
  const auto a0 = in.plane(0), a1 = in.plane(1), a2 = in.plane(2);
  auto b0 = out.plane(0), b1 = out.plane(1), b2 = out.plane(2);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::Vector3d v =
        m * (Eigen::Vector3d(a0[i], a1[i], a2[i]) - pre) + post;
    b0[i] = v[0];
    b1[i] = v[1];
    b2[i] = v[2];
  }
  return out;
}

void RequireColorSpace(const ImagePlanes& img, ColorSpace space,
                       const char* what) {
  if (img.color_space() != space) {
    throw std::invalid_argument(std::string(what) +
                                ": input has the wrong color space");
  }
}

// Tiles a plane into level-shifted blocks. Blocks that overhang the plane
// replicate the last row/column.
BlockMatrix GatherBlocks(std::span<const double> plane, int width, int height,
                         int blocks_wide, int blocks_high) {
  BlockMatrix out(kBlockArea, Index{blocks_wide} * blocks_high);
#pragma omp parallel for schedule(static)
  for (int by = 0; by < blocks_high; ++by) {
    for (int bx = 0; bx < blocks_wide; ++bx) {
      const Index col = Index{by} * blocks_wide + bx;
      for (int r = 0; r < kBlockDim; ++r) {
        const int y = std::min(by * kBlockDim + r, height - 1);
        for (int c = 0; c < kBlockDim; ++c) {
          const int x = std::min(bx * kBlockDim + c, width - 1);
          out(kBlockDim * r + c, col) =
              plane[static_cast<std::size_t>(y) * width + x] - kLevelShift;
        }
      }
    }
  }
  return out;
}

// Inverse of GatherBlocks for the part of each block inside the plane.
void ScatterBlocks(const BlockMatrix& blocks, int blocks_wide,
                   std::span<double> plane, int width, int height) {
  const int blocks_high = static_cast<int>(blocks.cols() / blocks_wide);
#pragma omp parallel for schedule(static)
  for (int by = 0; by < blocks_high; ++by) {
    for (int bx = 0; bx < blocks_wide; ++bx) {
      const Index col = Index{by} * blocks_wide + bx;
      for (int r = 0; r < kBlockDim; ++r) {
        const int y = by * kBlockDim + r;
        if (y >= height) break;
        for (int c = 0; c < kBlockDim; ++c) {
          const int x = bx * kBlockDim + c;
          if (x >= width) break;
          plane[static_cast<std::size_t>(y) * width + x] =
              blocks(kBlockDim * r + c, col) + kLevelShift;
        }
      }
    }
  }
}

std::vector<QuantizedBlock> QuantizeColumns(const BlockMatrix& coeffs,
                                            const QuantTable& table) {
  std::vector<QuantizedBlock> out(static_cast<std::size_t>(coeffs.cols()));
  const auto n = static_cast<std::int64_t>(coeffs.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < n; ++b) {
    for (int i = 0; i < kBlockArea; ++i) {
      out[b][i] = static_cast<std::int32_t>(
          round_half_away(coeffs(i, b) / table.divisors[i]));
    }
  }
  return out;
}

BlockMatrix DequantizeColumns(std::span<const QuantizedBlock> blocks,
                              const QuantTable& table) {
  BlockMatrix out(kBlockArea, static_cast<Index>(blocks.size()));
  const auto n = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < n; ++b) {
    for (int i = 0; i < kBlockArea; ++i) {
      out(i, b) = static_cast<double>(blocks[b][i]) * table.divisors[i];
    }
  }
  return out;
}

std::span<const double> LumaPlane(const ImagePlanes& ycc) { return ycc.plane(0); }

}  // namespace

ImagePlanes::ImagePlanes(int width, int height, ColorSpace space)
    : width_(width), height_(height), space_(space) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
  for (auto& p : planes_) p.assign(samples_per_plane(), 0.0);
}

ImagePlanes rgb_to_ycbcr(const ImagePlanes& rgb) {
  RequireColorSpace(rgb, ColorSpace::kRgb, "rgb_to_ycbcr");
  return ConvertColor(rgb, ColorSpace::kYCbCr, RgbToYcc(),
                      Eigen::Vector3d::Zero(), kChromaOffset);
}

ImagePlanes ycbcr_to_rgb(const ImagePlanes& ycbcr) {
  RequireColorSpace(ycbcr, ColorSpace::kYCbCr, "ycbcr_to_rgb");
  return ConvertColor(ycbcr, ColorSpace::kRgb, YccToRgb(), kChromaOffset,
                      Eigen::Vector3d::Zero());
}

ImagePlanes crop(const ImagePlanes& img, int x0, int y0, int width,
                 int height) {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 ||
      x0 + width > img.width() || y0 + height > img.height()) {
    throw std::out_of_range("crop rectangle outside the image");
  }
  ImagePlanes out(width, height, img.color_space());
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) out.at(ch, x, y) = img.at(ch, x0 + x, y0 + y);
    }
  }
  return out;
}

ImagePlanes clamp_to_8bit(ImagePlanes img) {
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (double& v : img.plane(ch)) v = std::clamp(round_half_away(v), 0.0, 255.0);
  }
  return img;
}

EncodedImage encode(const ImagePlanes& rgb, int qf, Execution exec) {
  RequireColorSpace(rgb, ColorSpace::kRgb, "encode");
  const QuantTable table = table_from_qf(qf);
  const ImagePlanes ycc = rgb_to_ycbcr(rgb);

  EncodedImage enc;
  enc.width = rgb.width();
  enc.height = rgb.height();
  enc.qf = qf;
  BlockMatrix coeffs;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    const BlockMatrix pixels = GatherBlocks(ycc.plane(ch), enc.width, enc.height,
                                            enc.blocks_wide(), enc.blocks_high());
    forward_dct_blocks(pixels, coeffs, exec);
    enc.blocks[ch] = QuantizeColumns(coeffs, table);
  }
  return enc;
}

ImagePlanes reconstruct(const EncodedImage& enc, const KernelMatrix& kernel,
                        Execution exec) {
  if (!kernel.is_inverse()) {
    throw std::invalid_argument("decode called with a forward kernel");
  }
  const QuantTable table = table_from_qf(enc.qf);
  ImagePlanes out(enc.width, enc.height, ColorSpace::kYCbCr);
  BlockMatrix pixels;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    if (enc.blocks[ch].size() != enc.blocks_per_channel()) {
      throw std::invalid_argument("encoded channel " + std::to_string(ch) +
                                  " has the wrong number of blocks");
    }
    const BlockMatrix coeffs = DequantizeColumns(enc.blocks[ch], table);
    inverse_transform_blocks(coeffs, kernel, pixels, exec);
    ScatterBlocks(pixels, enc.blocks_wide(), out.plane(ch), enc.width,
                  enc.height);
  }
  return out;
}

ImagePlanes decode(const EncodedImage& enc, const KernelMatrix& kernel,
                   Execution exec) {
  return clamp_to_8bit(ycbcr_to_rgb(reconstruct(enc, kernel, exec)));
}

std::vector<TrainingPair> extract_training_pairs(const ImagePlanes& rgb,
                                                 int qf) {
  RequireColorSpace(rgb, ColorSpace::kRgb, "extract_training_pairs");
  const QuantTable table = table_from_qf(qf);
  const ImagePlanes ycc = rgb_to_ycbcr(rgb);
  const int blocks_wide = rgb.width() / kBlockDim;
  const int blocks_high = rgb.height() / kBlockDim;

  std::vector<TrainingPair> pairs;
  pairs.reserve(static_cast<std::size_t>(blocks_wide) * blocks_high);
  for (int by = 0; by < blocks_high; ++by) {
    for (int bx = 0; bx < blocks_wide; ++bx) {
      PixelBlock block;
      for (int r = 0; r < kBlockDim; ++r) {
        for (int c = 0; c < kBlockDim; ++c) {
          block(r, c) =
              ycc.at(0, bx * kBlockDim + c, by * kBlockDim + r) - kLevelShift;
        }
      }
      pairs.push_back(
          {block, dequantize(quantize(forward_dct(block), table), table)});
    }
  }
  return pairs;
}

TrainingBatch extract_training_batch(const ImagePlanes& rgb, int qf,
                                     Execution exec) {
  RequireColorSpace(rgb, ColorSpace::kRgb, "extract_training_batch");
  const QuantTable table = table_from_qf(qf);
  TrainingBatch batch;
  const int blocks_wide = rgb.width() / kBlockDim;
  const int blocks_high = rgb.height() / kBlockDim;
  if (blocks_wide == 0 || blocks_high == 0) {
    batch.pixels.resize(kBlockArea, 0);
    batch.dequantized.resize(kBlockArea, 0);
    return batch;
  }
  const ImagePlanes ycc = rgb_to_ycbcr(rgb);
  batch.pixels = GatherBlocks(LumaPlane(ycc), ycc.width(), ycc.height(),
                              blocks_wide, blocks_high);
  BlockMatrix coeffs;
  forward_dct_blocks(batch.pixels, coeffs, exec);
  const std::vector<QuantizedBlock> q = QuantizeColumns(coeffs, table);
  batch.dequantized = DequantizeColumns(q, table);
  return batch;
}

}  // namespace optidct
