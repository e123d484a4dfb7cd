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

// Whole-image JPEG-style pipeline without entropy coding: BT.601
// full-range YCbCr at 4:4:4, 8x8 tiling with edge replication, level shift,
// forward DCT and quantization with a single luminance table. Decoding
// takes the inverse kernel as a parameter, so the standard and learned
// paths share every other step.

#ifndef OPTIDCT_CODEC_H_
#define OPTIDCT_CODEC_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "optidct/quantizer.h"
#include "optidct/transform.h"

namespace optidct {

enum class ColorSpace { kRgb, kYCbCr };

inline constexpr int kNumChannels = 3;
inline constexpr double kLevelShift = 128.0;

// Three full-resolution planes of real-valued samples, row-major.
class ImagePlanes {
 public:
  // Zero-filled. Throws std::invalid_argument unless width, height > 0.
  ImagePlanes(int width, int height, ColorSpace space = ColorSpace::kRgb);

  int width() const { return width_; }
  int height() const { return height_; }
  ColorSpace color_space() const { return space_; }
  std::size_t samples_per_plane() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double& at(int channel, int x, int y) {
    return planes_[channel][static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int channel, int x, int y) const {
    return planes_[channel][static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<double> plane(int channel) { return planes_[channel]; }
  std::span<const double> plane(int channel) const { return planes_[channel]; }

  friend bool operator==(const ImagePlanes&, const ImagePlanes&) = default;

 private:
  int width_;
  int height_;
  ColorSpace space_;
  std::array<std::vector<double>, kNumChannels> planes_;
};

// Quantized coefficients of every channel, blocks in raster block order.
struct EncodedImage {
  int width = 0;
  int height = 0;
  int qf = 0;
  std::array<std::vector<QuantizedBlock>, kNumChannels> blocks;

  int blocks_wide() const { return (width + kBlockDim - 1) / kBlockDim; }
  int blocks_high() const { return (height + kBlockDim - 1) / kBlockDim; }
  std::size_t blocks_per_channel() const {
    return static_cast<std::size_t>(blocks_wide()) * blocks_high();
  }
};

// One (x_i, X_q,i) sample for the learner.
struct TrainingPair {
  PixelBlock pixels;      // level-shifted luma
  CoeffBlock dequantized;  // DeQuan(Quan(K x_i))
};

// Same samples as extract_training_pairs(), one column per block.
struct TrainingBatch {
  BlockMatrix pixels;
  BlockMatrix dequantized;
};

// Throw std::invalid_argument on the wrong input color space.
ImagePlanes rgb_to_ycbcr(const ImagePlanes& rgb);
ImagePlanes ycbcr_to_rgb(const ImagePlanes& ycbcr);

// Sub-rectangle copy. Throws std::out_of_range if it leaves the image.
ImagePlanes crop(const ImagePlanes& img, int x0, int y0, int width,
                 int height);

// Rounds half away from zero and clamps every sample to [0, 255].
ImagePlanes clamp_to_8bit(ImagePlanes img);

// Expects RGB input and 1 <= qf <= 100.
EncodedImage encode(const ImagePlanes& rgb, int qf,
                    Execution exec = Execution::kParallel);

// Dequantize, inverse transform, undo the level shift and crop; the
// result stays in YCbCr without clamping or rounding.
ImagePlanes reconstruct(const EncodedImage& enc, const KernelMatrix& kernel,
                        Execution exec = Execution::kParallel);

// reconstruct() followed by conversion to RGB and 8-bit clamping. Throws
// std::invalid_argument for a forward kernel.
ImagePlanes decode(const EncodedImage& enc, const KernelMatrix& kernel,
                   Execution exec = Execution::kParallel);

// Training samples from every full 8x8 luma block; partial edge blocks are
// dropped. Images smaller than 8x8 yield nothing.
std::vector<TrainingPair> extract_training_pairs(const ImagePlanes& rgb,
                                                 int qf);
TrainingBatch extract_training_batch(const ImagePlanes& rgb, int qf,
                                     Execution exec = Execution::kParallel);

}  // namespace optidct

#endif  // OPTIDCT_CODEC_H_
