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

#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "optidct/learner.h"
#include "optidct/quantizer.h"
#include "test_util.h"

namespace optidct {
namespace {

using testing::SyntheticPhoto;
using testing::UniformImage;

double MaxAbsDiff(const ImagePlanes& a, const ImagePlanes& b) {
  double m = 0;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (std::size_t i = 0; i < a.samples_per_plane(); ++i) {
      m = std::max(m, std::fabs(a.plane(ch)[i] - b.plane(ch)[i]));
    }
  }
  return m;
}

double LumaMse(const ImagePlanes& ycc_a, const ImagePlanes& ycc_b) {
  double s = 0;
  for (std::size_t i = 0; i < ycc_a.samples_per_plane(); ++i) {
    const double d = ycc_a.plane(0)[i] - ycc_b.plane(0)[i];
    s += d * d;
  }
  return s / static_cast<double>(ycc_a.samples_per_plane());
}

TEST(CodecTest, ImagePlanesRejectsEmptyDimensions) {
  EXPECT_THROW(ImagePlanes(0, 5), std::invalid_argument);
  EXPECT_THROW(ImagePlanes(5, -1), std::invalid_argument);
  const ImagePlanes img(3, 2);
  EXPECT_EQ(img.samples_per_plane(), 6u);
  EXPECT_EQ(img.at(2, 2, 1), 0.0);
}

TEST(CodecTest, GreyMapsToNeutralChroma) {
  for (double v : {0.0, 37.0, 128.0, 255.0}) {
    const ImagePlanes ycc = rgb_to_ycbcr(UniformImage(4, 4, v));
    EXPECT_EQ(ycc.color_space(), ColorSpace::kYCbCr);
    EXPECT_NEAR(ycc.at(0, 1, 1), v, 1e-9);
    EXPECT_NEAR(ycc.at(1, 1, 1), 128.0, 1e-9);
    EXPECT_NEAR(ycc.at(2, 1, 1), 128.0, 1e-9);
  }
}

TEST(CodecTest, PureRedLumaWeight) {
  ImagePlanes rgb(1, 1);
  rgb.at(0, 0, 0) = 255.0;
  const ImagePlanes ycc = rgb_to_ycbcr(rgb);
  EXPECT_NEAR(ycc.at(0, 0, 0), 0.299 * 255.0, 1e-9);  // 76.245
  EXPECT_NEAR(ycc.at(2, 0, 0), 128.0 + 0.5 * 255.0, 1e-9);
}

TEST(CodecTest, ColorConversionRoundTrips) {
  const ImagePlanes rgb = SyntheticPhoto(37, 23, 1);
  const ImagePlanes back = ycbcr_to_rgb(rgb_to_ycbcr(rgb));
  EXPECT_EQ(back.color_space(), ColorSpace::kRgb);
  EXPECT_LT(MaxAbsDiff(rgb, back), 1e-9);
}

TEST(CodecTest, ColorConversionChecksTag) {
  const ImagePlanes rgb = UniformImage(2, 2, 10);
  EXPECT_THROW(ycbcr_to_rgb(rgb), std::invalid_argument);
  EXPECT_THROW(rgb_to_ycbcr(rgb_to_ycbcr(rgb)), std::invalid_argument);
  EXPECT_THROW(encode(rgb_to_ycbcr(rgb), 50), std::invalid_argument);
}

TEST(CodecTest, CropCopiesTheRectangle) {
  const ImagePlanes img = SyntheticPhoto(20, 10, 2);
  const ImagePlanes c = crop(img, 3, 2, 5, 4);
  EXPECT_EQ(c.width(), 5);
  EXPECT_EQ(c.height(), 4);
  EXPECT_EQ(c.at(1, 0, 0), img.at(1, 3, 2));
  EXPECT_EQ(c.at(2, 4, 3), img.at(2, 7, 5));
  EXPECT_THROW(crop(img, 16, 0, 5, 4), std::out_of_range);
  EXPECT_THROW(crop(img, -1, 0, 5, 4), std::out_of_range);
}

TEST(CodecTest, ClampRoundsAndSaturates) {
  ImagePlanes img(4, 1);
  img.at(0, 0, 0) = -3.2;
  img.at(0, 1, 0) = 254.5;
  img.at(0, 2, 0) = 300.0;
  img.at(0, 3, 0) = 12.49;
  const ImagePlanes c = clamp_to_8bit(img);
  EXPECT_EQ(c.at(0, 0, 0), 0.0);
  EXPECT_EQ(c.at(0, 1, 0), 255.0);
  EXPECT_EQ(c.at(0, 2, 0), 255.0);
  EXPECT_EQ(c.at(0, 3, 0), 12.0);
}

TEST(CodecTest, MidGreyEncodesToZeros) {
  const EncodedImage enc = encode(UniformImage(16, 16, 128), 50);
  for (const auto& channel : enc.blocks) {
    ASSERT_EQ(channel.size(), 4u);
    for (const QuantizedBlock& q : channel) {
      for (std::int32_t v : q) EXPECT_EQ(v, 0);
    }
  }
  EXPECT_EQ(decode(enc, standard_inverse_kernel()), UniformImage(16, 16, 128));
}

TEST(CodecTest, BlockCountsRoundUp) {
  EXPECT_EQ(encode(UniformImage(8, 8, 10), 50).blocks_per_channel(), 1u);
  const EncodedImage e9 = encode(UniformImage(9, 9, 10), 50);
  EXPECT_EQ(e9.blocks_wide(), 2);
  EXPECT_EQ(e9.blocks_high(), 2);
  for (const auto& ch : e9.blocks) EXPECT_EQ(ch.size(), 4u);
  EXPECT_EQ(encode(UniformImage(17, 3, 10), 50).blocks_per_channel(), 3u);
}

TEST(CodecTest, PaddingReplicatesTheEdge) {
  const ImagePlanes small = SyntheticPhoto(11, 13, 3);
  ImagePlanes padded(16, 16);
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        padded.at(ch, x, y) = small.at(ch, std::min(x, 10), std::min(y, 12));
      }
    }
  }
  const EncodedImage a = encode(small, 75);
  const EncodedImage b = encode(padded, 75);
  for (int ch = 0; ch < kNumChannels; ++ch) EXPECT_EQ(a.blocks[ch], b.blocks[ch]);
}

TEST(CodecTest, OddDimensionsSurviveDecode) {
  const ImagePlanes img = SyntheticPhoto(13, 7, 4);
  const ImagePlanes out = decode(encode(img, 80), standard_inverse_kernel());
  EXPECT_EQ(out.width(), 13);
  EXPECT_EQ(out.height(), 7);
  EXPECT_EQ(out.color_space(), ColorSpace::kRgb);
}

TEST(CodecTest, NearLosslessAtQuality100) {
  const ImagePlanes img = SyntheticPhoto(64, 48, 5);
  const ImagePlanes out = decode(encode(img, 100), standard_inverse_kernel());
  std::size_t close = 0, total = 0;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (std::size_t i = 0; i < img.samples_per_plane(); ++i) {
      close += std::fabs(out.plane(ch)[i] - img.plane(ch)[i]) <= 2.0;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(close) / total, 0.99);
}

TEST(CodecTest, DecodeOutputIsEightBit) {
  const ImagePlanes out = decode(encode(SyntheticPhoto(40, 40, 6), 5),
                                 standard_inverse_kernel());
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (double v : out.plane(ch)) {
      EXPECT_EQ(v, std::round(v));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 255.0);
    }
  }
}

TEST(CodecTest, TransposeAsLearnedKernelIsBitIdentical) {
  const EncodedImage enc = encode(SyntheticPhoto(48, 40, 7), 60);
  const KernelMatrix learned =
      KernelMatrix::LearnedInverse(standard_inverse_kernel().entries());
  EXPECT_EQ(decode(enc, learned), decode(enc, standard_inverse_kernel()));
}

TEST(CodecTest, DecodeRejectsForwardKernel) {
  const EncodedImage enc = encode(UniformImage(8, 8, 3), 50);
  EXPECT_THROW(decode(enc, forward_kernel()), std::invalid_argument);
}

TEST(CodecTest, DecodeRejectsWrongBlockCount) {
  EncodedImage enc = encode(UniformImage(16, 8, 3), 50);
  enc.blocks[1].pop_back();
  EXPECT_THROW(decode(enc, standard_inverse_kernel()), std::invalid_argument);
}

TEST(CodecTest, ReconstructMatchesNaiveInverse) {
  const EncodedImage enc = encode(SyntheticPhoto(16, 16, 8), 40);
  const ImagePlanes ycc = reconstruct(enc, standard_inverse_kernel());
  const QuantTable t = table_from_qf(40);
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (int b = 0; b < 4; ++b) {
      const PixelBlock expected =
          testing::NaiveIdct(dequantize(enc.blocks[ch][b], t));
      const int bx = b % 2, by = b / 2;
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
          EXPECT_NEAR(ycc.at(ch, bx * 8 + c, by * 8 + r), expected(r, c) + 128.0,
                      1e-9);
        }
      }
    }
  }
}

TEST(CodecTest, CoefficientErrorBoundedByHalfStep) {
  const ImagePlanes img = SyntheticPhoto(32, 32, 9);
  const ImagePlanes ycc = rgb_to_ycbcr(img);
  for (int qf : {10, 50, 90}) {
    const EncodedImage enc = encode(img, qf);
    const QuantTable t = table_from_qf(qf);
    for (int b = 0; b < 16; ++b) {
      const int bx = b % 4, by = b / 4;
      PixelBlock x;
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) x(r, c) = ycc.at(0, bx * 8 + c, by * 8 + r) - 128;
      }
      const CoeffBlock exact = testing::NaiveDct(x);
      const CoeffBlock deq = dequantize(enc.blocks[0][b], t);
      for (int i = 0; i < kBlockArea; ++i) {
        EXPECT_LE(std::fabs(exact.raster()[i] - deq.raster()[i]),
                  t.divisors[i] / 2.0 + 1e-9);
      }
    }
  }
}

TEST(CodecTest, TrainingPairsUseFullBlocksOnly) {
  EXPECT_EQ(extract_training_pairs(SyntheticPhoto(16, 16, 1), 50).size(), 4u);
  EXPECT_EQ(extract_training_pairs(SyntheticPhoto(15, 15, 1), 50).size(), 1u);
  EXPECT_EQ(extract_training_pairs(SyntheticPhoto(7, 7, 1), 50).size(), 0u);
  EXPECT_EQ(extract_training_batch(SyntheticPhoto(7, 7, 1), 50).pixels.cols(), 0);
  EXPECT_EQ(extract_training_batch(SyntheticPhoto(23, 17, 1), 50).pixels.cols(), 4);
}

TEST(CodecTest, TrainingPairsAreConsistent) {
  const ImagePlanes img = SyntheticPhoto(24, 16, 10);
  const ImagePlanes ycc = rgb_to_ycbcr(img);
  const QuantTable t = table_from_qf(30);
  const std::vector<TrainingPair> pairs = extract_training_pairs(img, 30);
  ASSERT_EQ(pairs.size(), 6u);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const int bx = static_cast<int>(k % 3), by = static_cast<int>(k / 3);
    EXPECT_NEAR(pairs[k].pixels(2, 5), ycc.at(0, bx * 8 + 5, by * 8 + 2) - 128.0, 1e-12);
    EXPECT_EQ(pairs[k].dequantized,
              dequantize(quantize(testing::NaiveDct(pairs[k].pixels), t), t));
  }
}

TEST(CodecTest, TrainingBatchMatchesPairs) {
  const ImagePlanes img = SyntheticPhoto(40, 32, 11);
  const std::vector<TrainingPair> pairs = extract_training_pairs(img, 70);
  for (Execution exec : {Execution::kSerial, Execution::kParallel}) {
    const TrainingBatch batch = extract_training_batch(img, 70, exec);
    ASSERT_EQ(batch.pixels.cols(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      EXPECT_TRUE(batch.pixels.col(col) == flatten(pairs[k].pixels));
      EXPECT_TRUE(batch.dequantized.col(col) == flatten(pairs[k].dequantized));
    }
  }
}

TEST(CodecTest, LearnedKernelFitsItsTrainingDataBetter) {
  const ImagePlanes img = SyntheticPhoto(256, 256, 12);
  TrainingAccumulator acc(30);
  const TrainingBatch batch = extract_training_batch(img, 30);
  acc.accumulate_blocks(batch.pixels, batch.dequantized);
  const TrainedKernel tk = solve_kernel(acc, 0.0);

  const EncodedImage enc = encode(img, 30);
  const ImagePlanes ref = rgb_to_ycbcr(img);
  const double mse_std = LumaMse(ref, reconstruct(enc, standard_inverse_kernel()));
  const double mse_learned = LumaMse(ref, reconstruct(enc, tk.kernel));
  EXPECT_LE(mse_learned, mse_std);
}

}  // namespace
}  // namespace optidct
