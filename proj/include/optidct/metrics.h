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

#ifndef OPTIDCT_METRICS_H_
#define OPTIDCT_METRICS_H_

#include <array>
#include <limits>
#include <vector>

#include "optidct/codec.h"

namespace optidct {

// Returned by psnr_rgb() for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

struct QualityReport {
  double psnr_rgb = 0.0;
  double ssim = 0.0;
  std::array<double, kNumChannels> per_channel_mse{};
};

// Luma samples: plane 0 of a YCbCr image, BT.601 Y of an RGB image.
std::vector<double> luma(const ImagePlanes& img);

std::array<double, kNumChannels> channel_mse(const ImagePlanes& a,
                                             const ImagePlanes& b);

// 10 log10(255^2 / MSE) with the MSE pooled over all three channels.
// Throws std::invalid_argument on a size mismatch.
double psnr_rgb(const ImagePlanes& a, const ImagePlanes& b);

// Mean SSIM of the luma planes: 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2, evaluated only where the window
// fits inside the image. Throws std::invalid_argument on a size mismatch or
// an image smaller than the window.
double ssim(const ImagePlanes& a, const ImagePlanes& b,
            Execution exec = Execution::kParallel);

QualityReport evaluate_quality(const ImagePlanes& reference,
                               const ImagePlanes& decoded);

}  // namespace optidct

#endif  // OPTIDCT_METRICS_H_
