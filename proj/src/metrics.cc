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

#include "optidct/metrics.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace optidct {
namespace {

constexpr double kPeak = 255.0;
constexpr double kC1 = (0.01 * kPeak) * (0.01 * kPeak);
constexpr double kC2 = (0.03 * kPeak) * (0.03 * kPeak);
constexpr int kRadius = kSsimWindow / 2;

void RequireSameSize(const ImagePlanes& a, const ImagePlanes& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument(
        "image sizes differ: " + std::to_string(a.width()) + "x" +
        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
        std::to_string(b.height()));
  }
}

const std::array<double, kSsimWindow>& GaussianTaps() {
  static const std::array<double, kSsimWindow> taps = [] {
    std::array<double, kSsimWindow> t;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - kRadius;
      t[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    }
    const double sum = std::accumulate(t.begin(), t.end(), 0.0);
    for (double& v : t) v /= sum;
    return t;
  }();
  return taps;
}

double SsimTerm(double mu_a, double mu_b, double e_aa, double e_bb,
                double e_ab) {
  const double var_a = e_aa - mu_a * mu_a;
  const double var_b = e_bb - mu_b * mu_b;
  const double cov = e_ab - mu_a * mu_b;
  return ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
         ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
}

// Direct 2-D window sums at every valid center.
double SsimSerial(const std::vector<double>& a, const std::vector<double>& b,
                  int w, int h) {
  const auto& g = GaussianTaps();
  double total = 0.0;
  for (int y = kRadius; y < h - kRadius; ++y) {
    for (int x = kRadius; x < w - kRadius; ++x) {
      double ma = 0, mb = 0, aa = 0, bb = 0, ab = 0;
      for (int dy = -kRadius; dy <= kRadius; ++dy) {
        for (int dx = -kRadius; dx <= kRadius; ++dx) {
          const double wt = g[dy + kRadius] * g[dx + kRadius];
          const std::size_t i = static_cast<std::size_t>(y + dy) * w + (x + dx);
          ma += wt * a[i];
          mb += wt * b[i];
          aa += wt * a[i] * a[i];
          bb += wt * b[i] * b[i];
          ab += wt * a[i] * b[i];
        }
      }
      total += SsimTerm(ma, mb, aa, bb, ab);
    }
  }
  const double count =
      static_cast<double>(w - 2 * kRadius) * static_cast<double>(h - 2 * kRadius);
  return total / count;
}

// Separable filtering: a horizontal pass over every row, then a vertical
// pass per output row. Row sums are reduced serially for a result that
// does not depend on the thread count.
double SsimParallel(const std::vector<double>& a, const std::vector<double>& b,
                    int w, int h) {
  const auto& g = GaussianTaps();
  const int out_w = w - 2 * kRadius;
  const int out_h = h - 2 * kRadius;
  constexpr int kMoments = 5;
  // Horizontally filtered moments, h rows of out_w samples each.
  std::vector<double> horiz(static_cast<std::size_t>(kMoments) * h * out_w);
  const auto hidx = [&](int m, int y, int x) {
    return (static_cast<std::size_t>(m) * h + y) * out_w + x;
  };

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* ra = &a[static_cast<std::size_t>(y) * w];
    const double* rb = &b[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < out_w; ++x) {
      double ma = 0, mb = 0, aa = 0, bb = 0, ab = 0;
      for (int k = 0; k < kSsimWindow; ++k) {
        const double va = ra[x + k], vb = rb[x + k];
        ma += g[k] * va;
        mb += g[k] * vb;
        aa += g[k] * va * va;
        bb += g[k] * vb * vb;
        ab += g[k] * va * vb;
      }
      horiz[hidx(0, y, x)] = ma;
      horiz[hidx(1, y, x)] = mb;
      horiz[hidx(2, y, x)] = aa;
      horiz[hidx(3, y, x)] = bb;
      horiz[hidx(4, y, x)] = ab;
    }
  }

  std::vector<double> row_sums(out_h, 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_h; ++y) {
    double sum = 0.0;
    for (int x = 0; x < out_w; ++x) {
      double m[kMoments] = {0, 0, 0, 0, 0};
      for (int k = 0; k < kSsimWindow; ++k) {
        for (int j = 0; j < kMoments; ++j) m[j] += g[k] * horiz[hidx(j, y + k, x)];
      }
      sum += SsimTerm(m[0], m[1], m[2], m[3], m[4]);
    }
    row_sums[y] = sum;
  }
  const double total = std::accumulate(row_sums.begin(), row_sums.end(), 0.0);
  return total / (static_cast<double>(out_w) * static_cast<double>(out_h));
}

}  // namespace

std::vector<double> luma(const ImagePlanes& img) {
  const auto p0 = img.plane(0);
  if (img.color_space() == ColorSpace::kYCbCr) {
    return {p0.begin(), p0.end()};
  }
  const auto p1 = img.plane(1);
  const auto p2 = img.plane(2);
  std::vector<double> y(img.samples_per_plane());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 0.299 * p0[i] + 0.587 * p1[i] + 0.114 * p2[i];
  }
  return y;
}

std::array<double, kNumChannels> channel_mse(const ImagePlanes& a,
                                             const ImagePlanes& b) {
  RequireSameSize(a, b);
  std::array<double, kNumChannels> mse{};
  for (int ch = 0; ch < kNumChannels; ++ch) {
    const auto pa = a.plane(ch);
    const auto pb = b.plane(ch);
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double d = pa[i] - pb[i];
      sum += d * d;
    }
    mse[ch] = sum / static_cast<double>(pa.size());
  }
  return mse;
}

double psnr_rgb(const ImagePlanes& a, const ImagePlanes& b) {
  const auto per_channel = channel_mse(a, b);
  const double mse =
      std::accumulate(per_channel.begin(), per_channel.end(), 0.0) /
      kNumChannels;
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(kPeak * kPeak / mse);
}

double ssim(const ImagePlanes& a, const ImagePlanes& b, Execution exec) {
  RequireSameSize(a, b);
  if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
    throw std::invalid_argument("SSIM needs images of at least 11x11");
  }
  const std::vector<double> ya = luma(a);
  const std::vector<double> yb = luma(b);
  return exec == Execution::kSerial
             ? SsimSerial(ya, yb, a.width(), a.height())
             : SsimParallel(ya, yb, a.width(), a.height());
}

QualityReport evaluate_quality(const ImagePlanes& reference,
                               const ImagePlanes& decoded) {
  QualityReport report;
  report.per_channel_mse = channel_mse(reference, decoded);
  report.psnr_rgb = psnr_rgb(reference, decoded);
  report.ssim = ssim(reference, decoded);
  return report;
}

}  // namespace optidct
