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

#include "optidct/learner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <spdlog/spdlog.h>

#include "optidct/errors.h"
#include "optidct/quantizer.h"

namespace optidct {
namespace {

constexpr Eigen::Index kChunkColumns = 1024;

void CheckQuality(int qf) {
  if (qf < kMinQuality || qf > kMaxQuality) {
    throw std::out_of_range("training quality factor " + std::to_string(qf) +
                            " outside [1, 100]");
  }
}

// FNV-1a over raw bytes; only used to label provenance.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string Digest(const TrainingAccumulator& acc, const std::string& solver) {
  Fnv1a h;
  const int qf = acc.training_qf();
  const std::uint64_t n = acc.count();
  h.update(&qf, sizeof(qf));
  h.update(&n, sizeof(n));
  h.update(acc.cross().data(), sizeof(double) * acc.cross().size());
  h.update(acc.gram().data(), sizeof(double) * acc.gram().size());
  return solver + ";stats-fnv1a64=" + h.hex();
}

Mat64 PseudoInverse(const Mat64& m) {
  Eigen::JacobiSVD<Mat64> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = kPseudoInverseCutoff * sigma(0);
  Vec64 inv = Vec64::Zero();
  for (int i = 0; i < kBlockArea; ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

TrainingAccumulator::TrainingAccumulator(int training_qf)
    : training_qf_(training_qf), cross_(Mat64::Zero()), gram_(Mat64::Zero()) {
  CheckQuality(training_qf);
}

void TrainingAccumulator::accumulate(const PixelBlock& pixels,
                                     const CoeffBlock& dequantized) {
  const Vec64 x = flatten(pixels);
  const Vec64 d = flatten(dequantized);
  cross_.noalias() += x * d.transpose();
  gram_.noalias() += d * d.transpose();
  ++count_;
}

void TrainingAccumulator::accumulate_blocks(const BlockMatrix& pixels,
                                            const BlockMatrix& dequantized,
                                            Execution exec) {
  if (pixels.cols() != dequantized.cols()) {
    throw std::invalid_argument("pixel and coefficient batches differ in size");
  }
  const Eigen::Index n = pixels.cols();
  if (exec == Execution::kSerial) {
    for (Eigen::Index s = 0; s < n; ++s) {
      for (int r = 0; r < kBlockArea; ++r) {
        const double x = pixels(r, s);
        const double d = dequantized(r, s);
        for (int c = 0; c < kBlockArea; ++c) {
          cross_(r, c) += x * dequantized(c, s);
          gram_(r, c) += d * dequantized(c, s);
        }
      }
    }
    count_ += static_cast<std::uint64_t>(n);
    return;
  }

  const Eigen::Index chunks = (n + kChunkColumns - 1) / kChunkColumns;
  std::vector<Mat64> cross_parts(chunks);
  std::vector<Mat64> gram_parts(chunks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < chunks; ++k) {
    const Eigen::Index first = k * kChunkColumns;
    const Eigen::Index width = std::min(kChunkColumns, n - first);
    const auto d = dequantized.middleCols(first, width);
    cross_parts[k].noalias() = pixels.middleCols(first, width) * d.transpose();
    gram_parts[k].noalias() = d * d.transpose();
  }
  for (Eigen::Index k = 0; k < chunks; ++k) {
    cross_ += cross_parts[k];
    gram_ += gram_parts[k];
  }
  count_ += static_cast<std::uint64_t>(n);
}

void TrainingAccumulator::merge(const TrainingAccumulator& other) {
  if (other.training_qf_ != training_qf_) {
    throw std::invalid_argument("cannot merge accumulators of QF " +
                                std::to_string(training_qf_) + " and " +
                                std::to_string(other.training_qf_));
  }
  cross_ += other.cross_;
  gram_ += other.gram_;
  count_ += other.count_;
}

double default_ridge_lambda(const TrainingAccumulator& acc) {
  return 1e-6 * acc.gram().trace() / kBlockArea;
}

TrainedKernel solve_kernel(const TrainingAccumulator& acc, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("ridge lambda must be finite and >= 0");
  }
  if (acc.count() < kMinTrainingSamples) {
    throw InsufficientDataError(
        "need at least " + std::to_string(kMinTrainingSamples) +
        " training blocks, got " + std::to_string(acc.count()));
  }
  if (acc.count() < kRecommendedTrainingSamples) {
    spdlog::warn("only {} training blocks at QF {}; {} or more recommended",
                 acc.count(), acc.training_qf(), kRecommendedTrainingSamples);
  }

  const Mat64 system = acc.gram() + lambda * Mat64::Identity();
  Mat64 kernel;
  std::string solver;
  const Eigen::LLT<Mat64> llt(system);
  if (llt.info() == Eigen::Success && llt.rcond() > kPseudoInverseCutoff) {
    // system is symmetric: K^T = system^-1 (P D^T)^T.
    kernel = llt.solve(acc.cross().transpose()).transpose();
    solver = "cholesky";
  } else {
    kernel = acc.cross() * PseudoInverse(system);
    solver = "pinv(rcut=1e-10)";
    spdlog::info("QF {}: normal equations singular, used pseudo-inverse",
                 acc.training_qf());
  }

  return TrainedKernel{
      .kernel = KernelMatrix::LearnedInverse(kernel),
      .training_qf = acc.training_qf(),
      .sample_count = acc.count(),
      .ridge_lambda = lambda,
      .source_digest = Digest(acc, solver),
  };
}

double stationarity_residual(const TrainingAccumulator& acc,
                             const TrainedKernel& trained) {
  const Mat64& k = trained.kernel.entries();
  const Mat64 residual =
      (acc.cross() - k * acc.gram()) - trained.ridge_lambda * k;
  return residual.cwiseAbs().maxCoeff();
}

double stationarity_tolerance(const TrainingAccumulator& acc) {
  return 1e-6 * (1.0 + acc.cross().cwiseAbs().maxCoeff());
}

double kernel_distance(const TrainedKernel& a, const TrainedKernel& b) {
  return (a.kernel.entries() - b.kernel.entries()).norm();
}

const TrainedKernel& select_kernel(std::span<const TrainedKernel> bank,
                                   int qf) {
  if (bank.empty()) throw std::invalid_argument("kernel bank is empty");
  const TrainedKernel* best = &bank.front();
  for (const TrainedKernel& candidate : bank.subspan(1)) {
    const int d = std::abs(candidate.training_qf - qf);
    const int best_d = std::abs(best->training_qf - qf);
    if (d < best_d ||
        (d == best_d && candidate.training_qf > best->training_qf)) {
      best = &candidate;
    }
  }
  return *best;
}

}  // namespace optidct
