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

// Least-squares fit of an inverse kernel that maps dequantized
// coefficients back to the original pixels.
//
// Samples are pairs (x_i, X_i) of flattened pixel and dequantized
// coefficient blocks. Rather than storing the 64xN matrices P = [x_i] and
// D = [X_i], the accumulator keeps P D^T and D D^T, which is all the
// ridge normal equations
//
//   K (D D^T + lambda I) = P D^T
//
// need. Memory is constant in N.

#ifndef OPTIDCT_LEARNER_H_
#define OPTIDCT_LEARNER_H_

#include <cstdint>
#include <span>
#include <string>

#include "optidct/transform.h"

namespace optidct {

// Below this many samples the fit is refused.
inline constexpr std::uint64_t kMinTrainingSamples = 64;
// Below this many samples solve_kernel() logs a warning (N should be well
// above 64^2).
inline constexpr std::uint64_t kRecommendedTrainingSamples = 4096;
// Relative singular-value cutoff of the pseudo-inverse fallback.
inline constexpr double kPseudoInverseCutoff = 1e-10;

class TrainingAccumulator {
 public:
  // All samples fed to one accumulator must come from the same quality
  // factor.
  explicit TrainingAccumulator(int training_qf);

  void accumulate(const PixelBlock& pixels, const CoeffBlock& dequantized);

  // Column i of `pixels` pairs with column i of `dequantized`. Partial
  // sums are formed over fixed-size column chunks and reduced in chunk
  // order, so the result does not depend on the thread count.
  void accumulate_blocks(const BlockMatrix& pixels,
                         const BlockMatrix& dequantized,
                         Execution exec = Execution::kParallel);

  // Throws std::invalid_argument if the quality factors differ.
  void merge(const TrainingAccumulator& other);

  int training_qf() const { return training_qf_; }
  // Running P D^T.
  const Mat64& cross() const { return cross_; }
  // Running D D^T.
  const Mat64& gram() const { return gram_; }
  std::uint64_t count() const { return count_; }

 private:
  int training_qf_;
  Mat64 cross_;
  Mat64 gram_;
  std::uint64_t count_ = 0;
};

struct TrainedKernel {
  KernelMatrix kernel;
  int training_qf = 0;
  std::uint64_t sample_count = 0;
  double ridge_lambda = 0.0;
  // Solver used plus a hash of the sufficient statistics.
  std::string source_digest;
};

// 1e-6 * trace(D D^T) / 64.
double default_ridge_lambda(const TrainingAccumulator& acc);

// Returns K = P D^T (D D^T + lambda I)^-1 via Cholesky. When the system is
// numerically singular the solve falls back to an SVD pseudo-inverse and
// says so in source_digest. Throws InsufficientDataError when fewer than
// 64 samples were accumulated, std::invalid_argument for negative lambda.
TrainedKernel solve_kernel(const TrainingAccumulator& acc, double lambda);

// max |(P D^T - K D D^T) - lambda K|, zero at the exact optimum.
double stationarity_residual(const TrainingAccumulator& acc,
                             const TrainedKernel& trained);
// 1e-6 * (1 + max |P D^T|).
double stationarity_tolerance(const TrainingAccumulator& acc);

// Frobenius norm of the kernel difference.
double kernel_distance(const TrainedKernel& a, const TrainedKernel& b);

// Bank member whose training QF is closest to `qf`; ties go to the higher
// training QF. Throws std::invalid_argument for an empty bank.
const TrainedKernel& select_kernel(std::span<const TrainedKernel> bank,
                                   int qf);

}  // namespace optidct

#endif  // OPTIDCT_LEARNER_H_
