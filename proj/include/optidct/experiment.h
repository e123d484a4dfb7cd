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

// Training and evaluation runs over image corpora, with CSV reporting.

#ifndef OPTIDCT_EXPERIMENT_H_
#define OPTIDCT_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optidct/learner.h"

namespace optidct {

struct ExperimentConfig {
  std::vector<std::filesystem::path> train_paths;
  std::vector<std::filesystem::path> test_paths;
  std::vector<int> qf_list;
  // Unset means default_ridge_lambda() of each accumulator.
  std::optional<double> ridge_lambda;
  // Where kernel files and CSV reports go; empty writes nothing.
  std::filesystem::path output_dir;
  // Training blocks are taken on every grid shifted by multiples of this
  // step in x and y (8: the natural grid only, 4: four phases, ...). Must
  // divide 8.
  int grid_step = 8;
};

// Throws std::invalid_argument for an empty or out-of-range qf_list, a bad
// grid_step, a negative lambda, or an image listed in both train and test.
void validate_config(const ExperimentConfig& config);

struct TrainReport {
  int qf = 0;
  std::uint64_t sample_count = 0;
  double ridge_lambda = 0.0;
  double stationarity_residual = 0.0;
  double stationarity_tolerance = 0.0;
  std::string source_digest;
  std::filesystem::path kernel_path;  // empty if nothing was written
};

// One kernel per entry of qf_list, in that order. Images are read once and
// streamed into one accumulator per QF; unreadable images are skipped with
// a warning. Saves kernel_file_name(qf) under output_dir when set. Throws
// InsufficientDataError if no blocks (or fewer than 64) were collected.
std::vector<TrainedKernel> cmd_train(const ExperimentConfig& config,
                                     std::vector<TrainReport>* reports = nullptr);

struct EvalRow {
  std::string image;
  int qf = 0;
  int kernel_qf = 0;
  double psnr_std = 0.0;
  double psnr_learned = 0.0;
  double ssim_std = 0.0;
  double ssim_learned = 0.0;
};

struct GainSummary {
  int qf = 0;
  int kernel_qf = 0;
  std::size_t images = 0;
  double mean_psnr_std = 0.0;
  double mean_psnr_learned = 0.0;
  double mean_psnr_gain = 0.0;
  double mean_ssim_std = 0.0;
  double mean_ssim_learned = 0.0;
  double mean_ssim_gain = 0.0;
};

struct EvalResult {
  std::vector<EvalRow> rows;          // image-major, then qf_list order
  std::vector<GainSummary> summary;   // one per qf_list entry
};

// Encodes every test image at every QF in qf_list and decodes it with the
// standard kernel and with select_kernel(bank, qf). Writes eval.csv,
// eval_summary.csv and gain_table.csv under output_dir when set.
EvalResult cmd_eval(const ExperimentConfig& config,
                    std::span<const TrainedKernel> bank);

struct DistanceMatrix {
  std::vector<int> qfs;
  std::vector<std::vector<double>> distances;
};

// Pairwise kernel_distance() over the bank. Throws std::invalid_argument
// for fewer than two kernels.
DistanceMatrix cmd_kernel_dist(std::span<const TrainedKernel> bank);

// RFC 4180 CSV renderings, header row first.
std::string eval_rows_csv(const EvalResult& result);
std::string eval_summary_csv(const EvalResult& result);
// Rows "psnr_gain_db" and "ssim_gain", one column per QF.
std::string gain_table_csv(const EvalResult& result);
std::string distance_matrix_csv(const DistanceMatrix& matrix);

}  // namespace optidct

#endif  // OPTIDCT_EXPERIMENT_H_
