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

#include "optidct/experiment.h"

#include <fstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "optidct/errors.h"
#include "optidct/image_io.h"
#include "optidct/metrics.h"
#include "optidct/persistence.h"
#include "test_util.h"

namespace optidct {
namespace {

namespace fs = std::filesystem;
using testing::SyntheticPhoto;
using testing::TempDir;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (int i = 0; i < 3; ++i) {
      train_.push_back(dir_ / ("train" + std::to_string(i) + ".ppm"));
      write_image(SyntheticPhoto(96, 80, 100 + i), train_.back());
    }
    for (int i = 0; i < 2; ++i) {
      test_.push_back(dir_ / ("test" + std::to_string(i) + ".png"));
      write_image(SyntheticPhoto(64, 48, 200 + i), test_.back());
    }
  }

  ExperimentConfig Config(const fs::path& out) const {
    ExperimentConfig c;
    c.train_paths = train_;
    c.test_paths = test_;
    c.qf_list = {50, 70, 90};
    c.output_dir = out;
    return c;
  }

  TempDir dir_{"experiment"};
  std::vector<fs::path> train_;
  std::vector<fs::path> test_;
};

TEST_F(ExperimentTest, ValidatesConfig) {
  ExperimentConfig c = Config({});
  EXPECT_NO_THROW(validate_config(c));

  ExperimentConfig empty_qf = c;
  empty_qf.qf_list.clear();
  EXPECT_THROW(validate_config(empty_qf), std::invalid_argument);

  ExperimentConfig bad_qf = c;
  bad_qf.qf_list = {50, 0};
  EXPECT_THROW(validate_config(bad_qf), std::invalid_argument);

  ExperimentConfig bad_step = c;
  bad_step.grid_step = 3;
  EXPECT_THROW(validate_config(bad_step), std::invalid_argument);

  ExperimentConfig negative = c;
  negative.ridge_lambda = -1.0;
  EXPECT_THROW(validate_config(negative), std::invalid_argument);

  ExperimentConfig overlap = c;
  overlap.test_paths.push_back(dir_.path() / "." / "train1.ppm");
  EXPECT_THROW(validate_config(overlap), std::invalid_argument);
}

TEST_F(ExperimentTest, TrainWritesOneKernelPerQuality) {
  std::vector<TrainReport> reports;
  const auto kernels = cmd_train(Config(dir_ / "bank"), &reports);
  ASSERT_EQ(kernels.size(), 3u);
  ASSERT_EQ(reports.size(), 3u);
  for (int qf : {50, 70, 90}) {
    EXPECT_TRUE(fs::exists(dir_ / "bank" / kernel_file_name(qf)));
  }
  for (const TrainReport& r : reports) {
    EXPECT_EQ(r.sample_count, 3u * 12 * 10);
    EXPECT_LT(r.stationarity_residual, r.stationarity_tolerance);
  }
  EXPECT_EQ(load_kernel_bank(dir_ / "bank").size(), 3u);
}

TEST_F(ExperimentTest, GridStepMultipliesSamples) {
  ExperimentConfig c = Config({});
  c.qf_list = {50};
  c.grid_step = 4;
  std::vector<TrainReport> reports;
  cmd_train(c, &reports);
  // Phases (0,0), (4,0), (0,4), (4,4) on 96x80: 120 + 110 + 108 + 99 blocks.
  EXPECT_EQ(reports[0].sample_count, 3u * (120 + 110 + 108 + 99));
}

TEST_F(ExperimentTest, TrainingIsBitReproducible) {
  cmd_train(Config(dir_ / "a"));
  cmd_train(Config(dir_ / "b"));
  for (int qf : {50, 70, 90}) {
    const std::string name = kernel_file_name(qf);
    EXPECT_EQ(Slurp(dir_ / "a" / name), Slurp(dir_ / "b" / name));
  }
}

TEST_F(ExperimentTest, TinyTrainingSetIsInsufficient) {
  ExperimentConfig c = Config({});
  c.train_paths = {dir_ / "tiny.ppm"};
  write_image(SyntheticPhoto(8, 8, 1), c.train_paths[0]);
  EXPECT_THROW(cmd_train(c), InsufficientDataError);
}

TEST_F(ExperimentTest, UnreadableImagesAreSkipped) {
  ExperimentConfig c = Config({});
  c.qf_list = {50};
  std::ofstream(dir_ / "junk.ppm") << "not an image";
  c.train_paths.push_back(dir_ / "junk.ppm");
  c.train_paths.push_back(dir_ / "missing.ppm");
  std::vector<TrainReport> reports;
  EXPECT_NO_THROW(cmd_train(c, &reports));
  EXPECT_EQ(reports[0].sample_count, 3u * 12 * 10);

  c.train_paths = {dir_ / "junk.ppm"};
  EXPECT_THROW(cmd_train(c), InsufficientDataError);
}

TEST_F(ExperimentTest, StandardKernelBankGivesZeroGain) {
  const TrainedKernel kt{
      KernelMatrix::LearnedInverse(standard_inverse_kernel().entries()), 70, 0,
      0.0, "transpose"};
  const std::vector<TrainedKernel> bank = {kt};
  const EvalResult r = cmd_eval(Config({}), bank);
  ASSERT_EQ(r.rows.size(), 6u);
  for (const EvalRow& row : r.rows) {
    EXPECT_EQ(row.psnr_std, row.psnr_learned);
    EXPECT_EQ(row.ssim_std, row.ssim_learned);
    EXPECT_EQ(row.kernel_qf, 70);
  }
  for (const GainSummary& s : r.summary) {
    EXPECT_EQ(s.mean_psnr_gain, 0.0);
    EXPECT_EQ(s.mean_ssim_gain, 0.0);
    EXPECT_EQ(s.images, 2u);
  }
}

TEST_F(ExperimentTest, EvalWritesCsvFiles) {
  const std::vector<TrainedKernel> bank = cmd_train(Config({}));
  const EvalResult r = cmd_eval(Config(dir_ / "eval"), bank);
  EXPECT_EQ(r.rows[0].image, "test0.png");
  EXPECT_EQ(r.rows[1].qf, 70);
  EXPECT_EQ(r.rows[3].image, "test1.png");

  const std::string rows = Slurp(dir_ / "eval" / "eval.csv");
  EXPECT_EQ(rows.rfind("image,qf,kernel_qf,psnr_std,psnr_learned,ssim_std,ssim_learned\r\n", 0),
            0u);
  EXPECT_NE(rows.find("\r\ntest0.png,50,50,"), std::string::npos);
  EXPECT_EQ(rows, eval_rows_csv(r));
  EXPECT_EQ(Slurp(dir_ / "eval" / "eval_summary.csv"), eval_summary_csv(r));

  const std::string gains = Slurp(dir_ / "eval" / "gain_table.csv");
  EXPECT_EQ(gains.rfind("metric,qf50,qf70,qf90\r\npsnr_gain_db,", 0), 0u);
  EXPECT_NE(gains.find("\r\nssim_gain,"), std::string::npos);
}

TEST(CsvTest, FormatsNumbersAndQuotes) {
  EvalResult r;
  r.rows.push_back({"a,b.ppm", 50, 50, kInfinitePsnr, 30.25, 1.0, 0.5});
  EXPECT_EQ(eval_rows_csv(r),
            "image,qf,kernel_qf,psnr_std,psnr_learned,ssim_std,ssim_learned\r\n"
            "\"a,b.ppm\",50,50,inf,30.250000,1.000000,0.500000\r\n");
}

TEST(KernelDistTest, MatrixIsSymmetricWithZeroDiagonal) {
  const Mat64 kt = standard_inverse_kernel().entries();
  const std::vector<TrainedKernel> bank = {
      {KernelMatrix::LearnedInverse(kt), 50, 1, 0, ""},
      {KernelMatrix::LearnedInverse(2 * kt), 70, 1, 0, ""},
      {KernelMatrix::LearnedInverse(4 * kt), 90, 1, 0, ""}};
  const DistanceMatrix m = cmd_kernel_dist(bank);
  ASSERT_EQ(m.qfs, (std::vector<int>{50, 70, 90}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(m.distances[i][i], 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.distances[i][j], m.distances[j][i]);
  }
  EXPECT_NEAR(m.distances[0][1], 8.0, 1e-12);
  EXPECT_NEAR(m.distances[0][2], 24.0, 1e-12);
  const std::string csv = distance_matrix_csv(m);
  EXPECT_EQ(csv.rfind("qf,50,70,90\r\n50,0.000000,8.000000,24.000000\r\n", 0), 0u);

  EXPECT_THROW(cmd_kernel_dist(std::span(bank).first(1)), std::invalid_argument);
}

}  // namespace
}  // namespace optidct
