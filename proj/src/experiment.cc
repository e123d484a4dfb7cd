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

#include <cmath>
#include <cstdio>
#include <set>
#include <span>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "optidct/codec.h"
#include "optidct/errors.h"
#include "optidct/image_io.h"
#include "optidct/metrics.h"
#include "optidct/persistence.h"
#include "optidct/quantizer.h"
#include "file_util.h"

namespace optidct {
namespace {

namespace fs = std::filesystem;

std::string Number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteText(const fs::path& path, const std::string& text) {
  internal::WriteFile(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                      text.size()));
}

void EnsureOutputDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

fs::path Canonical(const fs::path& p) {
  std::error_code ec;
  fs::path c = fs::weakly_canonical(p, ec);
  return ec ? p.lexically_normal() : c;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.qf_list.empty()) throw std::invalid_argument("qf_list is empty");
  for (int qf : config.qf_list) {
    if (qf < kMinQuality || qf > kMaxQuality) {
      throw std::invalid_argument("quality factor " + std::to_string(qf) +
                                  " outside [1, 100]");
    }
  }
  if (config.grid_step <= 0 || kBlockDim % config.grid_step != 0) {
    throw std::invalid_argument("grid step must divide 8");
  }
  if (config.ridge_lambda && !(*config.ridge_lambda >= 0.0)) {
    throw std::invalid_argument("ridge lambda must be >= 0");
  }
  std::set<fs::path> train;
  for (const fs::path& p : config.train_paths) train.insert(Canonical(p));
  for (const fs::path& p : config.test_paths) {
    if (train.count(Canonical(p))) {
      throw std::invalid_argument("image " + p.string() +
                                  " is in both the training and test sets");
    }
  }
}

std::vector<TrainedKernel> cmd_train(const ExperimentConfig& config,
                                     std::vector<TrainReport>* reports) {
  validate_config(config);
  if (config.train_paths.empty()) {
    throw std::invalid_argument("no training images given");
  }

  std::vector<TrainingAccumulator> accs;
  for (int qf : config.qf_list) accs.emplace_back(qf);

  for (const fs::path& path : config.train_paths) {
    ImagePlanes img(1, 1);
    try {
      img = read_image(path);
    } catch (const Error& e) {
      spdlog::warn("skipping training image: {}", e.what());
      continue;
    }
    for (int dy = 0; dy < kBlockDim; dy += config.grid_step) {
      for (int dx = 0; dx < kBlockDim; dx += config.grid_step) {
        if (dx >= img.width() || dy >= img.height()) continue;
        const ImagePlanes shifted =
            (dx == 0 && dy == 0)
                ? img
                : crop(img, dx, dy, img.width() - dx, img.height() - dy);
        for (TrainingAccumulator& acc : accs) {
          const TrainingBatch batch =
              extract_training_batch(shifted, acc.training_qf());
          acc.accumulate_blocks(batch.pixels, batch.dequantized);
        }
      }
    }
  }
  if (accs.front().count() == 0) {
    throw InsufficientDataError("no training blocks could be extracted");
  }

  if (!config.output_dir.empty()) EnsureOutputDir(config.output_dir);
  std::vector<TrainedKernel> kernels;
  for (const TrainingAccumulator& acc : accs) {
    const double lambda = config.ridge_lambda.value_or(default_ridge_lambda(acc));
    TrainedKernel tk = solve_kernel(acc, lambda);
    TrainReport report{
        .qf = acc.training_qf(),
        .sample_count = acc.count(),
        .ridge_lambda = lambda,
        .stationarity_residual = stationarity_residual(acc, tk),
        .stationarity_tolerance = stationarity_tolerance(acc),
        .source_digest = tk.source_digest,
        .kernel_path = {},
    };
    if (!config.output_dir.empty()) {
      report.kernel_path = config.output_dir / kernel_file_name(acc.training_qf());
      save_kernel(tk, report.kernel_path);
    }
    spdlog::info("QF {}: {} blocks, lambda {:.6g}, stationarity residual {:.3g} "
                 "(tolerance {:.3g}), {}",
                 report.qf, report.sample_count, report.ridge_lambda,
                 report.stationarity_residual, report.stationarity_tolerance,
                 report.source_digest);
    if (reports) reports->push_back(report);
    kernels.push_back(std::move(tk));
  }
  return kernels;
}

EvalResult cmd_eval(const ExperimentConfig& config,
                    std::span<const TrainedKernel> bank) {
  validate_config(config);
  if (config.test_paths.empty()) throw std::invalid_argument("no test images given");
  if (bank.empty()) throw std::invalid_argument("kernel bank is empty");

  EvalResult result;
  for (const fs::path& path : config.test_paths) {
    const ImagePlanes original = read_image(path);
    for (int qf : config.qf_list) {
      const EncodedImage enc = encode(original, qf);
      const TrainedKernel& learned = select_kernel(bank, qf);
      const ImagePlanes std_img = decode(enc, standard_inverse_kernel());
      const ImagePlanes learned_img = decode(enc, learned.kernel);
      result.rows.push_back(EvalRow{
          .image = path.filename().string(),
          .qf = qf,
          .kernel_qf = learned.training_qf,
          .psnr_std = psnr_rgb(original, std_img),
          .psnr_learned = psnr_rgb(original, learned_img),
          .ssim_std = ssim(original, std_img),
          .ssim_learned = ssim(original, learned_img),
      });
    }
  }

  for (std::size_t q = 0; q < config.qf_list.size(); ++q) {
    GainSummary s;
    s.qf = config.qf_list[q];
    s.kernel_qf = select_kernel(bank, s.qf).training_qf;
    for (std::size_t i = q; i < result.rows.size(); i += config.qf_list.size()) {
      const EvalRow& row = result.rows[i];
      s.mean_psnr_std += row.psnr_std;
      s.mean_psnr_learned += row.psnr_learned;
      s.mean_psnr_gain += row.psnr_learned - row.psnr_std;
      s.mean_ssim_std += row.ssim_std;
      s.mean_ssim_learned += row.ssim_learned;
      s.mean_ssim_gain += row.ssim_learned - row.ssim_std;
      ++s.images;
    }
    const double n = static_cast<double>(s.images);
    s.mean_psnr_std /= n;
    s.mean_psnr_learned /= n;
    s.mean_psnr_gain /= n;
    s.mean_ssim_std /= n;
    s.mean_ssim_learned /= n;
    s.mean_ssim_gain /= n;
    result.summary.push_back(s);
  }

  if (!config.output_dir.empty()) {
    EnsureOutputDir(config.output_dir);
    WriteText(config.output_dir / "eval.csv", eval_rows_csv(result));
    WriteText(config.output_dir / "eval_summary.csv", eval_summary_csv(result));
    WriteText(config.output_dir / "gain_table.csv", gain_table_csv(result));
  }
  return result;
}

DistanceMatrix cmd_kernel_dist(std::span<const TrainedKernel> bank) {
  if (bank.size() < 2) {
    throw std::invalid_argument("need at least two kernels for a distance matrix");
  }
  DistanceMatrix m;
  m.distances.assign(bank.size(), std::vector<double>(bank.size(), 0.0));
  for (std::size_t i = 0; i < bank.size(); ++i) {
    m.qfs.push_back(bank[i].training_qf);
    for (std::size_t j = i + 1; j < bank.size(); ++j) {
      m.distances[i][j] = m.distances[j][i] = kernel_distance(bank[i], bank[j]);
    }
  }
  return m;
}

std::string eval_rows_csv(const EvalResult& result) {
  std::string out =
      "image,qf,kernel_qf,psnr_std,psnr_learned,ssim_std,ssim_learned\r\n";
  for (const EvalRow& r : result.rows) {
    out += CsvField(r.image) + "," + std::to_string(r.qf) + "," +
           std::to_string(r.kernel_qf) + "," + Number(r.psnr_std) + "," +
           Number(r.psnr_learned) + "," + Number(r.ssim_std) + "," +
           Number(r.ssim_learned) + "\r\n";
  }
  return out;
}

std::string eval_summary_csv(const EvalResult& result) {
  std::string out =
      "qf,kernel_qf,images,mean_psnr_std,mean_psnr_learned,mean_psnr_gain,"
      "mean_ssim_std,mean_ssim_learned,mean_ssim_gain\r\n";
  for (const GainSummary& s : result.summary) {
    out += std::to_string(s.qf) + "," + std::to_string(s.kernel_qf) + "," +
           std::to_string(s.images) + "," + Number(s.mean_psnr_std) + "," +
           Number(s.mean_psnr_learned) + "," + Number(s.mean_psnr_gain) + "," +
           Number(s.mean_ssim_std) + "," + Number(s.mean_ssim_learned) + "," +
           Number(s.mean_ssim_gain) + "\r\n";
  }
  return out;
}

std::string gain_table_csv(const EvalResult& result) {
  std::string header = "metric";
  std::string psnr = "psnr_gain_db";
  std::string ssim_row = "ssim_gain";
  for (const GainSummary& s : result.summary) {
    header += ",qf" + std::to_string(s.qf);
    psnr += "," + Number(s.mean_psnr_gain);
    ssim_row += "," + Number(s.mean_ssim_gain);
  }
  return header + "\r\n" + psnr + "\r\n" + ssim_row + "\r\n";
}

std::string distance_matrix_csv(const DistanceMatrix& matrix) {
  std::string out = "qf";
  for (int qf : matrix.qfs) out += "," + std::to_string(qf);
  out += "\r\n";
  for (std::size_t i = 0; i < matrix.qfs.size(); ++i) {
    out += std::to_string(matrix.qfs[i]);
    for (double d : matrix.distances[i]) out += "," + Number(d);
    out += "\r\n";
  }
  return out;
}

}  // namespace optidct
