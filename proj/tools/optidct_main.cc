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

// optidct command-line tool: train, eval, encode, decode, kernel-dist.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "optidct/codec.h"
#include "optidct/errors.h"
#include "optidct/experiment.h"
#include "optidct/image_io.h"
#include "optidct/persistence.h"

namespace {

namespace fs = std::filesystem;
using namespace optidct;

struct Options {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<int> qf;
  double lambda = -1.0;
  int grid_step = 8;
  std::string kernel_bank;
  std::string kernel;
  std::vector<std::string> kernels;
  std::string out;
  std::string format = "csv";
  std::string input;
  bool quiet = false;
};

std::vector<fs::path> Paths(const std::vector<std::string>& in) {
  return {in.begin(), in.end()};
}

ExperimentConfig MakeConfig(const Options& o, CLI::App* cmd) {
  ExperimentConfig config;
  config.train_paths = Paths(o.train);
  config.test_paths = Paths(o.test);
  config.qf_list = o.qf;
  const CLI::Option* lambda = cmd->get_option_no_throw("--lambda");
  if (lambda && lambda->count()) config.ridge_lambda = o.lambda;
  config.output_dir = o.out;
  config.grid_step = o.grid_step;
  return config;
}

std::vector<TrainedKernel> LoadKernels(const Options& o) {
  if (!o.kernel_bank.empty()) return load_kernel_bank(o.kernel_bank);
  std::vector<TrainedKernel> bank;
  for (const std::string& k : o.kernels) bank.push_back(load_kernel(k));
  return bank;
}

void Emit(const std::string& text, const fs::path& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(path.parent_path().empty() ? fs::path(".")
                                                    : path.parent_path());
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot create " + path.string());
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

int RunTrain(const Options& o, CLI::App* cmd) {
  std::vector<TrainReport> reports;
  cmd_train(MakeConfig(o, cmd), &reports);
  std::string csv =
      "qf,sample_count,ridge_lambda,stationarity_residual,"
      "stationarity_tolerance,kernel_file\r\n";
  for (const TrainReport& r : reports) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%llu,%.9g,%.6g,%.6g,", r.qf,
                  static_cast<unsigned long long>(r.sample_count), r.ridge_lambda,
                  r.stationarity_residual, r.stationarity_tolerance);
    csv += buf + r.kernel_path.filename().string() + "\r\n";
  }
  Emit(csv, fs::path(o.out) / "train_report.csv");
  return 0;
}

int RunEval(const Options& o, CLI::App* cmd) {
  const std::vector<TrainedKernel> bank = load_kernel_bank(o.kernel_bank);
  const EvalResult result = cmd_eval(MakeConfig(o, cmd), bank);
  if (o.out.empty()) std::cout << eval_rows_csv(result);
  std::cerr << gain_table_csv(result);
  return 0;
}

int RunEncode(const Options& o) {
  const EncodedImage enc = encode(read_image(o.input), o.qf.at(0));
  save_encoded(enc, o.out);
  return 0;
}

int RunDecode(const Options& o) {
  const EncodedImage enc = load_encoded(o.input);
  ImagePlanes img(1, 1);
  if (!o.kernel.empty()) {
    img = decode(enc, load_kernel(o.kernel).kernel);
  } else if (!o.kernel_bank.empty()) {
    const std::vector<TrainedKernel> bank = load_kernel_bank(o.kernel_bank);
    const TrainedKernel& k = select_kernel(bank, enc.qf);
    spdlog::info("decoding QF {} with kernel trained at QF {}", enc.qf,
                 k.training_qf);
    img = decode(enc, k.kernel);
  } else {
    img = decode(enc, standard_inverse_kernel());
  }
  write_image(img, o.out);
  return 0;
}

int RunKernelDist(const Options& o) {
  const DistanceMatrix m = cmd_kernel_dist(LoadKernels(o));
  Emit(distance_matrix_csv(m),
       o.out.empty() ? fs::path() : fs::path(o.out) / "kernel_distance.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("optidct"));
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App app{"Learned inverse-DCT kernels for JPEG-style coding"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-q,--quiet", o.quiet, "Only log warnings and errors");

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Tabular output format")
        ->check(CLI::IsMember({"csv"}));
  };

  CLI::App* train = app.add_subcommand("train", "Learn one kernel per QF");
  train->add_option("--train", o.train, "Training images")->required();
  train->add_option("--test", o.test, "Test images (checked for overlap)");
  train->add_option("--qf", o.qf, "Quality factors, e.g. 50,70,90")
      ->required()->delimiter(',');
  train->add_option("--lambda", o.lambda,
                    "Ridge weight (default 1e-6 * trace(DD^T) / 64)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--grid-step", o.grid_step,
                    "Also sample grids shifted by this step (divides 8)");
  train->add_option("--out", o.out, "Output directory")->required();
  add_format(train);

  CLI::App* eval = app.add_subcommand("eval", "Compare standard and learned decoding");
  eval->add_option("--test", o.test, "Test images")->required();
  eval->add_option("--train", o.train, "Training images (checked for overlap)");
  eval->add_option("--qf", o.qf, "Quality factors to encode at")
      ->required()->delimiter(',');
  eval->add_option("--kernel-bank", o.kernel_bank, "Directory of .oidk files")
      ->required();
  eval->add_option("--out", o.out, "Output directory (default: CSV to stdout)");
  add_format(eval);

  CLI::App* enc = app.add_subcommand("encode", "Encode an image to .oide");
  enc->add_option("input", o.input, "Input image (PPM/PGM/PNG)")->required();
  enc->add_option("--qf", o.qf, "Quality factor")->required()->expected(1);
  enc->add_option("-o,--out", o.out, "Output .oide file")->required();

  CLI::App* dec = app.add_subcommand("decode", "Decode an .oide file");
  dec->add_option("input", o.input, "Encoded .oide file")->required();
  auto* kernel_opt = dec->add_option("--kernel", o.kernel, "Learned kernel file");
  dec->add_option("--kernel-bank", o.kernel_bank,
                  "Pick the kernel with the nearest QF from this directory")
      ->excludes(kernel_opt);
  dec->add_option("-o,--out", o.out, "Output image (.ppm or .png)")->required();

  CLI::App* dist = app.add_subcommand("kernel-dist", "Pairwise kernel distances");
  dist->add_option("kernels", o.kernels, "Kernel files");
  dist->add_option("--kernel-bank", o.kernel_bank, "Directory of .oidk files");
  dist->add_option("--out", o.out, "Output directory (default: stdout)");
  add_format(dist);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (o.quiet) spdlog::set_level(spdlog::level::warn);

  try {
    if (*train) return RunTrain(o, train);
    if (*eval) return RunEval(o, eval);
    if (*enc) return RunEncode(o);
    if (*dec) return RunDecode(o);
    if (*dist) return RunKernelDist(o);
  } catch (const std::exception& e) {
    std::cerr << "optidct: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
