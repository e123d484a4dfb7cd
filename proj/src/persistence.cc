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

#include "optidct/persistence.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <zlib.h>

#include "optidct/errors.h"
#include "optidct/quantizer.h"
#include "file_util.h"

namespace optidct {
namespace {

namespace fs = std::filesystem;

constexpr std::uint8_t kKernelMagic[4] = {'O', 'I', 'D', 'K'};
constexpr std::uint8_t kEncodedMagic[4] = {'O', 'I', 'D', 'E'};

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

class ByteWriter {
 public:
  void raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  template <class T>
  void le(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(u & 0xFF));
      if constexpr (sizeof(T) > 1) u >>= 8;
    }
  }
  void f64(double value) { le(std::bit_cast<std::uint64_t>(value)); }
  void crc() { le(Crc32(out_)); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, const char* what)
      : bytes_(bytes), what_(what) {}

  template <class T>
  T le() {
    need(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(
               static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }

  bool magic(const std::uint8_t (&expected)[4]) {
    if (bytes_.size() - pos_ < 4) return false;
    const bool ok = std::equal(expected, expected + 4, bytes_.begin() + pos_);
    pos_ += 4;
    return ok;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string(what_) + ": truncated file");
    }
  }

  std::span<const std::uint8_t> bytes_;
  const char* what_;
  std::size_t pos_ = 0;
};

// Checks the trailing CRC-32 over everything before it.
void VerifyCrc(std::span<const std::uint8_t> bytes, const char* what) {
  const std::size_t body = bytes.size() - 4;
  ByteReader tail(bytes.subspan(body), what);
  if (tail.le<std::uint32_t>() != Crc32(bytes.first(body))) {
    throw ChecksumError(std::string(what) + ": checksum mismatch");
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_kernel(const TrainedKernel& tk) {
  if (tk.training_qf < kMinQuality || tk.training_qf > kMaxQuality) {
    throw std::invalid_argument("training QF outside [1, 100]");
  }
  ByteWriter w;
  w.raw(kKernelMagic);
  w.le<std::uint32_t>(kKernelFileVersion);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(tk.training_qf));
  w.f64(tk.ridge_lambda);
  w.le<std::uint64_t>(tk.sample_count);
  const Mat64& k = tk.kernel.entries();
  for (int r = 0; r < kBlockArea; ++r) {
    for (int c = 0; c < kBlockArea; ++c) w.f64(k(r, c));
  }
  w.crc();
  return w.take();
}

TrainedKernel parse_kernel(std::span<const std::uint8_t> bytes) {
  constexpr const char* kWhat = "kernel file";
  ByteReader r(bytes, kWhat);
  if (!r.magic(kKernelMagic)) throw FormatError("kernel file: bad magic");
  if (bytes.size() != kKernelFileSize) {
    throw FormatError("kernel file: expected " +
                      std::to_string(kKernelFileSize) + " bytes, found " +
                      std::to_string(bytes.size()));
  }
  VerifyCrc(bytes, kWhat);
  const auto version = r.le<std::uint32_t>();
  if (version != kKernelFileVersion) {
    throw FormatError("kernel file: unsupported version " +
                      std::to_string(version));
  }
  const int qf = r.le<std::uint8_t>();
  if (qf < kMinQuality || qf > kMaxQuality) {
    throw FormatError("kernel file: training QF " + std::to_string(qf) +
                      " outside [1, 100]");
  }
  const double lambda = r.f64();
  const auto count = r.le<std::uint64_t>();
  Mat64 k;
  for (int row = 0; row < kBlockArea; ++row) {
    for (int col = 0; col < kBlockArea; ++col) k(row, col) = r.f64();
  }
  if (!k.allFinite()) throw FormatError("kernel file: non-finite entries");
  return TrainedKernel{
      .kernel = KernelMatrix::LearnedInverse(k),
      .training_qf = qf,
      .sample_count = count,
      .ridge_lambda = lambda,
      .source_digest = "kernel-file",
  };
}

void save_kernel(const TrainedKernel& tk, const fs::path& path) {
  internal::WriteFile(path, serialize_kernel(tk));
}

TrainedKernel load_kernel(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = internal::ReadFile(path);
  try {
    TrainedKernel tk = parse_kernel(bytes);
    tk.source_digest = "kernel-file:" + path.filename().string();
    return tk;
  } catch (const ChecksumError& e) {
    throw ChecksumError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string kernel_file_name(int qf) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "kernel_qf%03d.oidk", qf);
  return buf;
}

std::vector<TrainedKernel> load_kernel_bank(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".oidk") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  if (files.empty()) throw IoError("no .oidk kernel files in " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<TrainedKernel> bank;
  for (const fs::path& f : files) bank.push_back(load_kernel(f));
  std::stable_sort(bank.begin(), bank.end(),
                   [](const TrainedKernel& a, const TrainedKernel& b) {
                     return a.training_qf < b.training_qf;
                   });
  return bank;
}

std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc) {
  ByteWriter w;
  w.raw(kEncodedMagic);
  w.le<std::uint32_t>(kEncodedFileVersion);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(enc.width));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(enc.height));
  w.le<std::uint8_t>(static_cast<std::uint8_t>(enc.qf));
  w.le<std::uint8_t>(kNumChannels);
  for (const auto& channel : enc.blocks) {
    w.le<std::uint32_t>(static_cast<std::uint32_t>(channel.size()));
    for (const QuantizedBlock& block : channel) {
      for (std::int32_t v : block) {
        if (v < std::numeric_limits<std::int16_t>::min() ||
            v > std::numeric_limits<std::int16_t>::max()) {
          throw std::out_of_range("quantized coefficient does not fit in i16");
        }
        w.le<std::int16_t>(static_cast<std::int16_t>(v));
      }
    }
  }
  w.crc();
  return w.take();
}

EncodedImage parse_encoded(std::span<const std::uint8_t> bytes) {
  constexpr const char* kWhat = "encoded image";
  ByteReader r(bytes, kWhat);
  if (!r.magic(kEncodedMagic)) throw FormatError("encoded image: bad magic");
  if (bytes.size() < 4 + 4 + 4 + 4 + 1 + 1 + 4) {
    throw FormatError("encoded image: truncated file");
  }
  VerifyCrc(bytes, kWhat);
  const auto version = r.le<std::uint32_t>();
  if (version != kEncodedFileVersion) {
    throw FormatError("encoded image: unsupported version " +
                      std::to_string(version));
  }
  EncodedImage enc;
  const auto width = r.le<std::uint32_t>();
  const auto height = r.le<std::uint32_t>();
  enc.qf = r.le<std::uint8_t>();
  const int channels = r.le<std::uint8_t>();
  constexpr auto kMaxDim =
      static_cast<std::uint32_t>(std::numeric_limits<int>::max() / 2);
  if (width == 0 || height == 0 || width > kMaxDim || height > kMaxDim) {
    throw FormatError("encoded image: bad dimensions");
  }
  if (enc.qf < kMinQuality || enc.qf > kMaxQuality) {
    throw FormatError("encoded image: QF outside [1, 100]");
  }
  if (channels != kNumChannels) {
    throw FormatError("encoded image: expected 3 channels");
  }
  enc.width = static_cast<int>(width);
  enc.height = static_cast<int>(height);
  for (auto& channel : enc.blocks) {
    const auto count = r.le<std::uint32_t>();
    if (count != enc.blocks_per_channel()) {
      throw FormatError("encoded image: block count does not match size");
    }
    if (r.remaining() < std::size_t{count} * kBlockArea * 2 + 4) {
      throw FormatError("encoded image: truncated file");
    }
    channel.resize(count);
    for (QuantizedBlock& block : channel) {
      for (std::int32_t& v : block) v = r.le<std::int16_t>();
    }
  }
  if (r.remaining() != 4) throw FormatError("encoded image: trailing bytes");
  return enc;
}

void save_encoded(const EncodedImage& enc, const fs::path& path) {
  internal::WriteFile(path, serialize_encoded(enc));
}

EncodedImage load_encoded(const fs::path& path) {
  try {
    return parse_encoded(internal::ReadFile(path));
  } catch (const ChecksumError& e) {
    throw ChecksumError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace optidct
