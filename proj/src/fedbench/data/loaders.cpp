/*
 * Copyright 2026 The fedbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "fedbench/data/data.hpp"
#include "fedbench/error.hpp"

namespace fedbench::data {
namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
constexpr std::size_t kCifarPixels = 3072;
constexpr std::size_t kCifarRecord = kCifarPixels + 1;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw FormatError(path.string() + ": truncated header at offset " +
                      std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 28; shift >= 0; shift -= 4) s += kDigits[(v >> shift) & 0xF];
  return s;
}

void require_payload(const std::vector<std::uint8_t>& bytes, std::size_t header,
                     std::size_t payload, const std::filesystem::path& path) {
  if (bytes.size() < header + payload) {
    throw FormatError(path.string() + ": truncated at offset " +
                      std::to_string(bytes.size()) + ", expected " +
                      std::to_string(header + payload) + " bytes");
  }
}

std::filesystem::path first_existing(const std::filesystem::path& dir,
                                     std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto p = dir / name;
    if (std::filesystem::exists(p)) return p;
  }
  return dir / *names.begin();
}

}  // namespace

Dataset load_idx_pair(const std::filesystem::path& images_path,
                      const std::filesystem::path& labels_path) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);

  const std::uint32_t image_magic = read_be32(images, 0, images_path);
  if (image_magic != kIdxImagesMagic) {
    throw FormatError(images_path.string() + ": bad magic " + hex(image_magic) +
                      " at offset 0, expected " + hex(kIdxImagesMagic));
  }
  const std::uint32_t label_magic = read_be32(labels, 0, labels_path);
  if (label_magic != kIdxLabelsMagic) {
    throw FormatError(labels_path.string() + ": bad magic " + hex(label_magic) +
                      " at offset 0, expected " + hex(kIdxLabelsMagic));
  }

  const std::size_t count = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  const std::size_t label_count = read_be32(labels, 4, labels_path);
  if (count != label_count) {
    throw FormatError(labels_path.string() + ": label count " + std::to_string(label_count) +
                      " at offset 4 does not match image count " + std::to_string(count) +
                      " in " + images_path.string());
  }
  if (count == 0 || rows == 0 || cols == 0) {
    throw FormatError(images_path.string() + ": empty dimension in header at offset 4");
  }
  const std::size_t dim = rows * cols;
  require_payload(images, 16, count * dim, images_path);
  require_payload(labels, 8, count, labels_path);

  std::vector<double> features(count * dim);
  for (std::size_t i = 0; i < features.size(); ++i) features[i] = images[16 + i] / 255.0;
  std::vector<int> y(count);
  for (std::size_t i = 0; i < count; ++i) {
    y[i] = labels[8 + i];
    if (y[i] > 9) {
      throw FormatError(labels_path.string() + ": label " + std::to_string(y[i]) +
                        " out of range at offset " + std::to_string(8 + i));
    }
  }
  return Dataset(std::move(features), std::move(y), dim, 10);
}

Split load_mnist(const std::filesystem::path& dir) {
  auto train = load_idx_pair(
      first_existing(dir, {"train-images-idx3-ubyte", "train-images.idx3-ubyte"}),
      first_existing(dir, {"train-labels-idx1-ubyte", "train-labels.idx1-ubyte"}));
  auto test = load_idx_pair(
      first_existing(dir, {"t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte"}),
      first_existing(dir, {"t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte"}));
  return {std::move(train), std::move(test)};
}

namespace {

void append_cifar(const std::filesystem::path& file, std::vector<double>& features,
                  std::vector<int>& labels) {
  const auto bytes = read_file(file);
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw FormatError(file.string() + ": length " + std::to_string(bytes.size()) +
                      " is not a positive multiple of " + std::to_string(kCifarRecord) +
                      " (record ends at offset " +
                      std::to_string(bytes.size() - bytes.size() % kCifarRecord) + ")");
  }
  const std::size_t records = bytes.size() / kCifarRecord;
  features.reserve(features.size() + records * kCifarPixels);
  for (std::size_t r = 0; r < records; ++r) {
    const std::size_t base = r * kCifarRecord;
    if (bytes[base] > 9) {
      throw FormatError(file.string() + ": label " + std::to_string(bytes[base]) +
                        " out of range at offset " + std::to_string(base));
    }
    labels.push_back(bytes[base]);
    for (std::size_t j = 1; j < kCifarRecord; ++j) features.push_back(bytes[base + j] / 255.0);
  }
}

}  // namespace

Dataset load_cifar_batch(const std::filesystem::path& file) {
  std::vector<double> features;
  std::vector<int> labels;
  append_cifar(file, features, labels);
  return Dataset(std::move(features), std::move(labels), kCifarPixels, 10);
}

Split load_cifar10(const std::filesystem::path& dir) {
  std::vector<double> features;
  std::vector<int> labels;
  for (int b = 1; b <= 5; ++b) {
    append_cifar(dir / ("data_batch_" + std::to_string(b) + ".bin"), features, labels);
  }
  Dataset train(std::move(features), std::move(labels), kCifarPixels, 10);
  return {std::move(train), load_cifar_batch(dir / "test_batch.bin")};
}

}  // namespace fedbench::data
