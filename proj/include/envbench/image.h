// Copyright 2026 The envbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENVBENCH_IMAGE_H_
#define ENVBENCH_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace envbench {

// Base class for every error raised by the library. Precondition violations
// and degenerate inputs are reported by throwing; nothing is signalled through
// return codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interpretation of the values stored in an Image.
enum class Domain {
  kLinearHDR,      // radiance, >= 0
  kLog,            // log-encoded, in [-1, 1]
  kNormalizedLDR,  // display-referred, in [-1, 1]
};

const char* DomainName(Domain domain);

// Row-major H x W x 3 RGB image in double precision. Row 0 is the top of the
// image; for equirectangular maps that is the zenith.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  Image(int width, int height, Domain domain = Domain::kLinearHDR,
        double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  Domain domain() const { return domain_; }
  void set_domain(Domain domain) { domain_ = domain; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  // Canonical equirectangular maps have width == 2 * height.
  bool IsCanonical() const { return width_ > 0 && width_ == 2 * height_; }

  double& at(int u, int v, int c) { return data_[Index(u, v) + c]; }
  double at(int u, int v, int c) const { return data_[Index(u, v) + c]; }

  // Mean of the three channels at (u, v).
  double Intensity(int u, int v) const {
    const std::size_t i = Index(u, v);
    return (data_[i] + data_[i + 1] + data_[i + 2]) / 3.0;
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  // Checks the domain invariants (finite values, range for the tag).
  void Validate() const;

  bool SameSize(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.domain_ == b.domain_ && a.data_ == b.data_;
  }

 private:
  std::size_t Index(int u, int v) const {
    return (static_cast<std::size_t>(v) * width_ + u) * kChannels;
  }

  int width_ = 0;
  int height_ = 0;
  Domain domain_ = Domain::kLinearHDR;
  std::vector<double> data_;
};

// The library works exclusively on equirectangular environment maps, but crops
// and patches use the same container.
using EnvironmentMap = Image;

// H x W binary image. The meaning of a set pixel depends on the producer and is
// spelled out at every call site (known region, unknown region, projection
// polygon).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool at(int u, int v) const {
    return data_[static_cast<std::size_t>(v) * width_ + u] != 0;
  }
  void set(int u, int v, bool value) {
    data_[static_cast<std::size_t>(v) * width_ + u] = value ? 1 : 0;
  }

  std::size_t CountSet() const;
  bool Any() const { return CountSet() > 0; }
  BinaryMask Inverted() const;
  bool SameSize(const Image& image) const {
    return width_ == image.width() && height_ == image.height();
  }

  std::span<const std::uint8_t> values() const { return data_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Per-pixel scalar map (solid-angle weights and similar).
class WeightMap {
 public:
  WeightMap() = default;
  WeightMap(int width, int height, double fill = 0.0)
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double& at(int u, int v) {
    return data_[static_cast<std::size_t>(v) * width_ + u];
  }
  double at(int u, int v) const {
    return data_[static_cast<std::size_t>(v) * width_ + u];
  }
  std::span<const double> values() const { return data_; }
  double Sum() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

}  // namespace envbench

#endif  // ENVBENCH_IMAGE_H_
