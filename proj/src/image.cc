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

#include "envbench/image.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace envbench {

const char* DomainName(Domain domain) {
  switch (domain) {
    case Domain::kLinearHDR:
      return "linear_hdr";
    case Domain::kLog:
      return "log";
    case Domain::kNormalizedLDR:
      return "normalized_ldr";
  }
  return "unknown";
}

Image::Image(int width, int height, Domain domain, double fill)
    : width_(width), height_(height), domain_(domain) {
  if (width <= 0 || height <= 0) {
    throw Error("image dimensions must be positive, got " +
                std::to_string(width) + "x" + std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

void Image::Validate() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double x = data_[i];
    if (!std::isfinite(x)) {
      throw Error("non-finite sample at index " + std::to_string(i));
    }
    if (domain_ == Domain::kLinearHDR && x < 0.0) {
      throw Error("negative radiance at index " + std::to_string(i));
    }
    if (domain_ != Domain::kLinearHDR && (x < -1.0 || x > 1.0)) {
      throw Error(std::string(DomainName(domain_)) +
                  " sample outside [-1, 1] at index " + std::to_string(i));
    }
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error("mask dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::CountSet() const {
  return static_cast<std::size_t>(
      std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::Inverted() const {
  BinaryMask out = *this;
  for (auto& x : out.data_) x = x ? 0 : 1;
  return out;
}

double WeightMap::Sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

}  // namespace envbench
