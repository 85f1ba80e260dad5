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

#ifndef ENVBENCH_TONEMAP_H_
#define ENVBENCH_TONEMAP_H_

#include <cstdint>
#include <vector>

#include "envbench/image.h"

namespace envbench {

// Log-encoded maps live in [-1, 1]; SSIM on them uses this data range.
constexpr double kLogDataRange = 2.0;

struct ToneMapParams {
  double alpha_scale = 0.2;  // alpha = alpha_scale * mean(linear map)
  double gamma = 2.2;
  double clip_low = -1.0;
  double clip_high = 1.0;

  void Validate() const;
};

struct LogEncoded {
  Image map;           // Domain::kLog
  double alpha = 0.0;  // exposure factor used for the encoding
  bool degenerate = false;  // set when the input had zero mean (alpha == 0)
};

// G = min(max(0, log10(G_lin * alpha + 1)), 2) - 1 with alpha derived from the
// mean over all pixels and channels.
LogEncoded LogEncode(const Image& linear, const ToneMapParams& params = {});

// Same transform with a caller-supplied alpha (used to encode a prediction with
// the exposure of its reference). alpha must be >= 0.
Image LogEncodeWithAlpha(const Image& linear, double alpha);

// Inverse of the log transform: (10^(g + 1) - 1) / alpha.
Image LogDecode(const Image& log_map, double alpha);

// H x W x 4 network input: RGB followed by the mask channel, which is 0 on
// known pixels and 1 on unknown ones.
class NetworkInput {
 public:
  static constexpr int kChannels = 4;

  NetworkInput(int width, int height)
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height * kChannels, 0.0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double& at(int u, int v, int c) {
    return data_[(static_cast<std::size_t>(v) * width_ + u) * kChannels + c];
  }
  double at(int u, int v, int c) const {
    return data_[(static_cast<std::size_t>(v) * width_ + u) * kChannels + c];
  }
  const std::vector<double>& values() const { return data_; }

  Image Rgb() const;
  // Set where the mask channel marks a known pixel.
  BinaryMask Known() const;

  friend bool operator==(const NetworkInput&, const NetworkInput&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> data_;
};

// Exposure-compensates the known pixels of `partial` (divide by their mean),
// applies the display gamma, maps to [-1, 1] via 2x - 1 and clips; unknown
// pixels receive i.i.d. U(-1, 1) noise drawn from `rng_seed`.
// `known` marks the known pixels.
NetworkInput PrepareNetworkInput(const Image& partial, const BinaryMask& known,
                                 std::uint64_t rng_seed,
                                 const ToneMapParams& params = {});

}  // namespace envbench

#endif  // ENVBENCH_TONEMAP_H_
