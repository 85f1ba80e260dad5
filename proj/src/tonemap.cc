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

#include "envbench/tonemap.h"

#include <algorithm>
#include <cmath>

#include "envbench/random.h"

namespace envbench {

void ToneMapParams::Validate() const {
  if (!(alpha_scale > 0.0)) throw Error("alpha_scale must be positive");
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
  if (!(clip_low < clip_high)) throw Error("clip range is empty");
}

Image LogEncodeWithAlpha(const Image& linear, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error("alpha must be finite and non-negative");
  }
  Image out(linear.width(), linear.height(), Domain::kLog);
  auto src = linear.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double g = std::log10(src[i] * alpha + 1.0);
    dst[i] = std::min(std::max(0.0, g), 2.0) - 1.0;
  }
  return out;
}

LogEncoded LogEncode(const Image& linear, const ToneMapParams& params) {
  params.Validate();
  if (linear.domain() != Domain::kLinearHDR) {
    throw Error("log encoding expects a linear HDR map");
  }
  linear.Validate();
  double sum = 0.0;
  for (double x : linear.values()) sum += x;
  const double mean = sum / static_cast<double>(linear.values().size());
  LogEncoded out;
  out.alpha = params.alpha_scale * mean;
  out.degenerate = !(out.alpha > 0.0);
  out.map = LogEncodeWithAlpha(linear, out.alpha);
  return out;
}

Image LogDecode(const Image& log_map, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error("log decoding requires alpha > 0");
  }
  Image out(log_map.width(), log_map.height(), Domain::kLinearHDR);
  auto src = log_map.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double g = std::clamp(src[i], -1.0, 1.0);
    dst[i] = (std::pow(10.0, g + 1.0) - 1.0) / alpha;
  }
  return out;
}

Image NetworkInput::Rgb() const {
  Image out(width_, height_, Domain::kNormalizedLDR);
  for (int v = 0; v < height_; ++v)
    for (int u = 0; u < width_; ++u)
      for (int c = 0; c < 3; ++c) out.at(u, v, c) = at(u, v, c);
  return out;
}

BinaryMask NetworkInput::Known() const {
  BinaryMask out(width_, height_);
  for (int v = 0; v < height_; ++v)
    for (int u = 0; u < width_; ++u) out.set(u, v, at(u, v, 3) == 0.0);
  return out;
}

NetworkInput PrepareNetworkInput(const Image& partial, const BinaryMask& known,
                                 std::uint64_t rng_seed,
                                 const ToneMapParams& params) {
  params.Validate();
  if (!known.SameSize(partial)) {
    throw Error("mask and map dimensions differ");
  }
  if (partial.domain() != Domain::kLinearHDR) {
    throw Error("network input preparation expects a linear HDR map");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (int v = 0; v < partial.height(); ++v) {
    for (int u = 0; u < partial.width(); ++u) {
      if (!known.at(u, v)) continue;
      for (int c = 0; c < 3; ++c) {
        const double x = partial.at(u, v, c);
        if (!std::isfinite(x) || x < 0.0) {
          throw Error("known pixels must be finite and non-negative");
        }
        sum += x;
      }
      count += 3;
    }
  }
  if (count == 0) throw Error("no known pixels");
  const double mean = sum / static_cast<double>(count);
  const double inv_gamma = 1.0 / params.gamma;

  NetworkInput out(partial.width(), partial.height());
  Rng rng(rng_seed);
  for (int v = 0; v < partial.height(); ++v) {
    for (int u = 0; u < partial.width(); ++u) {
      if (known.at(u, v)) {
        for (int c = 0; c < 3; ++c) {
          // A known region that is entirely black stays black.
          const double exposed = mean > 0.0 ? partial.at(u, v, c) / mean : 0.0;
          const double x = 2.0 * std::pow(exposed, inv_gamma) - 1.0;
          out.at(u, v, c) = std::clamp(x, params.clip_low, params.clip_high);
        }
        out.at(u, v, 3) = 0.0;
      } else {
        for (int c = 0; c < 3; ++c) out.at(u, v, c) = rng.Uniform(-1.0, 1.0);
        out.at(u, v, 3) = 1.0;
      }
    }
  }
  return out;
}

}  // namespace envbench
