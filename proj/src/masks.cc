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

#include "envbench/masks.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "envbench/random.h"

namespace envbench {

namespace {

// Random convex polygon whose bounding box is exactly box_w x box_h, placed
// uniformly so that the box lies inside [0, width] x [0, height].
Polygon RandomConvexPolygon(Rng& rng, int width, int height, double min_frac,
                            double max_frac) {
  const double box_w = rng.Uniform(min_frac, max_frac) * width;
  const double box_h = rng.Uniform(min_frac, max_frac) * height;
  const int n = static_cast<int>(rng.UniformInt(5, 8));
  const double rotation = rng.Uniform(0.0, 2.0 * std::numbers::pi);

  // Jittered angles keep consecutive vertices apart, so the polygon never
  // collapses into a sliver.
  std::vector<Point2> unit(n);
  for (int i = 0; i < n; ++i) {
    const double t =
        rotation + 2.0 * std::numbers::pi * (i + rng.Uniform(0.15, 0.85)) / n;
    unit[i] = {std::cos(t), std::sin(t)};
  }
  double min_u = unit[0].u, max_u = unit[0].u;
  double min_v = unit[0].v, max_v = unit[0].v;
  for (const auto& p : unit) {
    min_u = std::min(min_u, p.u);
    max_u = std::max(max_u, p.u);
    min_v = std::min(min_v, p.v);
    max_v = std::max(max_v, p.v);
  }
  const double x0 = rng.Uniform(0.0, width - box_w);
  const double y0 = rng.Uniform(0.0, height - box_h);
  Polygon poly;
  poly.vertices.reserve(n);
  for (const auto& p : unit) {
    poly.vertices.push_back({x0 + (p.u - min_u) / (max_u - min_u) * box_w,
                             y0 + (p.v - min_v) / (max_v - min_v) * box_h});
  }
  return poly;
}

void CheckSizeRange(int width, int height, double min_frac) {
  if (min_frac * width < 1.0 || min_frac * height < 1.0) {
    throw Error("image " + std::to_string(width) + "x" +
                std::to_string(height) +
                " too small for the polygon size range");
  }
}

}  // namespace

double Polygon::SignedArea() const {
  double area = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    area += vertices[j].u * vertices[i].v - vertices[i].u * vertices[j].v;
  }
  return area / 2.0;
}

void Polygon::Validate() const {
  if (vertices.size() < 3) throw Error("polygon needs at least 3 vertices");
  for (const auto& p : vertices) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
      throw Error("polygon has non-finite vertex");
    }
  }
  if (!(std::abs(SignedArea()) > 1e-12)) {
    throw Error("degenerate polygon (zero area)");
  }
}

BinaryMask RasterizePolygon(const Polygon& polygon, int width, int height) {
  polygon.Validate();
  BinaryMask mask(width, height);
  const auto& pts = polygon.vertices;
  const std::size_t n = pts.size();
  std::vector<double> crossings;
  bool any = false;
  for (int v = 0; v < height; ++v) {
    const double y = v + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if ((pts[i].v > y) != (pts[j].v > y)) {
        crossings.push_back((pts[j].u - pts[i].u) * (y - pts[i].v) /
                                (pts[j].v - pts[i].v) +
                            pts[i].u);
      }
    }
    if (crossings.empty()) continue;
    std::sort(crossings.begin(), crossings.end());
    const double lo = crossings.front();
    const double hi = crossings.back();
    const int u_begin = std::max(0, static_cast<int>(std::floor(lo - 0.5)));
    const int u_end =
        std::min(width - 1, static_cast<int>(std::ceil(hi - 0.5)));
    for (int u = u_begin; u <= u_end; ++u) {
      const double x = u + 0.5;
      // Crossings strictly right of the center; odd count means inside.
      const auto right = crossings.end() -
                         std::upper_bound(crossings.begin(), crossings.end(), x);
      if (right % 2 == 1) {
        mask.set(u, v, true);
        any = true;
      }
    }
  }
  if (!any) throw EmptyMaskError("polygon covers no pixel center");
  return mask;
}

ProjectionMaskSet GenProjectionMasks(int width, int height, int count,
                                     std::uint64_t seed) {
  if (count < 1) throw Error("projection mask count must be >= 1");
  CheckSizeRange(width, height, 0.10);
  ProjectionMaskSet set;
  set.seed = seed;
  Rng rng(seed);
  while (static_cast<int>(set.masks.size()) < count) {
    Polygon poly = RandomConvexPolygon(rng, width, height, 0.10, 0.40);
    try {
      set.masks.push_back(RasterizePolygon(poly, width, height));
      set.polygons.push_back(std::move(poly));
    } catch (const EmptyMaskError&) {
      // Thin polygon between pixel centers; draw another.
    }
  }
  return set;
}

OcclusionMask GenOcclusionMask(int width, int height, std::uint64_t seed,
                               int n_regions) {
  if (n_regions < 1 || n_regions > 4) {
    throw Error("n_regions must lie in [1, 4]");
  }
  CheckSizeRange(width, height, 0.10);
  constexpr double kMinKnownFraction = 0.05;
  constexpr int kMaxAttempts = 64;
  const auto total = static_cast<double>(width) * height;

  Rng rng(seed);
  OcclusionMask out;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    out.unknown = BinaryMask(width, height);
    out.polygons.clear();
    while (static_cast<int>(out.polygons.size()) < n_regions) {
      Polygon poly = RandomConvexPolygon(rng, width, height, 0.10, 0.80);
      BinaryMask region;
      try {
        region = RasterizePolygon(poly, width, height);
      } catch (const EmptyMaskError&) {
        continue;
      }
      for (int v = 0; v < height; ++v)
        for (int u = 0; u < width; ++u)
          if (region.at(u, v)) out.unknown.set(u, v, true);
      out.polygons.push_back(std::move(poly));
    }
    const double known = 1.0 - out.unknown.CountSet() / total;
    if (known >= kMinKnownFraction) return out;
  }
  // A single polygon covers at most 64% of the image, so keeping only the
  // first region always satisfies the floor.
  out.polygons.resize(1);
  out.unknown = RasterizePolygon(out.polygons.front(), width, height);
  return out;
}

int CountComponents(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(mask.pixel_count(), 0);
  std::vector<int> stack;
  int components = 0;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const int idx = v * w + u;
      if (!mask.at(u, v) || label[idx]) continue;
      ++components;
      label[idx] = components;
      stack.push_back(idx);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cu = cur % w;
        const int cv = cur / w;
        const int nbrs[4][2] = {{(cu + 1) % w, cv},
                                {(cu + w - 1) % w, cv},
                                {cu, cv - 1},
                                {cu, cv + 1}};
        for (const auto& nb : nbrs) {
          if (nb[1] < 0 || nb[1] >= h) continue;
          const int nidx = nb[1] * w + nb[0];
          if (mask.at(nb[0], nb[1]) && !label[nidx]) {
            label[nidx] = components;
            stack.push_back(nidx);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace envbench
