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

#ifndef ENVBENCH_MASKS_H_
#define ENVBENCH_MASKS_H_

#include <cstdint>
#include <vector>

#include "envbench/image.h"

namespace envbench {

struct Point2 {
  double u = 0.0;
  double v = 0.0;
};

// Simple polygon in continuous pixel coordinates (pixel (u, v) covers
// [u, u+1) x [v, v+1)).
struct Polygon {
  std::vector<Point2> vertices;

  double SignedArea() const;
  void Validate() const;  // >= 3 vertices, non-zero area
};

// Raised when a rasterization covers no pixel center.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

// Even-odd scanline fill: a pixel is set iff its center lies inside the
// polygon. Throws EmptyMaskError when nothing is covered.
BinaryMask RasterizePolygon(const Polygon& polygon, int width, int height);

struct ProjectionMaskSet {
  std::vector<BinaryMask> masks;     // set pixels belong to the polygon
  std::vector<Polygon> polygons;     // generating polygon of each mask
  std::uint64_t seed = 0;

  std::size_t size() const { return masks.size(); }
};

constexpr int kDefaultProjectionMaskCount = 50;

// Randomized convex polygons whose bounding boxes span 10%-40% of the image
// width and height, placed fully inside the image. Pure function of its
// arguments.
ProjectionMaskSet GenProjectionMasks(int width, int height,
                                     int count = kDefaultProjectionMaskCount,
                                     std::uint64_t seed = 0);

struct OcclusionMask {
  BinaryMask unknown;              // set = unknown (occluded) pixel
  std::vector<Polygon> polygons;   // regions that were kept
};

// Training occlusion: the union of `n_regions` random polygons with extents of
// up to 80% of the image. At least 5% of the pixels always remain known.
OcclusionMask GenOcclusionMask(int width, int height, std::uint64_t seed,
                               int n_regions);

// Number of 4-connected components of set pixels; columns wrap around.
int CountComponents(const BinaryMask& mask);

}  // namespace envbench

#endif  // ENVBENCH_MASKS_H_
