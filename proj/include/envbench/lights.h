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

#ifndef ENVBENCH_LIGHTS_H_
#define ENVBENCH_LIGHTS_H_

#include <span>
#include <vector>

#include "envbench/geometry.h"
#include "envbench/image.h"
#include "envbench/masks.h"

namespace envbench {

// Ellipse in pixel space: points p with
//   ((p - c) . e1 / a)^2 + ((p - c) . e2 / b)^2 <= 1,
// where e1 = (cos angle, sin angle) is the major axis.
struct Ellipse {
  double center_u = 0.0;
  double center_v = 0.0;
  double a = 0.5;  // semi-major axis, pixels
  double b = 0.5;  // semi-minor axis, pixels
  double angle = 0.0;  // radians, major axis vs +u

  double Evaluate(const Point2& p) const;  // <= 1 inside
  double Area() const;
};

// Andrew's monotone chain; returns the hull counter-clockwise (in u/v
// coordinates) without collinear points. Duplicates are removed.
std::vector<Point2> ConvexHull(std::span<const Point2> points);

// Minimum-area ellipse enclosing the convex hull of `points` (Khachiyan
// iteration to a 1e-6 tolerance, then rescaled so that every hull point
// satisfies the ellipse inequality). Semi-axes never drop below 0.5 px, which
// also covers the single-point and collinear cases.
Ellipse FitEnclosingEllipse(std::span<const Point2> points);

struct ParametricLight {
  Direction direction = Direction::FromAngles(0.0, 0.0);
  Ellipse ellipse;
  double peak_intensity = 0.0;
  int region_pixel_count = 0;
  double solid_angle = 0.0;  // steradians covered by the region
  // Regions covering more than half the sphere have no meaningful direction
  // and are left out of AngularError.
  bool degenerate = false;
  // Region pixel centers and their hull, in seam-unwrapped index coordinates
  // (u may exceed width - 1).
  std::vector<Point2> region;
  std::vector<Point2> hull;
};

struct LightSet {
  std::vector<ParametricLight> lights;  // descending peak intensity

  std::vector<Direction> Directions() const;  // non-degenerate lights only
};

struct ExtractionOptions {
  int max_lights = 5;
  // Region growing keeps pixels >= region_fraction * seed intensity.
  double region_fraction = 0.30;
  // Extraction ends once the next seed is below stop_fraction * the first
  // (largest) seed.
  double stop_fraction = 0.90;
  double ambient_fraction = 0.5;  // of the full sphere
};

// Iterative peak finding with 4-connected region growing (columns wrap), hull
// and enclosing-ellipse fit per region. Intensity is the unweighted RGB mean.
LightSet ExtractLights(const Image& map, const ExtractionOptions& options = {});

// Great-circle angle in degrees, in [0, 180].
double AngularBetween(const Direction& a, const Direction& b);

// Mean over every light of both sets of its minimal angle to the other set.
// Degenerate lights are ignored; throws if either set ends up empty.
double AngularError(const LightSet& gt, const LightSet& pred);
double AngularError(std::span<const Direction> gt,
                    std::span<const Direction> pred);

}  // namespace envbench

#endif  // ENVBENCH_LIGHTS_H_
