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

#ifndef ENVBENCH_GEOMETRY_H_
#define ENVBENCH_GEOMETRY_H_

#include <array>

#include <Eigen/Core>

#include "envbench/image.h"

namespace envbench {

// Equirectangular convention used throughout:
//   * row 0 is the zenith (+z), the last row the nadir;
//   * column 0 starts at azimuth -180 degrees, azimuth grows to the right;
//   * the horizontal image center is azimuth 0, looking along +x;
//   * azimuth +90 degrees is +y.
// Pixel (u, v) has its center at continuous coordinate (u + 0.5, v + 0.5) in
// the sense of the formulas below; the continuous coordinates returned by
// DirectionToPixel are in index units, so pixel centers land on integers.

// Unit 3-vector, right-handed, +z up, +x forward.
class Direction {
 public:
  // Normalizes `v`; throws for a zero vector.
  static Direction Normalized(const Eigen::Vector3d& v);
  // Accepts `v` only if it is unit length within `tolerance`.
  static Direction FromUnit(const Eigen::Vector3d& v, double tolerance = 1e-6);
  // Angles in radians.
  static Direction FromAngles(double azimuth, double elevation);
  static Direction FromDegrees(double azimuth_deg, double elevation_deg);

  const Eigen::Vector3d& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  double Azimuth() const;    // radians in (-pi, pi]
  double Elevation() const;  // radians in [-pi/2, pi/2]

 private:
  explicit Direction(const Eigen::Vector3d& v) : v_(v) {}
  Eigen::Vector3d v_;
};

// Gravity-aligned pinhole camera. Roll is always zero.
struct CameraPose {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double fov_h_deg = 90.0;

  void Validate() const;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

Direction PixelToDirection(double u, double v, int width, int height);

// Exact inverse of PixelToDirection at pixel centers. u is wrapped into
// [0, width); v is clamped to the centers of the first and last rows.
PixelCoord DirectionToPixel(const Direction& d, int width, int height);

// Solid angle (steradians) subtended by each pixel. Each row gets the exact
// area of its latitude band split evenly over the columns, which is
// proportional to cos(elevation) at the row center and sums to 4*pi.
WeightMap SolidAngleWeights(int width, int height);

// Bilinear lookup at continuous index coordinates with azimuth wrap-around and
// clamping at the poles.
std::array<double, 3> SampleBilinear(const Image& map, double u, double v);

// Rectified pinhole view of `map` (gnomonic projection). The vertical field of
// view follows from the output aspect ratio.
Image CropFov(const Image& map, const CameraPose& pose, int out_width,
              int out_height);

struct ProjectedCrop {
  Image partial;     // crop content on the equirectangular grid, 0 elsewhere
  BinaryMask known;  // set where the pixel direction falls inside the frustum
};

// Inverse of CropFov: spreads a pinhole image back onto a width x height
// equirectangular grid.
ProjectedCrop ProjectCropToEnvmap(const Image& crop, const CameraPose& pose,
                                  int width, int height);

// Circular shift by `columns` to the right (azimuth rotation by
// 2*pi*columns/width).
Image ShiftColumns(const Image& map, int columns);
BinaryMask ShiftColumns(const BinaryMask& mask, int columns);

}  // namespace envbench

#endif  // ENVBENCH_GEOMETRY_H_
