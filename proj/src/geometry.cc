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

#include "envbench/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace envbench {

namespace {

constexpr double kPi = std::numbers::pi;

double DegToRad(double deg) { return deg * kPi / 180.0; }

// Orthonormal camera frame for a gravity-aligned pose. `right` points towards
// increasing azimuth so that crops are not mirrored relative to the panorama.
struct CameraFrame {
  Eigen::Vector3d forward;
  Eigen::Vector3d right;
  Eigen::Vector3d up;
  double tan_half_h;
  double tan_half_v;
};

CameraFrame MakeFrame(const CameraPose& pose, int out_width, int out_height) {
  const double phi = DegToRad(pose.yaw_deg);
  const double theta = DegToRad(pose.pitch_deg);
  CameraFrame f;
  f.forward = {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
               std::sin(theta)};
  f.right = {-std::sin(phi), std::cos(phi), 0.0};
  f.up = {-std::sin(theta) * std::cos(phi), -std::sin(theta) * std::sin(phi),
          std::cos(theta)};
  f.tan_half_h = std::tan(DegToRad(pose.fov_h_deg) / 2.0);
  f.tan_half_v = f.tan_half_h * out_height / out_width;
  return f;
}

// Bilinear lookup with edge clamping on both axes (pinhole images).
std::array<double, 3> SampleClamped(const Image& img, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double top = img.at(x0, y0, c) * (1 - fx) + img.at(x1, y0, c) * fx;
    const double bot = img.at(x0, y1, c) * (1 - fx) + img.at(x1, y1, c) * fx;
    out[c] = top * (1 - fy) + bot * fy;
  }
  return out;
}

}  // namespace

Direction Direction::Normalized(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error("cannot normalize a zero or non-finite vector");
  }
  return Direction(v / n);
}

Direction Direction::FromUnit(const Eigen::Vector3d& v, double tolerance) {
  const double n = v.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance) {
    throw Error("direction is not unit length (norm " + std::to_string(n) +
                ")");
  }
  return Direction(v);
}

Direction Direction::FromAngles(double azimuth, double elevation) {
  return Direction(Eigen::Vector3d(std::cos(elevation) * std::cos(azimuth),
                                   std::cos(elevation) * std::sin(azimuth),
                                   std::sin(elevation)));
}

Direction Direction::FromDegrees(double azimuth_deg, double elevation_deg) {
  return FromAngles(DegToRad(azimuth_deg), DegToRad(elevation_deg));
}

double Direction::Azimuth() const { return std::atan2(v_.y(), v_.x()); }

double Direction::Elevation() const {
  return std::atan2(v_.z(), std::hypot(v_.x(), v_.y()));
}

void CameraPose::Validate() const {
  if (!(fov_h_deg > 0.0 && fov_h_deg < 180.0)) {
    throw Error("horizontal field of view must lie in (0, 180) degrees");
  }
  if (!(pitch_deg >= -90.0 && pitch_deg <= 90.0)) {
    throw Error("pitch must lie in [-90, 90] degrees");
  }
  if (!std::isfinite(yaw_deg)) throw Error("yaw must be finite");
}

Direction PixelToDirection(double u, double v, int width, int height) {
  if (width < 1 || height < 1) throw Error("invalid map dimensions");
  if (!(u >= 0.0 && u < width && v >= 0.0 && v < height)) {
    throw Error("pixel coordinate (" + std::to_string(u) + ", " +
                std::to_string(v) + ") outside " + std::to_string(width) +
                "x" + std::to_string(height));
  }
  const double azimuth = 2.0 * kPi * ((u + 0.5) / width) - kPi;
  const double elevation = kPi / 2.0 - kPi * ((v + 0.5) / height);
  return Direction::FromAngles(azimuth, elevation);
}

PixelCoord DirectionToPixel(const Direction& d, int width, int height) {
  const Direction checked = Direction::FromUnit(d.vec());
  double u = (checked.Azimuth() + kPi) / (2.0 * kPi) * width - 0.5;
  double v = (kPi / 2.0 - checked.Elevation()) / kPi * height - 0.5;
  if (u < 0.0) u += width;
  if (u >= width) u -= width;
  v = std::clamp(v, 0.0, static_cast<double>(height - 1));
  return {u, v};
}

WeightMap SolidAngleWeights(int width, int height) {
  if (width < 1 || height < 1) throw Error("invalid map dimensions");
  WeightMap w(width, height);
  const double band_scale =
      2.0 * kPi / width * 2.0 * std::sin(kPi / (2.0 * height));
  for (int v = 0; v < height; ++v) {
    const double elevation = kPi / 2.0 - kPi * ((v + 0.5) / height);
    const double row = band_scale * std::cos(elevation);
    for (int u = 0; u < width; ++u) w.at(u, v) = row;
  }
  return w;
}

std::array<double, 3> SampleBilinear(const Image& map, double u, double v) {
  const int w = map.width();
  const int h = map.height();
  v = std::clamp(v, 0.0, static_cast<double>(h - 1));
  const double uf = std::floor(u);
  const double fx = u - uf;
  int u0 = static_cast<int>(std::fmod(uf, static_cast<double>(w)));
  if (u0 < 0) u0 += w;
  const int u1 = (u0 + 1) % w;
  const int v0 = static_cast<int>(std::floor(v));
  const int v1 = std::min(v0 + 1, h - 1);
  const double fy = v - v0;
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double top = map.at(u0, v0, c) * (1 - fx) + map.at(u1, v0, c) * fx;
    const double bot = map.at(u0, v1, c) * (1 - fx) + map.at(u1, v1, c) * fx;
    out[c] = top * (1 - fy) + bot * fy;
  }
  return out;
}

Image CropFov(const Image& map, const CameraPose& pose, int out_width,
              int out_height) {
  pose.Validate();
  if (out_width < 1 || out_height < 1) {
    throw Error("crop output size must be at least 1x1");
  }
  if (!map.IsCanonical()) {
    throw Error("crop source must be a canonical 2:1 equirectangular map");
  }
  const CameraFrame f = MakeFrame(pose, out_width, out_height);
  Image out(out_width, out_height, map.domain());
  for (int j = 0; j < out_height; ++j) {
    const double ys = (1.0 - 2.0 * (j + 0.5) / out_height) * f.tan_half_v;
    for (int i = 0; i < out_width; ++i) {
      const double xs = (2.0 * (i + 0.5) / out_width - 1.0) * f.tan_half_h;
      const Direction d =
          Direction::Normalized(f.forward + xs * f.right + ys * f.up);
      const PixelCoord p = DirectionToPixel(d, map.width(), map.height());
      const auto rgb = SampleBilinear(map, p.u, p.v);
      for (int c = 0; c < 3; ++c) out.at(i, j, c) = rgb[c];
    }
  }
  return out;
}

ProjectedCrop ProjectCropToEnvmap(const Image& crop, const CameraPose& pose,
                                  int width, int height) {
  pose.Validate();
  const CameraFrame f = MakeFrame(pose, crop.width(), crop.height());
  ProjectedCrop out{Image(width, height, crop.domain()),
                    BinaryMask(width, height)};
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const Eigen::Vector3d d = PixelToDirection(u, v, width, height).vec();
      const double z = d.dot(f.forward);
      if (!(z > 0.0)) continue;
      const double xs = d.dot(f.right) / z;
      const double ys = d.dot(f.up) / z;
      if (std::abs(xs) > f.tan_half_h || std::abs(ys) > f.tan_half_v) continue;
      const double ci = (xs / f.tan_half_h + 1.0) / 2.0 * crop.width() - 0.5;
      const double cj = (1.0 - ys / f.tan_half_v) / 2.0 * crop.height() - 0.5;
      const auto rgb = SampleClamped(crop, ci, cj);
      for (int c = 0; c < 3; ++c) out.partial.at(u, v, c) = rgb[c];
      out.known.set(u, v, true);
    }
  }
  return out;
}

Image ShiftColumns(const Image& map, int columns) {
  const int w = map.width();
  const int k = ((columns % w) + w) % w;
  Image out(w, map.height(), map.domain());
  for (int v = 0; v < map.height(); ++v) {
    for (int u = 0; u < w; ++u) {
      for (int c = 0; c < 3; ++c) out.at((u + k) % w, v, c) = map.at(u, v, c);
    }
  }
  return out;
}

BinaryMask ShiftColumns(const BinaryMask& mask, int columns) {
  const int w = mask.width();
  const int k = ((columns % w) + w) % w;
  BinaryMask out(w, mask.height());
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < w; ++u) out.set((u + k) % w, v, mask.at(u, v));
  }
  return out;
}

}  // namespace envbench
