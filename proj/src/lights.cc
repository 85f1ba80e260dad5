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

#include "envbench/lights.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace envbench {

namespace {

constexpr double kMinSemiAxis = 0.5;
constexpr double kKhachiyanTolerance = 1e-6;
constexpr int kKhachiyanMaxIterations = 100000;

double Cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

// Axis lengths and orientation from the quadratic form (x-c)^T A (x-c) <= 1.
Ellipse FromQuadraticForm(const Eigen::Matrix2d& A, const Eigen::Vector2d& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(A);
  const Eigen::Vector2d lambda = eig.eigenvalues();  // ascending
  const Eigen::Vector2d major = eig.eigenvectors().col(0);
  Ellipse e;
  e.center_u = c.x();
  e.center_v = c.y();
  e.a = std::max(kMinSemiAxis, 1.0 / std::sqrt(lambda(0)));
  e.b = std::max(kMinSemiAxis, 1.0 / std::sqrt(lambda(1)));
  double angle = std::atan2(major.y(), major.x());
  if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
  if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
  e.angle = angle;
  return e;
}

// Khachiyan's algorithm for the minimum-volume enclosing ellipse of a point
// set that is not contained in a line.
Ellipse Khachiyan(std::span<const Point2> hull) {
  const int n = static_cast<int>(hull.size());
  constexpr int d = 2;
  Eigen::Matrix<double, 3, Eigen::Dynamic> q(3, n);
  Eigen::Matrix<double, 2, Eigen::Dynamic> p(2, n);
  // Centering improves conditioning; undone at the end.
  double mu = 0.0, mv = 0.0;
  for (const auto& pt : hull) {
    mu += pt.u;
    mv += pt.v;
  }
  mu /= n;
  mv /= n;
  for (int j = 0; j < n; ++j) {
    p(0, j) = hull[j].u - mu;
    p(1, j) = hull[j].v - mv;
    q.col(j) << p(0, j), p(1, j), 1.0;
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int it = 0; it < kKhachiyanMaxIterations; ++it) {
    const Eigen::Matrix3d x = q * weights.asDiagonal() * q.transpose();
    const Eigen::Matrix3d x_inv = x.inverse();
    Eigen::VectorXd m(n);
    for (int j = 0; j < n; ++j) m(j) = q.col(j).dot(x_inv * q.col(j));
    Eigen::Index best;
    const double m_max = m.maxCoeff(&best);
    const double step = (m_max - d - 1.0) / ((d + 1.0) * (m_max - 1.0));
    Eigen::VectorXd next = (1.0 - step) * weights;
    next(best) += step;
    const double change = (next - weights).norm();
    weights = next;
    if (change < kKhachiyanTolerance) break;
  }
  const Eigen::Vector2d c = p * weights;
  const Eigen::Matrix2d scatter =
      p * weights.asDiagonal() * p.transpose() - c * c.transpose();
  Eigen::Matrix2d A = scatter.inverse() / d;
  // The iteration stops short of the optimum; rescale so that every hull
  // point is covered.
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d r = p.col(j) - c;
    worst = std::max(worst, r.dot(A * r));
  }
  if (worst > 1.0) A /= worst;
  return FromQuadraticForm(A, c + Eigen::Vector2d(mu, mv));
}

// First column of the region after its largest circular gap of empty columns,
// so that region columns form one contiguous run when shifted by it.
int UnwrapStart(const std::vector<bool>& occupied) {
  const int w = static_cast<int>(occupied.size());
  int best_len = 0;
  int best_end = 0;  // column right after the best gap
  for (int start = 0; start < w; ++start) {
    if (occupied[start] || !occupied[(start + w - 1) % w]) continue;
    int len = 0;
    while (len < w && !occupied[(start + len) % w]) ++len;
    if (len > best_len) {
      best_len = len;
      best_end = (start + len) % w;
    }
  }
  return best_len == 0 ? 0 : best_end;
}

}  // namespace

double Ellipse::Evaluate(const Point2& p) const {
  const double du = p.u - center_u;
  const double dv = p.v - center_v;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double x = (du * c + dv * s) / a;
  const double y = (-du * s + dv * c) / b;
  return x * x + y * y;
}

double Ellipse::Area() const { return std::numbers::pi * a * b; }

std::vector<Point2> ConvexHull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& x, const Point2& y) {
    return x.u < y.u || (x.u == y.u && x.v < y.v);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& x, const Point2& y) {
                          return x.u == y.u && x.v == y.v;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Ellipse FitEnclosingEllipse(std::span<const Point2> points) {
  if (points.empty()) throw Error("ellipse fit needs at least one point");
  const std::vector<Point2> hull = ConvexHull(points);
  Ellipse e;
  if (hull.size() == 1) {
    e.center_u = hull[0].u;
    e.center_v = hull[0].v;
    return e;
  }
  if (hull.size() == 2) {
    const double du = hull[1].u - hull[0].u;
    const double dv = hull[1].v - hull[0].v;
    e.center_u = (hull[0].u + hull[1].u) / 2.0;
    e.center_v = (hull[0].v + hull[1].v) / 2.0;
    e.a = std::max(kMinSemiAxis, std::hypot(du, dv) / 2.0);
    e.b = kMinSemiAxis;
    e.angle = std::atan2(dv, du);
    if (e.angle <= -std::numbers::pi / 2) e.angle += std::numbers::pi;
    if (e.angle > std::numbers::pi / 2) e.angle -= std::numbers::pi;
    return e;
  }
  return Khachiyan(hull);
}

std::vector<Direction> LightSet::Directions() const {
  std::vector<Direction> out;
  for (const auto& l : lights)
    if (!l.degenerate) out.push_back(l.direction);
  return out;
}

LightSet ExtractLights(const Image& map, const ExtractionOptions& options) {
  if (options.max_lights < 0) throw Error("max_lights must be >= 0");
  const int w = map.width();
  const int h = map.height();
  std::vector<double> intensity(map.pixel_count());
  bool any_light = false;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      for (int c = 0; c < 3; ++c) {
        const double x = map.at(u, v, c);
        if (!std::isfinite(x) || x < 0.0) {
          throw Error("light extraction needs finite, non-negative radiance");
        }
      }
      const double i = map.Intensity(u, v);
      intensity[static_cast<std::size_t>(v) * w + u] = i;
      any_light = any_light || i > 0.0;
    }
  }
  if (!any_light) throw Error("no light content");

  const WeightMap weights = SolidAngleWeights(w, h);
  const double sphere = 4.0 * std::numbers::pi;
  std::vector<bool> assigned(intensity.size(), false);
  std::vector<int> stack;
  LightSet out;
  double largest = 0.0;

  while (static_cast<int>(out.lights.size()) < options.max_lights) {
    std::size_t seed = intensity.size();
    for (std::size_t i = 0; i < intensity.size(); ++i) {
      if (!assigned[i] && (seed == intensity.size() ||
                           intensity[i] > intensity[seed])) {
        seed = i;
      }
    }
    if (seed == intensity.size()) break;
    const double peak = intensity[seed];
    if (!(peak > 0.0)) break;
    if (out.lights.empty()) {
      largest = peak;
    } else if (peak < options.stop_fraction * largest) {
      break;
    }

    // Flood fill of unassigned pixels above the region threshold.
    const double threshold = options.region_fraction * peak;
    std::vector<int> region;
    stack.assign(1, static_cast<int>(seed));
    assigned[seed] = true;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      region.push_back(cur);
      const int cu = cur % w;
      const int cv = cur / w;
      const int nbrs[4][2] = {
          {(cu + 1) % w, cv}, {(cu + w - 1) % w, cv}, {cu, cv - 1}, {cu, cv + 1}};
      for (const auto& nb : nbrs) {
        if (nb[1] < 0 || nb[1] >= h) continue;
        const int idx = nb[1] * w + nb[0];
        if (!assigned[idx] && intensity[idx] >= threshold) {
          assigned[idx] = true;
          stack.push_back(idx);
        }
      }
    }
    std::sort(region.begin(), region.end());

    std::vector<bool> occupied(w, false);
    double solid_angle = 0.0;
    for (int idx : region) {
      occupied[idx % w] = true;
      solid_angle += weights.at(idx % w, idx / w);
    }
    const int start = UnwrapStart(occupied);

    ParametricLight light;
    light.peak_intensity = peak;
    light.region_pixel_count = static_cast<int>(region.size());
    light.solid_angle = solid_angle;
    light.degenerate = solid_angle > options.ambient_fraction * sphere;
    light.region.reserve(region.size());
    for (int idx : region) {
      const int u = idx % w;
      light.region.push_back(
          {static_cast<double>(u < start ? u + w : u),
           static_cast<double>(idx / w)});
    }
    light.hull = ConvexHull(light.region);
    light.ellipse = FitEnclosingEllipse(light.hull);
    double cu = std::fmod(light.ellipse.center_u, static_cast<double>(w));
    if (cu < 0.0) cu += w;
    const double cv =
        std::clamp(light.ellipse.center_v, 0.0, static_cast<double>(h - 1));
    light.direction = PixelToDirection(cu, cv, w, h);
    out.lights.push_back(std::move(light));
  }
  std::stable_sort(out.lights.begin(), out.lights.end(),
                   [](const ParametricLight& x, const ParametricLight& y) {
                     return x.peak_intensity > y.peak_intensity;
                   });
  return out;
}

double AngularBetween(const Direction& a, const Direction& b) {
  // atan2 keeps full precision near 0 and 180 degrees, unlike acos.
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec())) *
         180.0 / std::numbers::pi;
}

double AngularError(std::span<const Direction> gt,
                    std::span<const Direction> pred) {
  if (gt.empty() || pred.empty()) throw Error("no lights extracted");
  auto min_to = [](const Direction& d, std::span<const Direction> set) {
    double best = 180.0;
    for (const auto& s : set) best = std::min(best, AngularBetween(d, s));
    return best;
  };
  double sum = 0.0;
  for (const auto& d : gt) sum += min_to(d, pred);
  for (const auto& d : pred) sum += min_to(d, gt);
  return sum / static_cast<double>(gt.size() + pred.size());
}

double AngularError(const LightSet& gt, const LightSet& pred) {
  const auto g = gt.Directions();
  const auto p = pred.Directions();
  return AngularError(g, p);
}

}  // namespace envbench
