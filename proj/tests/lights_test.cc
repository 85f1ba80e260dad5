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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "envbench/random.h"
#include "oracles.h"
#include "test_support.h"

namespace envbench {
namespace {

using testing::PlantedLight;
using testing::RenderPlantedLights;

constexpr double kPi = std::numbers::pi;

TEST(ExtractLights, SingleBlob) {
  const Image map = RenderPlantedLights(256, 128, {{30, 20, 3, 1.0}});
  const LightSet set = ExtractLights(map);
  ASSERT_EQ(set.lights.size(), 1u);
  EXPECT_LE(AngularBetween(set.lights[0].direction, Direction::FromDegrees(30, 20)),
            2.0);
  EXPECT_FALSE(set.lights[0].degenerate);
  EXPECT_NEAR(set.lights[0].peak_intensity, 1.0, 0.02);
}

TEST(ExtractLights, AntipodalEqualPeaks) {
  const Image map =
      RenderPlantedLights(256, 128, {{0, 10, 3, 1.0}, {180, -10, 3, 1.0}});
  const LightSet set = ExtractLights(map);
  ASSERT_EQ(set.lights.size(), 2u);
  const auto dirs = set.Directions();
  const std::vector<Direction> planted = {Direction::FromDegrees(0, 10),
                                          Direction::FromDegrees(180, -10)};
  EXPECT_LE(AngularError(planted, dirs), 2.0);
}

TEST(ExtractLights, StopRuleThreshold) {
  const Image half =
      RenderPlantedLights(256, 128, {{-60, 0, 3, 1.0}, {60, 0, 3, 0.5}});
  EXPECT_EQ(ExtractLights(half).lights.size(), 1u);
  const Image close =
      RenderPlantedLights(256, 128, {{-60, 0, 3, 1.0}, {60, 0, 3, 0.95}});
  EXPECT_EQ(ExtractLights(close).lights.size(), 2u);
  ExtractionOptions loose;
  loose.stop_fraction = 0.4;
  EXPECT_EQ(ExtractLights(half, loose).lights.size(), 2u);
}

TEST(ExtractLights, MaxLightsCap) {
  const Image map = RenderPlantedLights(
      256, 128, {{-120, 0, 3, 1.0}, {0, 0, 3, 1.0}, {120, 0, 3, 1.0}});
  ExtractionOptions opt;
  opt.max_lights = 2;
  EXPECT_EQ(ExtractLights(map, opt).lights.size(), 2u);
  EXPECT_EQ(ExtractLights(map).lights.size(), 3u);
}

TEST(ExtractLights, BlobAcrossSeam) {
  const Image map = RenderPlantedLights(256, 128, {{179, 5, 4, 1.0}});
  const LightSet set = ExtractLights(map);
  ASSERT_EQ(set.lights.size(), 1u);
  EXPECT_LE(AngularBetween(set.lights[0].direction, Direction::FromDegrees(179, 5)),
            2.0);
}

TEST(ExtractLights, HullPointsInsideEllipse) {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    std::vector<PlantedLight> lights;
    for (int k = 0; k < 3; ++k) {
      lights.push_back({rng.Uniform(-180, 180), rng.Uniform(-60, 60),
                        rng.Uniform(2, 6), rng.Uniform(0.92, 1.0)});
    }
    const LightSet set = ExtractLights(RenderPlantedLights(256, 128, lights));
    for (const auto& l : set.lights) {
      ASSERT_FALSE(l.hull.empty());
      for (const auto& p : l.hull) EXPECT_LE(l.ellipse.Evaluate(p), 1.0 + 1e-3);
      for (const auto& p : l.region) EXPECT_LE(l.ellipse.Evaluate(p), 1.0 + 1e-3);
    }
  }
}

TEST(ExtractLights, Errors) {
  EXPECT_THROW(ExtractLights(Image(16, 8)), Error);
  Image neg(16, 8, Domain::kLinearHDR, 1.0);
  neg.at(1, 1, 1) = -1;
  EXPECT_THROW(ExtractLights(neg), Error);
}

TEST(ExtractLights, UniformMapIsDegenerate) {
  const LightSet set = ExtractLights(Image(32, 16, Domain::kLinearHDR, 1.0));
  ASSERT_EQ(set.lights.size(), 1u);
  EXPECT_TRUE(set.lights[0].degenerate);
  EXPECT_TRUE(set.Directions().empty());
  EXPECT_THROW(AngularError(set, set), Error);
}

TEST(FitEnclosingEllipse, RectangleCorners) {
  const double w = 12.0;
  const double h = 4.0;
  const std::vector<Point2> pts = {{1, 2}, {1 + w, 2}, {1 + w, 2 + h}, {1, 2 + h}};
  const Ellipse e = FitEnclosingEllipse(pts);
  EXPECT_NEAR(e.center_u, 1 + w / 2, 1e-4);
  EXPECT_NEAR(e.center_v, 2 + h / 2, 1e-4);
  EXPECT_NEAR(e.a / e.b, w / h, 1e-3);
  // The minimum ellipse through a rectangle's corners has semi-axes
  // (w, h) / sqrt(2).
  EXPECT_NEAR(e.a, w / std::sqrt(2.0), 1e-3 * w);
  for (const auto& p : pts) EXPECT_LE(e.Evaluate(p), 1.0 + 1e-9);
}

TEST(FitEnclosingEllipse, SinglePoint) {
  const std::vector<Point2> pts = {{5, 7}};
  const Ellipse e = FitEnclosingEllipse(pts);
  EXPECT_EQ(e.center_u, 5.0);
  EXPECT_EQ(e.center_v, 7.0);
  EXPECT_EQ(e.a, 0.5);
  EXPECT_EQ(e.b, 0.5);
  EXPECT_THROW(FitEnclosingEllipse(std::vector<Point2>{}), Error);
}

TEST(FitEnclosingEllipse, CollinearPoints) {
  const std::vector<Point2> pts = {{0, 0}, {2, 2}, {4, 4}};
  const Ellipse e = FitEnclosingEllipse(pts);
  for (const auto& p : pts) EXPECT_LE(e.Evaluate(p), 1.0 + 1e-9);
  EXPECT_EQ(e.b, 0.5);
  EXPECT_NEAR(e.angle, kPi / 4, 1e-12);
}

TEST(FitEnclosingEllipse, RandomCloudsAgainstBruteForce) {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    std::vector<Point2> pts;
    const double sx = rng.Uniform(2, 20);
    const double sy = rng.Uniform(2, 20);
    for (int i = 0; i < 30; ++i) pts.push_back({sx * rng.Normal(), sy * rng.Normal()});
    const Ellipse e = FitEnclosingEllipse(pts);
    for (const auto& p : pts) EXPECT_LE(e.Evaluate(p), 1.0 + 1e-9);
    const double oracle = testing::BruteForceEnclosingArea(pts);
    EXPECT_LE(e.Area(), oracle * 1.05);
    EXPECT_GE(e.Area(), oracle * 0.95);
  }
}

TEST(ConvexHull, SquareWithInteriorAndDuplicates) {
  const std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5},
                                   {1, 1}, {0.5, 0}};
  const auto hull = ConvexHull(pts);
  EXPECT_EQ(hull.size(), 4u);
}

TEST(AngularBetween, Values) {
  const Direction a = Direction::FromDegrees(10, 60);
  const Direction b = Direction::FromDegrees(50, 60);
  EXPECT_EQ(AngularBetween(a, a), 0.0);
  EXPECT_NEAR(AngularBetween(Direction::FromUnit({1, 0, 0}),
                             Direction::FromUnit({0, 0, 1})),
              90.0, 1e-12);
  // Spherical law of cosines for two points at the same elevation.
  const double el = kPi / 3;
  const double cosd =
      std::sin(el) * std::sin(el) + std::cos(el) * std::cos(el) * std::cos(40 * kPi / 180);
  EXPECT_NEAR(AngularBetween(a, b), std::acos(cosd) * 180 / kPi, 1e-9);
  EXPECT_NEAR(AngularBetween(a, b), 19.6931, 1e-4);
}

TEST(AngularError, Definition) {
  const Direction a = Direction::FromDegrees(10, 5);
  const Direction b = Direction::FromDegrees(100, -20);
  const std::vector<Direction> ab = {a, b};
  const std::vector<Direction> only_a = {a};
  EXPECT_EQ(AngularError(ab, ab), 0.0);
  EXPECT_NEAR(AngularError(ab, only_a), AngularBetween(a, b) / 3.0, 1e-12);
  const std::vector<Direction> north = {Direction::FromUnit({0, 0, 1})};
  const std::vector<Direction> south = {Direction::FromUnit({0, 0, -1})};
  EXPECT_NEAR(AngularError(north, south), 180.0, 1e-12);
  EXPECT_THROW(AngularError(std::vector<Direction>{}, north), Error);
}

}  // namespace
}  // namespace envbench
