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

#include <gtest/gtest.h>

#include <cmath>

#include "envbench/random.h"
#include "test_support.h"

namespace envbench {
namespace {

TEST(LogEncode, AllZeroMapsToMinusOne) {
  const LogEncoded e = LogEncode(Image(16, 8));
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.alpha, 0.0);
  for (double x : e.map.values()) EXPECT_EQ(x, -1.0);
  EXPECT_EQ(e.map.domain(), Domain::kLog);
}

TEST(LogEncode, ConstantFive) {
  const LogEncoded e = LogEncode(Image(16, 8, Domain::kLinearHDR, 5.0));
  EXPECT_NEAR(e.alpha, 1.0, 1e-15);
  EXPECT_FALSE(e.degenerate);
  for (double x : e.map.values()) {
    EXPECT_NEAR(x, std::log10(6.0) - 1.0, 1e-12);
    EXPECT_NEAR(x, -0.22184874961635637, 1e-12);
  }
}

TEST(LogEncode, SaturatesAtOne) {
  Image img(4, 2, Domain::kLinearHDR, 1.0);
  img.at(0, 0, 0) = 99.0;   // alpha * x + 1 == 100 exactly at alpha 1
  img.at(1, 0, 1) = 1e6;
  const Image g = LogEncodeWithAlpha(img, 1.0);
  EXPECT_EQ(g.at(0, 0, 0), 1.0);
  EXPECT_EQ(g.at(1, 0, 1), 1.0);
  EXPECT_LT(g.at(2, 0, 0), 1.0);
}

TEST(LogEncode, AlphaIsFifthOfMean) {
  Rng rng(5);
  const Image img = testing::RandomImage(8, 4, rng, 0.0, 3.0);
  double sum = 0.0;
  for (double x : img.values()) sum += x;
  EXPECT_NEAR(LogEncode(img).alpha, 0.2 * sum / img.values().size(), 1e-15);
}

TEST(LogEncode, RejectsWrongDomain) {
  EXPECT_THROW(LogEncode(Image(4, 2, Domain::kLog)), Error);
  Image bad(4, 2);
  bad.at(0, 0, 0) = -1.0;
  EXPECT_THROW(LogEncode(bad), Error);
}

TEST(LogDecode, Endpoints) {
  const Image lo = LogDecode(Image(2, 1, Domain::kLog, -1.0), 3.0);
  for (double x : lo.values()) EXPECT_EQ(x, 0.0);
  const Image hi = LogDecode(Image(2, 1, Domain::kLog, 1.0), 1.0);
  for (double x : hi.values()) EXPECT_NEAR(x, 99.0, 1e-12);
  EXPECT_THROW(LogDecode(lo, 0.0), Error);
  EXPECT_THROW(LogDecode(lo, -1.0), Error);
}

TEST(LogDecode, RoundTripUnclipped) {
  Rng rng(9);
  const Image img = testing::RandomImage(32, 16, rng, 0.0, 20.0);
  const LogEncoded e = LogEncode(img);
  const Image back = LogDecode(e.map, e.alpha);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    const double x = img.values()[i];
    if (e.alpha * x + 1.0 >= 100.0) continue;
    EXPECT_NEAR(back.values()[i], x, 1e-6 * std::max(x, 1e-12) + 1e-12);
  }
}

TEST(PrepareNetworkInput, MaskChannelAndRange) {
  Rng rng(1);
  const Image map = testing::RandomImage(32, 16, rng, 0.0, 50.0);
  const BinaryMask known = testing::RandomMask(32, 16, rng, 0.4);
  const NetworkInput in = PrepareNetworkInput(map, known, 42);
  for (int v = 0; v < 16; ++v)
    for (int u = 0; u < 32; ++u) {
      if (known.at(u, v)) {
        EXPECT_EQ(in.at(u, v, 3), 0.0);
        for (int c = 0; c < 3; ++c) {
          EXPECT_GE(in.at(u, v, c), -1.0);
          EXPECT_LE(in.at(u, v, c), 1.0);
        }
      } else {
        EXPECT_EQ(in.at(u, v, 3), 1.0);
      }
    }
  EXPECT_EQ(in.Known(), known);
}

TEST(PrepareNetworkInput, KnownPixelFormula) {
  Image map(2, 1);
  map.at(0, 0, 0) = 1.0;
  map.at(0, 0, 1) = 2.0;
  map.at(0, 0, 2) = 3.0;
  BinaryMask known(2, 1);
  known.set(0, 0, true);
  const NetworkInput in = PrepareNetworkInput(map, known, 0);
  // Mean over the known pixel is 2.
  for (int c = 0; c < 3; ++c) {
    const double expected =
        std::clamp(2.0 * std::pow((c + 1.0) / 2.0, 1.0 / 2.2) - 1.0, -1.0, 1.0);
    EXPECT_NEAR(in.at(0, 0, c), expected, 1e-15);
  }
}

TEST(PrepareNetworkInput, NoiseIsUniform) {
  const int w = 256;
  const int h = 128;
  BinaryMask known(w, h);
  known.set(0, 0, true);
  const NetworkInput in =
      PrepareNetworkInput(Image(w, h, Domain::kLinearHDR, 1.0), known, 7);
  double sum = 0.0;
  double lo = 1.0;
  double hi = -1.0;
  std::size_t n = 0;
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      if (known.at(u, v)) continue;
      for (int c = 0; c < 3; ++c) {
        const double x = in.at(u, v, c);
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        ++n;
      }
    }
  ASSERT_GE(n, 10000u);
  EXPECT_GT(sum / n, -0.02);
  EXPECT_LT(sum / n, 0.02);
  EXPECT_GT(lo, -1.0);
  EXPECT_LT(hi, 1.0);
}

TEST(PrepareNetworkInput, SeedDeterminism) {
  Rng rng(3);
  const Image map = testing::RandomImage(16, 8, rng, 0.0, 1.0);
  const BinaryMask known = testing::RandomMask(16, 8, rng, 0.5);
  EXPECT_EQ(PrepareNetworkInput(map, known, 5), PrepareNetworkInput(map, known, 5));
  EXPECT_FALSE(PrepareNetworkInput(map, known, 5) ==
               PrepareNetworkInput(map, known, 6));
}

TEST(PrepareNetworkInput, Errors) {
  EXPECT_THROW(PrepareNetworkInput(Image(4, 2), BinaryMask(4, 2), 0), Error);
  EXPECT_THROW(PrepareNetworkInput(Image(4, 2), BinaryMask(2, 2, true), 0),
               Error);
}

}  // namespace
}  // namespace envbench
