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

#include "envbench/archspec.h"

#include <gtest/gtest.h>

#include "envbench/image.h"

namespace envbench {
namespace {

std::int64_t Conv(int k, int c_in, int c_out) {
  return static_cast<std::int64_t>(k) * k * c_in * c_out + c_out;
}

const LayerTrace* FindLayer(const ShapeTrace& trace, const std::string& name) {
  for (const auto& l : trace.layers)
    if (l.name == name) return &l;
  return nullptr;
}

TEST(EnvMapNet, BottleneckIsOneByTwo) {
  const NetworkConfig net = BuiltinConfigs().envmapnet;
  EXPECT_EQ(CountBlocks(net, BlockKind::kDownsample), 7);
  const ShapeTrace trace = Propagate(net);
  const LayerTrace* bottleneck = FindLayer(trace, "b15.conv1x1.conv1x1");
  ASSERT_NE(bottleneck, nullptr);
  EXPECT_EQ(bottleneck->output, (TensorShape{1, 2, 64}));
  EXPECT_EQ(trace.output, (TensorShape{128, 256, 3}));
}

TEST(EnvMapNet, BottleneckConvParameters) {
  const ShapeTrace trace = Propagate(BuiltinConfigs().envmapnet);
  const LayerTrace* pool = FindLayer(trace, "b14.downsample.avgpool");
  ASSERT_NE(pool, nullptr);
  const int c = pool->output.c;
  EXPECT_EQ(c, 512);
  EXPECT_EQ(FindLayer(trace, "b15.conv1x1.conv1x1")->params, c * 64 + 64);
}

TEST(EnvMapNet, ConvBlockChannelGrowth) {
  const ShapeTrace trace = Propagate({{BlockKind::kConvBlock, 16, 5}}, {8, 16, 4});
  EXPECT_EQ(trace.output, (TensorShape{8, 16, 4 + 5 * 16}));
}

TEST(EnvMapNet, EncoderDepthWarning) {
  const ShapeTrace trace = Propagate(BuiltinConfigs().envmapnet);
  ASSERT_EQ(trace.warnings.size(), 1u);
  EXPECT_NE(trace.warnings[0].find("7"), std::string::npos);
  EXPECT_NE(trace.warnings[0].find("5"), std::string::npos);
  EXPECT_TRUE(LintConfig(BuiltinConfigs().discriminator).empty());
}

TEST(Discriminator, BlocksAndHeads) {
  const NetworkConfig net = BuiltinConfigs(6).discriminator;
  EXPECT_EQ(CountBlocks(net, BlockKind::kDiscResidual), 7);
  const ShapeTrace trace = Propagate(net);
  EXPECT_EQ(trace.output, (TensorShape{1, 2, 256}));
  EXPECT_EQ(trace.layers.back().output, (TensorShape{1, 1, 6}));
  EXPECT_EQ(FindLayer(trace, "b9.conv1x1.conv1x1")->params, 256 * 6 + 6);
}

TEST(Propagate, ToyConfigHandSum) {
  // Conv block with two repeats on 3 channels, then a downsample to 8.
  //   r1: bn 2*3, conv 3x3 3->4, concat -> 7 channels
  //   r2: bn 2*7, conv 3x3 7->4, concat -> 11 channels
  //   downsample: conv 3x3 11->8, pool
  const ShapeTrace trace = Propagate(
      {{BlockKind::kConvBlock, 4, 2}, {BlockKind::kDownsample, 8, 1}}, {4, 8, 3});
  const std::int64_t expected =
      2 * 3 + Conv(3, 3, 4) + 2 * 7 + Conv(3, 7, 4) + Conv(3, 11, 8);
  EXPECT_EQ(expected, 6 + 112 + 14 + 256 + 800);
  EXPECT_EQ(trace.total_params, expected);
  EXPECT_EQ(trace.output, (TensorShape{2, 4, 8}));
  std::int64_t sum = 0;
  for (const auto& l : trace.layers) sum += l.params;
  EXPECT_EQ(sum, trace.total_params);
}

TEST(Propagate, ResidualBlockHandSum) {
  const ShapeTrace trace = Propagate({{BlockKind::kDiscResidual, 5, 1}}, {4, 4, 3});
  EXPECT_EQ(trace.total_params, Conv(3, 3, 5) + 2 * 3 + Conv(3, 3, 5) + 2 * 5 + Conv(3, 5, 5));
  EXPECT_EQ(trace.output, (TensorShape{2, 2, 5}));
}

TEST(Propagate, Errors) {
  EXPECT_THROW(Propagate({{BlockKind::kDownsample, 8, 1}}, {3, 8, 3}), Error);
  EXPECT_THROW(Propagate({{BlockKind::kUpsample, 8, 1, true}}, {2, 2, 3}), Error);
  EXPECT_THROW(Propagate({{BlockKind::kConvBlock, 0, 1}}, {2, 2, 3}), Error);
  EXPECT_THROW(Propagate({}, {0, 2, 3}), Error);
}

TEST(Propagate, ChannelLint) {
  const ShapeTrace trace = Propagate({{BlockKind::kConv1x1, 2048, 1}}, {2, 2, 3});
  EXPECT_EQ(trace.warnings.size(), 1u);
}

TEST(FormatTraceTable, ContainsTotals) {
  const ShapeTrace trace = Propagate(BuiltinConfigs().envmapnet);
  const std::string table = FormatTraceTable(trace);
  EXPECT_NE(table.find("total parameters: " + std::to_string(trace.total_params)),
            std::string::npos);
  EXPECT_NE(table.find("warning: "), std::string::npos);
}

}  // namespace
}  // namespace envbench
