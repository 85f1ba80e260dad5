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

#include <cstdio>
#include <sstream>

#include "envbench/image.h"

namespace envbench {

namespace {

constexpr int kOverviewEncoderSets = 5;

std::int64_t ConvParams(int k, int c_in, int c_out) {
  return static_cast<std::int64_t>(k) * k * c_in * c_out + c_out;
}

class Tracer {
 public:
  explicit Tracer(ShapeTrace& trace) : trace_(trace) {}

  void Add(const std::string& name, TensorShape shape, std::int64_t params) {
    trace_.layers.push_back({name, shape, params});
    trace_.total_params += params;
    if (shape.c > kChannelLintLimit) {
      trace_.warnings.push_back(name + ": " + std::to_string(shape.c) +
                                " channels exceed " +
                                std::to_string(kChannelLintLimit));
    }
  }

 private:
  ShapeTrace& trace_;
};

TensorShape Pool(const TensorShape& s, const std::string& where) {
  if (s.h % 2 != 0 || s.w % 2 != 0) {
    throw Error(where + ": spatial size " + std::to_string(s.h) + "x" +
                std::to_string(s.w) + " is not divisible by 2");
  }
  return {s.h / 2, s.w / 2, s.c};
}

}  // namespace

const char* BlockKindName(BlockKind kind) {
  switch (kind) {
    case BlockKind::kConvBlock:
      return "conv_block";
    case BlockKind::kDownsample:
      return "downsample";
    case BlockKind::kUpsample:
      return "upsample";
    case BlockKind::kDiscResidual:
      return "disc_residual";
    case BlockKind::kConv1x1:
      return "conv1x1";
    case BlockKind::kFinalConv:
      return "final_conv";
  }
  return "unknown";
}

ShapeTrace Propagate(const std::vector<BlockSpec>& blocks, TensorShape input) {
  if (input.h < 1 || input.w < 1 || input.c < 1) {
    throw Error("input shape must be positive");
  }
  ShapeTrace trace;
  Tracer t(trace);
  std::vector<TensorShape> skips;
  TensorShape x = input;
  int index = 0;
  for (const BlockSpec& b : blocks) {
    ++index;
    if (b.filters < 1) throw Error("block filters must be >= 1");
    if (b.repeats < 1) throw Error("block repeats must be >= 1");
    const std::string base =
        "b" + std::to_string(index) + "." + BlockKindName(b.kind);
    switch (b.kind) {
      case BlockKind::kConvBlock: {
        for (int r = 1; r <= b.repeats; ++r) {
          const std::string rn = base + ".r" + std::to_string(r);
          t.Add(rn + ".bn", x, 2LL * x.c);
          const TensorShape conv{x.h, x.w, b.filters};
          t.Add(rn + ".conv3x3", conv, ConvParams(3, x.c, b.filters));
          x = {x.h, x.w, b.filters + x.c};
          t.Add(rn + ".concat", x, 0);
        }
        break;
      }
      case BlockKind::kDownsample: {
        skips.push_back(x);
        const int c_in = x.c;
        x = {x.h, x.w, b.filters};
        t.Add(base + ".conv3x3", x, ConvParams(3, c_in, b.filters));
        x = Pool(x, base);
        t.Add(base + ".avgpool", x, 0);
        break;
      }
      case BlockKind::kUpsample: {
        x = {x.h * 2, x.w * 2, x.c};
        t.Add(base + ".nearest2x", x, 0);
        const int c_in = x.c;
        x.c = b.filters;
        t.Add(base + ".conv3x3", x, ConvParams(3, c_in, b.filters));
        if (b.skip) {
          if (skips.empty()) throw Error(base + ": no encoder level to skip");
          const TensorShape s = skips.back();
          skips.pop_back();
          if (s.h != x.h || s.w != x.w) {
            throw Error(base + ": skip source is " + std::to_string(s.h) +
                        "x" + std::to_string(s.w) + ", expected " +
                        std::to_string(x.h) + "x" + std::to_string(x.w));
          }
          x.c += s.c;
          t.Add(base + ".skip_concat", x, 0);
        }
        break;
      }
      case BlockKind::kDiscResidual: {
        const TensorShape in = x;
        TensorShape sc = Pool(in, base);
        t.Add(base + ".shortcut.avgpool", sc, 0);
        sc.c = b.filters;
        t.Add(base + ".shortcut.conv3x3", sc, ConvParams(3, in.c, b.filters));
        for (int r = 1; r <= 2; ++r) {
          const std::string rn = base + ".r" + std::to_string(r);
          t.Add(rn + ".bn", x, 2LL * x.c);
          const int c_in = x.c;
          x.c = b.filters;
          t.Add(rn + ".conv3x3", x, ConvParams(3, c_in, b.filters));
        }
        x = Pool(x, base);
        t.Add(base + ".avgpool", x, 0);
        t.Add(base + ".add", x, 0);
        break;
      }
      case BlockKind::kConv1x1:
      case BlockKind::kFinalConv: {
        const int k = b.kind == BlockKind::kConv1x1 ? 1 : 3;
        const TensorShape out{x.h, x.w, b.filters};
        const std::string name = base + (k == 1 ? ".conv1x1" : ".conv3x3");
        t.Add(name, out, ConvParams(k, x.c, b.filters));
        if (b.head) {
          t.Add(base + ".global_avgpool", {1, 1, b.filters}, 0);
        } else {
          x = out;
        }
        break;
      }
    }
  }
  trace.output = x;
  return trace;
}

ShapeTrace Propagate(const NetworkConfig& config) {
  ShapeTrace trace = Propagate(config.blocks, config.input);
  for (auto& w : LintConfig(config)) trace.warnings.push_back(std::move(w));
  return trace;
}

BuiltinNetworks BuiltinConfigs(int cluster_count) {
  BuiltinNetworks nets;
  nets.envmapnet.name = "envmapnet";
  nets.envmapnet.input = {128, 256, 4};
  for (int dk : {64, 128, 128, 128, 256, 256, 512}) {
    nets.envmapnet.blocks.push_back({BlockKind::kConvBlock, 16, 5});
    nets.envmapnet.blocks.push_back({BlockKind::kDownsample, dk, 1});
  }
  nets.envmapnet.blocks.push_back({BlockKind::kConv1x1, 64, 1});
  for (int uk : {512, 256, 256, 128, 128, 128, 64}) {
    nets.envmapnet.blocks.push_back({BlockKind::kUpsample, uk, 1, true});
    nets.envmapnet.blocks.push_back({BlockKind::kConvBlock, 16, 5});
  }
  nets.envmapnet.blocks.push_back({BlockKind::kFinalConv, 3, 1});

  nets.discriminator.name = "discriminator";
  nets.discriminator.input = {128, 256, 3};
  for (int ak : {64, 128, 256, 256, 256, 256, 256}) {
    nets.discriminator.blocks.push_back({BlockKind::kDiscResidual, ak, 1});
  }
  nets.discriminator.blocks.push_back(
      {BlockKind::kConv1x1, 1, 1, false, true});
  nets.discriminator.blocks.push_back(
      {BlockKind::kConv1x1, cluster_count, 1, false, true});
  return nets;
}

int CountBlocks(const NetworkConfig& config, BlockKind kind) {
  int n = 0;
  for (const auto& b : config.blocks) n += b.kind == kind;
  return n;
}

std::vector<std::string> LintConfig(const NetworkConfig& config) {
  std::vector<std::string> warnings;
  if (config.name == "envmapnet") {
    const int sets = CountBlocks(config, BlockKind::kDownsample);
    if (sets != kOverviewEncoderSets) {
      warnings.push_back(
          "encoder has " + std::to_string(sets) +
          " conv/downsample sets as in the block listing, but the model "
          "overview describes " +
          std::to_string(kOverviewEncoderSets) + "; using " +
          std::to_string(sets));
    }
  }
  return warnings;
}

std::string FormatTraceTable(const ShapeTrace& trace) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-36s %6s %6s %6s %12s\n", "layer", "H",
                "W", "C", "params");
  out << line;
  for (const auto& l : trace.layers) {
    std::snprintf(line, sizeof(line), "%-36s %6d %6d %6d %12lld\n",
                  l.name.c_str(), l.output.h, l.output.w, l.output.c,
                  static_cast<long long>(l.params));
    out << line;
  }
  std::snprintf(line, sizeof(line), "total parameters: %lld\n",
                static_cast<long long>(trace.total_params));
  out << line;
  for (const auto& w : trace.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace envbench
