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

#ifndef ENVBENCH_ARCHSPEC_H_
#define ENVBENCH_ARCHSPEC_H_

#include <cstdint>
#include <string>
#include <vector>

namespace envbench {

// Static shape propagation and parameter counting for the estimator and
// discriminator block definitions. Nothing here stores weights or runs a
// network. Parameter conventions:
//   * convolution: kh * kw * c_in * c_out + c_out (bias);
//   * batch normalization: 2 * C (scale, shift);
//   * spectral normalization, activations, pooling, concatenation: 0.

enum class BlockKind {
  // Repeats: BN, LeakyReLU, 3x3 conv to `filters`, concatenate with the
  // running shortcut, shortcut = result. Channels grow by `filters` per repeat.
  kConvBlock,
  kDownsample,  // 3x3 conv to `filters`, 2x average pool
  kUpsample,    // 2x nearest upsample, 3x3 conv to `filters`, optional skip
  // Shortcut: pool, 3x3 conv. Main: 2 x (BN, LeakyReLU, 3x3 conv), pool. Add.
  kDiscResidual,
  kConv1x1,
  kFinalConv,  // 3x3 conv
};

const char* BlockKindName(BlockKind kind);

struct BlockSpec {
  BlockKind kind = BlockKind::kConvBlock;
  int filters = 16;
  int repeats = 1;
  // Upsample only: concatenate the encoder activation of the same size
  // (the input of the mirrored downsample block).
  bool skip = false;
  // Output head reading the trunk output, followed by global average pooling;
  // it does not feed later blocks.
  bool head = false;
};

struct TensorShape {
  int h = 0;
  int w = 0;
  int c = 0;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

struct LayerTrace {
  std::string name;
  TensorShape output;
  std::int64_t params = 0;
};

struct ShapeTrace {
  std::vector<LayerTrace> layers;
  TensorShape output;  // trunk output
  std::int64_t total_params = 0;
  std::vector<std::string> warnings;
};

struct NetworkConfig {
  std::string name;
  TensorShape input;
  std::vector<BlockSpec> blocks;
};

// Channel counts above this value produce a lint warning.
constexpr int kChannelLintLimit = 1024;

ShapeTrace Propagate(const std::vector<BlockSpec>& blocks, TensorShape input);
ShapeTrace Propagate(const NetworkConfig& config);

struct BuiltinNetworks {
  NetworkConfig envmapnet;
  NetworkConfig discriminator;
};

// Encoder: seven (conv block, downsample) sets with
// dk = 64, 128, 128, 128, 256, 256, 512; 1x1 conv to 64; decoder: seven
// (upsample with skip, conv block) sets with uk = 512, 256, 256, 128, 128,
// 128, 64; final 3x3 conv to RGB. Discriminator: residual blocks with
// ak = 64, 128, 256, 256, 256, 256, 256 and two 1x1 heads (real/fake and
// the K cluster logits).
BuiltinNetworks BuiltinConfigs(int cluster_count = 5);

int CountBlocks(const NetworkConfig& config, BlockKind kind);

// Structural warnings, including the encoder depth mismatch between the
// block listing (seven sets) and the five-set overview description.
std::vector<std::string> LintConfig(const NetworkConfig& config);

std::string FormatTraceTable(const ShapeTrace& trace);

}  // namespace envbench

#endif  // ENVBENCH_ARCHSPEC_H_
