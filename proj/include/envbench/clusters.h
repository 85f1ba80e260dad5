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

#ifndef ENVBENCH_CLUSTERS_H_
#define ENVBENCH_CLUSTERS_H_

#include <array>
#include <bitset>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "envbench/image.h"

namespace envbench {

constexpr int kDescriptorBits = 256;
// Descriptor bits enter the k-means feature as bit / 16, so the 256-bit block
// cannot swamp the three color channels.
constexpr double kDescriptorBitScale = 1.0 / 16.0;

struct FeatureConfig {
  int grid_rows = 4;
  int grid_cols = 8;
  std::uint64_t pattern_seed = 0x454d434cULL;

  int Dimension() const {
    return grid_rows * grid_cols * (kDescriptorBits + 3);
  }
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Fixed sampling pattern: bit k compares the blurred gray value at first[k]
// with the one at second[k].
struct BriefPattern {
  int width = 0;
  int height = 0;
  std::array<std::array<int, 2>, kDescriptorBits> first{};
  std::array<std::array<int, 2>, kDescriptorBits> second{};

  static BriefPattern Make(int width, int height, std::uint64_t seed);
};

struct PatchFeature {
  std::bitset<kDescriptorBits> descriptor;
  std::array<double, 3> mean_color{};

  // Bit 0 is the most significant hex digit's top bit.
  std::string DescriptorHex() const;
};

// Non-overlapping row-major tiling; dimensions must be divisible by the grid.
std::vector<Image> PatchGrid(const Image& image, int rows = 4, int cols = 8);

// Gray = RGB mean, 3x3 box blur with clamped edges, then
// bit k = gray(first[k]) < gray(second[k]). Patches must be at least 8x8 and
// match the pattern size.
PatchFeature ComputePatchFeature(const Image& patch,
                                 const BriefPattern& pattern);
PatchFeature ComputePatchFeature(const Image& patch, std::uint64_t seed);

// Per patch: 256 descriptor bits scaled by 1/16, then the mean RGB.
Eigen::VectorXd ImageFeature(const Image& image, const FeatureConfig& config);

struct ClusterModel {
  FeatureConfig config;
  Eigen::MatrixXd centroids;  // K x d

  int k() const { return static_cast<int>(centroids.rows()); }
  int d() const { return static_cast<int>(centroids.cols()); }
};

struct KMeansResult {
  ClusterModel model;
  std::vector<int> assignments;
  std::vector<double> inertia_history;  // after each assignment step
  int iterations = 0;
  bool converged = false;
};

constexpr int kDefaultClusterCount = 5;

// k-means++ seeding and Lloyd iterations on the rows of `features`. An empty
// cluster is re-seeded with the point farthest from its centroid.
KMeansResult KMeansFit(const Eigen::MatrixXd& features,
                       int k = kDefaultClusterCount, std::uint64_t seed = 0,
                       int max_iter = 100, const FeatureConfig& config = {});

// Nearest centroid (Euclidean); ties go to the lowest id.
int AssignFeature(const Eigen::VectorXd& feature, const ClusterModel& model);
int AssignCluster(const Image& image, const ClusterModel& model);
// Same, but rejects a model whose feature configuration differs from
// `expected`.
int AssignCluster(const Image& image, const ClusterModel& model,
                  const FeatureConfig& expected);

// Binary model file: "EMCL", u32 version, u32 K, u32 d, u32 grid rows,
// u32 grid cols, u64 pattern seed, then K*d little-endian float64 centroids.
void WriteClusterModel(std::ostream& out, const ClusterModel& model);
ClusterModel ReadClusterModel(std::istream& in);
void SaveClusterModel(const std::string& path, const ClusterModel& model);
ClusterModel LoadClusterModel(const std::string& path);

}  // namespace envbench

#endif  // ENVBENCH_CLUSTERS_H_
