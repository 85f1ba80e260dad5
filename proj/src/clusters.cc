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

#include "envbench/clusters.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "envbench/random.h"

namespace envbench {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'C', 'L'};
constexpr std::uint32_t kModelVersion = 1;

std::vector<double> BlurredGray(const Image& patch) {
  const int w = patch.width();
  const int h = patch.height();
  std::vector<double> gray(static_cast<std::size_t>(w) * h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) gray[v * w + u] = patch.Intensity(u, v);
  std::vector<double> out(gray.size());
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int dv = -1; dv <= 1; ++dv)
        for (int du = -1; du <= 1; ++du) {
          const int uu = std::clamp(u + du, 0, w - 1);
          const int vv = std::clamp(v + dv, 0, h - 1);
          s += gray[vv * w + uu];
        }
      out[v * w + u] = s / 9.0;
    }
  }
  return out;
}

template <typename T>
void WriteLe(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T ReadLe(std::istream& in, const char* field) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(std::string("cluster model truncated while reading ") + field);
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

// Returns the nearest row of `centroids` and its squared distance.
std::pair<int, double> Nearest(const Eigen::MatrixXd& centroids,
                               const Eigen::VectorXd& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < centroids.rows(); ++j) {
    const double d = (centroids.row(j).transpose() - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return {best, best_d};
}

}  // namespace

BriefPattern BriefPattern::Make(int width, int height, std::uint64_t seed) {
  if (width < 2 || height < 1) throw Error("pattern area too small");
  BriefPattern p;
  p.width = width;
  p.height = height;
  Rng rng(seed);
  for (int k = 0; k < kDescriptorBits; ++k) {
    std::array<int, 2> a, b;
    do {
      a = {static_cast<int>(rng.UniformInt(0, width - 1)),
           static_cast<int>(rng.UniformInt(0, height - 1))};
      b = {static_cast<int>(rng.UniformInt(0, width - 1)),
           static_cast<int>(rng.UniformInt(0, height - 1))};
    } while (a == b);
    p.first[k] = a;
    p.second[k] = b;
  }
  return p;
}

std::string PatchFeature::DescriptorHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (int k = 0; k < kDescriptorBits; k += 4) {
    const int nibble = (descriptor[k] << 3) | (descriptor[k + 1] << 2) |
                       (descriptor[k + 2] << 1) | descriptor[k + 3];
    out.push_back(kDigits[nibble]);
  }
  return out;
}

std::vector<Image> PatchGrid(const Image& image, int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error("grid must have at least one cell");
  if (image.height() % rows != 0 || image.width() % cols != 0) {
    throw Error("image " + std::to_string(image.width()) + "x" +
                std::to_string(image.height()) + " is not divisible by a " +
                std::to_string(rows) + "x" + std::to_string(cols) + " grid");
  }
  const int pw = image.width() / cols;
  const int ph = image.height() / rows;
  std::vector<Image> patches;
  patches.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Image patch(pw, ph, image.domain());
      for (int v = 0; v < ph; ++v)
        for (int u = 0; u < pw; ++u)
          for (int ch = 0; ch < 3; ++ch)
            patch.at(u, v, ch) = image.at(c * pw + u, r * ph + v, ch);
      patches.push_back(std::move(patch));
    }
  }
  return patches;
}

PatchFeature ComputePatchFeature(const Image& patch,
                                 const BriefPattern& pattern) {
  if (patch.width() < 8 || patch.height() < 8) {
    throw Error("patch must be at least 8x8");
  }
  if (patch.width() != pattern.width || patch.height() != pattern.height) {
    throw Error("sampling pattern was built for a different patch size");
  }
  const std::vector<double> gray = BlurredGray(patch);
  const int w = patch.width();
  PatchFeature f;
  for (int k = 0; k < kDescriptorBits; ++k) {
    const auto& a = pattern.first[k];
    const auto& b = pattern.second[k];
    f.descriptor[k] = gray[a[1] * w + a[0]] < gray[b[1] * w + b[0]];
  }
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (int v = 0; v < patch.height(); ++v)
      for (int u = 0; u < w; ++u) s += patch.at(u, v, c);
    f.mean_color[c] = s / static_cast<double>(patch.pixel_count());
  }
  return f;
}

PatchFeature ComputePatchFeature(const Image& patch, std::uint64_t seed) {
  return ComputePatchFeature(
      patch, BriefPattern::Make(patch.width(), patch.height(), seed));
}

Eigen::VectorXd ImageFeature(const Image& image, const FeatureConfig& config) {
  const auto patches = PatchGrid(image, config.grid_rows, config.grid_cols);
  const BriefPattern pattern = BriefPattern::Make(
      patches.front().width(), patches.front().height(), config.pattern_seed);
  Eigen::VectorXd out(config.Dimension());
  int offset = 0;
  for (const auto& patch : patches) {
    const PatchFeature f = ComputePatchFeature(patch, pattern);
    for (int k = 0; k < kDescriptorBits; ++k)
      out(offset + k) = f.descriptor[k] ? kDescriptorBitScale : 0.0;
    for (int c = 0; c < 3; ++c)
      out(offset + kDescriptorBits + c) = f.mean_color[c];
    offset += kDescriptorBits + 3;
  }
  return out;
}

KMeansResult KMeansFit(const Eigen::MatrixXd& features, int k,
                       std::uint64_t seed, int max_iter,
                       const FeatureConfig& config) {
  const int n = static_cast<int>(features.rows());
  const int d = static_cast<int>(features.cols());
  if (k < 2) throw Error("k-means needs K >= 2");
  if (n < k) {
    throw Error("k-means needs at least K = " + std::to_string(k) +
                " samples, got " + std::to_string(n));
  }
  if (!features.allFinite()) throw Error("k-means features must be finite");
  if (max_iter < 1) throw Error("max_iter must be >= 1");

  // k-means++ seeding.
  Rng rng(seed);
  Eigen::MatrixXd centroids(k, d);
  centroids.row(0) = features.row(rng.UniformInt(0, n - 1));
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i)
    dist[i] = (features.row(i) - centroids.row(0)).squaredNorm();
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (double x : dist) total += x;
    if (!(total > 0.0)) throw Error("fewer than K distinct samples");
    const double target = rng.Uniform01() * total;
    double acc = 0.0;
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (dist[i] <= 0.0) continue;
      acc += dist[i];
      pick = i;
      if (acc > target) break;
    }
    centroids.row(j) = features.row(pick);
    for (int i = 0; i < n; ++i)
      dist[i] = std::min(dist[i],
                         (features.row(i) - centroids.row(j)).squaredNorm());
  }

  KMeansResult result;
  std::vector<int> assign(n, -1);
  std::vector<double> own_dist(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto [best, best_d] = Nearest(centroids, features.row(i));
      changed = changed || best != assign[i];
      assign[i] = best;
      own_dist[i] = best_d;
      inertia += best_d;
    }
    result.inertia_history.push_back(inertia);
    result.iterations = iter + 1;
    if (!changed) {
      result.converged = true;
      break;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[i]) += features.row(i);
      ++counts[assign[i]];
    }
    std::vector<bool> taken(n, false);
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        centroids.row(j) = sums.row(j) / counts[j];
        continue;
      }
      int far = -1;
      for (int i = 0; i < n; ++i)
        if (!taken[i] && (far < 0 || own_dist[i] > own_dist[far])) far = i;
      taken[far] = true;
      centroids.row(j) = features.row(far);
    }
    if (iter + 1 == max_iter) {
      for (int i = 0; i < n; ++i)
        assign[i] = Nearest(centroids, features.row(i)).first;
    }
  }
  result.model.config = config;
  result.model.centroids = std::move(centroids);
  result.assignments = std::move(assign);
  return result;
}

int AssignFeature(const Eigen::VectorXd& feature, const ClusterModel& model) {
  if (model.k() < 1) throw Error("cluster model has no centroids");
  if (feature.size() != model.d()) {
    throw Error("feature dimension " + std::to_string(feature.size()) +
                " does not match model dimension " + std::to_string(model.d()));
  }
  return Nearest(model.centroids, feature).first;
}

int AssignCluster(const Image& image, const ClusterModel& model) {
  if (model.d() != model.config.Dimension()) {
    throw Error("cluster model dimension does not match its feature config");
  }
  return AssignFeature(ImageFeature(image, model.config), model);
}

int AssignCluster(const Image& image, const ClusterModel& model,
                  const FeatureConfig& expected) {
  if (!(model.config == expected)) {
    throw Error("cluster model was fitted with a different feature config");
  }
  return AssignCluster(image, model);
}

void WriteClusterModel(std::ostream& out, const ClusterModel& model) {
  out.write(kMagic, sizeof(kMagic));
  WriteLe<std::uint32_t>(out, kModelVersion);
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.k()));
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.d()));
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.config.grid_rows));
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.config.grid_cols));
  WriteLe<std::uint64_t>(out, model.config.pattern_seed);
  for (int j = 0; j < model.k(); ++j)
    for (int i = 0; i < model.d(); ++i) WriteLe<double>(out, model.centroids(j, i));
  if (!out) throw Error("failed to write cluster model");
}

ClusterModel ReadClusterModel(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("not a cluster model file (bad magic)");
  }
  const auto version = ReadLe<std::uint32_t>(in, "version");
  if (version != kModelVersion) {
    throw Error("unsupported cluster model version " + std::to_string(version));
  }
  const auto k = ReadLe<std::uint32_t>(in, "K");
  const auto d = ReadLe<std::uint32_t>(in, "d");
  ClusterModel model;
  model.config.grid_rows = static_cast<int>(ReadLe<std::uint32_t>(in, "grid rows"));
  model.config.grid_cols = static_cast<int>(ReadLe<std::uint32_t>(in, "grid cols"));
  model.config.pattern_seed = ReadLe<std::uint64_t>(in, "pattern seed");
  if (k < 1 || k > 4096 || d < 1 || d > (1u << 24)) {
    throw Error("cluster model has implausible shape");
  }
  model.centroids.resize(k, d);
  for (std::uint32_t j = 0; j < k; ++j)
    for (std::uint32_t i = 0; i < d; ++i)
      model.centroids(j, i) = ReadLe<double>(in, "centroids");
  return model;
}

void SaveClusterModel(const std::string& path, const ClusterModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteClusterModel(out, model);
}

ClusterModel LoadClusterModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return ReadClusterModel(in);
}

}  // namespace envbench
