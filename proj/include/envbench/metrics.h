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

#ifndef ENVBENCH_METRICS_H_
#define ENVBENCH_METRICS_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "envbench/image.h"

namespace envbench {

// n x d matrix of per-image feature vectors (one row per image).
struct FeatureSet {
  Eigen::MatrixXd features;

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }
};

// Pluggable feature extractor for FID. Implementations must be deterministic
// and thread-safe.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual Eigen::VectorXd Extract(const Image& image) const = 0;
};

// "patchstats-v1": a 4 x 8 grid of cells, per cell the mean and standard
// deviation of each RGB channel (d = 192). Cell boundaries are
// floor(i * size / cells), so any image size is accepted.
class PatchStatsExtractor : public FeatureExtractor {
 public:
  static constexpr int kRows = 4;
  static constexpr int kCols = 8;

  std::string name() const override { return "patchstats-v1"; }
  int dimension() const override { return kRows * kCols * 2 * 3; }
  Eigen::VectorXd Extract(const Image& image) const override;
};

FeatureSet ExtractFeatures(std::span<const Image> images,
                           const FeatureExtractor& extractor);

struct GaussianSummary {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

constexpr double kCovarianceShrinkage = 1e-6;

// Sample mean and unbiased covariance plus shrinkage * I.
GaussianSummary FitGaussian(const FeatureSet& set,
                            double shrinkage = kCovarianceShrinkage);

// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)). The trace of the
// cross term is the nuclear norm of S_b^(1/2) S_a^(1/2), whose squared
// singular values are the eigenvalues of S_a^(1/2) S_b S_a^(1/2). Throws for
// covariances that are not symmetric positive semi-definite within 1e-8.
double FrechetDistance(const GaussianSummary& a, const GaussianSummary& b);

double FidFromFeatures(const FeatureSet& a, const FeatureSet& b);
double Fid(std::span<const Image> images_a, std::span<const Image> images_b,
           const FeatureExtractor& extractor);

// Single-scale SSIM with an 8 x 8 uniform sliding window (stride 1),
// population statistics, C1 = (0.01 L)^2 and C2 = (0.03 L)^2; averaged over
// all windows and channels.
constexpr int kSsimWindow = 8;
double Ssim(const Image& a, const Image& b, double data_range);

// Mean squared difference over all pixels and channels.
double Mse(const Image& a, const Image& b);

struct ScoreList {
  std::span<const double> scores;
  bool higher_is_better = true;
};

// Indices of the k best candidates; ties go to the lower index.
std::vector<int> TopK(const ScoreList& list, int k);

// |top-k(a) intersect top-k(b)| for two score lists over the same candidates.
int TopkIntersection(const ScoreList& a, const ScoreList& b, int k = 5);

// Similarity of a candidate to a reference, used for retrieval.
struct Scorer {
  std::string name;
  std::function<double(const Image& reference, const Image& candidate)> score;
  bool higher_is_better = true;
};

struct RetrievalStats {
  std::vector<int> intersections;  // one per reference image
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

// For every corpus image as the reference, ranks all other images with both
// scorers and intersects their top-k retrievals.
RetrievalStats RetrievalIntersection(std::span<const Image> corpus,
                                     const Scorer& a, const Scorer& b,
                                     int k = 5);

// Scales `pred` so that its mean over the known pixels (all channels) equals
// that of `gt`. `known` marks the known pixels.
Image ExposureMatch(const Image& pred, const Image& gt,
                    const BinaryMask& known);

// Known pixels from `gt`, the rest from `pred`.
Image OverlayKnown(const Image& pred, const Image& gt,
                   const BinaryMask& known);

}  // namespace envbench

#endif  // ENVBENCH_METRICS_H_
