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

#include "envbench/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace envbench {

namespace {

constexpr double kPsdTolerance = 1e-8;

void ValidateSummary(const GaussianSummary& s, const char* which) {
  const Eigen::Index d = s.mu.size();
  if (s.sigma.rows() != d || s.sigma.cols() != d) {
    throw Error(std::string("covariance shape mismatch in summary ") + which);
  }
  if (!s.mu.allFinite() || !s.sigma.allFinite()) {
    throw Error(std::string("non-finite statistics in summary ") + which);
  }
  const double scale = std::max(1.0, s.sigma.cwiseAbs().maxCoeff());
  if ((s.sigma - s.sigma.transpose()).cwiseAbs().maxCoeff() >
      kPsdTolerance * scale) {
    throw Error(std::string("covariance is not symmetric in summary ") + which);
  }
}

// Symmetric PSD square root; throws if an eigenvalue is clearly negative.
Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, const char* which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    throw Error(std::string("eigendecomposition failed for summary ") + which);
  }
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double floor =
      -kPsdTolerance * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < floor) {
    throw Error(std::string("covariance is not positive semi-definite in "
                            "summary ") +
                which);
  }
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

Eigen::VectorXd PatchStatsExtractor::Extract(const Image& image) const {
  Eigen::VectorXd f(dimension());
  int k = 0;
  for (int r = 0; r < kRows; ++r) {
    const int v0 = r * image.height() / kRows;
    const int v1 = std::max(v0 + 1, (r + 1) * image.height() / kRows);
    for (int col = 0; col < kCols; ++col) {
      const int u0 = col * image.width() / kCols;
      const int u1 = std::max(u0 + 1, (col + 1) * image.width() / kCols);
      for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        int count = 0;
        for (int v = v0; v < std::min(v1, image.height()); ++v)
          for (int u = u0; u < std::min(u1, image.width()); ++u) {
            sum += image.at(u, v, c);
            ++count;
          }
        const double mean = sum / count;
        double var = 0.0;
        for (int v = v0; v < std::min(v1, image.height()); ++v)
          for (int u = u0; u < std::min(u1, image.width()); ++u) {
            const double d = image.at(u, v, c) - mean;
            var += d * d;
          }
        f(k + c) = mean;
        f(k + 3 + c) = std::sqrt(var / count);
      }
      k += 6;
    }
  }
  return f;
}

FeatureSet ExtractFeatures(std::span<const Image> images,
                           const FeatureExtractor& extractor) {
  FeatureSet set;
  set.features.resize(static_cast<Eigen::Index>(images.size()),
                      extractor.dimension());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].SameSize(images.front())) {
      throw Error("feature extraction needs images of equal size");
    }
    set.features.row(static_cast<Eigen::Index>(i)) =
        extractor.Extract(images[i]).transpose();
  }
  return set;
}

GaussianSummary FitGaussian(const FeatureSet& set, double shrinkage) {
  if (set.n() < 2) throw Error("need at least two samples per set");
  GaussianSummary s;
  s.mu = set.features.colwise().mean().transpose();
  const Eigen::MatrixXd centered =
      set.features.rowwise() - s.mu.transpose();
  s.sigma = (centered.transpose() * centered) / (set.n() - 1.0);
  s.sigma = (s.sigma + s.sigma.transpose()) / 2.0;
  s.sigma.diagonal().array() += shrinkage;
  return s;
}

double FrechetDistance(const GaussianSummary& a, const GaussianSummary& b) {
  ValidateSummary(a, "a");
  ValidateSummary(b, "b");
  if (a.mu.size() != b.mu.size()) {
    throw Error("summaries have different dimensions");
  }
  const Eigen::MatrixXd root_a = PsdSqrt(a.sigma, "a");
  const Eigen::MatrixXd root_b = PsdSqrt(b.sigma, "b");
  const Eigen::MatrixXd cross = root_b * root_a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  const double trace_sqrt = svd.singularValues().sum();
  const double mean_term = (a.mu - b.mu).squaredNorm();
  const double value =
      mean_term + a.sigma.trace() + b.sigma.trace() - 2.0 * trace_sqrt;
  return std::max(0.0, value);
}

double FidFromFeatures(const FeatureSet& a, const FeatureSet& b) {
  if (a.d() != b.d()) throw Error("feature dimensions differ");
  return FrechetDistance(FitGaussian(a), FitGaussian(b));
}

double Fid(std::span<const Image> images_a, std::span<const Image> images_b,
           const FeatureExtractor& extractor) {
  if (images_a.size() < 2 || images_b.size() < 2) {
    throw Error("FID needs at least two images per set");
  }
  return FidFromFeatures(ExtractFeatures(images_a, extractor),
                         ExtractFeatures(images_b, extractor));
}

double Ssim(const Image& a, const Image& b, double data_range) {
  if (!a.SameSize(b)) throw Error("SSIM: image dimensions differ");
  if (!(data_range > 0.0)) throw Error("SSIM: data range must be positive");
  if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
    throw Error("SSIM: images smaller than the 8x8 window");
  }
  const int w = a.width();
  const int h = a.height();
  const double c1 = std::pow(0.01 * data_range, 2);
  const double c2 = std::pow(0.03 * data_range, 2);
  const double n = kSsimWindow * kSsimWindow;

  // Summed-area tables of x, y, x^2, y^2, xy with a zero border.
  const int sw = w + 1;
  std::vector<double> sx, sy, sxx, syy, sxy;
  auto table_at = [sw](const std::vector<double>& t, int u, int v) {
    return t[static_cast<std::size_t>(v) * sw + u];
  };
  auto window_sum = [&](const std::vector<double>& t, int u, int v) {
    return table_at(t, u + kSsimWindow, v + kSsimWindow) -
           table_at(t, u, v + kSsimWindow) - table_at(t, u + kSsimWindow, v) +
           table_at(t, u, v);
  };

  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (auto* t : {&sx, &sy, &sxx, &syy, &sxy})
      t->assign(static_cast<std::size_t>(sw) * (h + 1), 0.0);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        const double x = a.at(u, v, c);
        const double y = b.at(u, v, c);
        const std::size_t i = static_cast<std::size_t>(v + 1) * sw + (u + 1);
        const std::size_t up = i - sw;
        const std::size_t left = i - 1;
        const std::size_t diag = up - 1;
        sx[i] = x + sx[up] + sx[left] - sx[diag];
        sy[i] = y + sy[up] + sy[left] - sy[diag];
        sxx[i] = x * x + sxx[up] + sxx[left] - sxx[diag];
        syy[i] = y * y + syy[up] + syy[left] - syy[diag];
        sxy[i] = x * y + sxy[up] + sxy[left] - sxy[diag];
      }
    }
    for (int v = 0; v + kSsimWindow <= h; ++v) {
      for (int u = 0; u + kSsimWindow <= w; ++u) {
        const double mx = window_sum(sx, u, v) / n;
        const double my = window_sum(sy, u, v) / n;
        const double vx = window_sum(sxx, u, v) / n - mx * mx;
        const double vy = window_sum(syy, u, v) / n - my * my;
        const double cov = window_sum(sxy, u, v) / n - mx * my;
        total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
      }
    }
  }
  const double windows = static_cast<double>(w - kSsimWindow + 1) *
                         (h - kSsimWindow + 1) * 3.0;
  return total / windows;
}

double Mse(const Image& a, const Image& b) {
  if (!a.SameSize(b)) throw Error("MSE: image dimensions differ");
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return sum / static_cast<double>(x.size());
}

std::vector<int> TopK(const ScoreList& list, int k) {
  const int n = static_cast<int>(list.scores.size());
  if (k < 0 || k > n) {
    throw Error("top-k: k = " + std::to_string(k) + " exceeds " +
                std::to_string(n) + " candidates");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& s = list.scores;
  const bool higher = list.higher_is_better;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return higher ? s[x] > s[y] : s[x] < s[y];
  });
  order.resize(k);
  return order;
}

int TopkIntersection(const ScoreList& a, const ScoreList& b, int k) {
  if (a.scores.size() != b.scores.size()) {
    throw Error("top-k: score lists cover different candidate sets");
  }
  std::vector<int> ta = TopK(a, k);
  std::vector<int> tb = TopK(b, k);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<int> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(),
                        std::back_inserter(common));
  return static_cast<int>(common.size());
}

RetrievalStats RetrievalIntersection(std::span<const Image> corpus,
                                     const Scorer& a, const Scorer& b, int k) {
  const int n = static_cast<int>(corpus.size());
  if (n < k + 1) throw Error("retrieval corpus smaller than k + 1");
  RetrievalStats stats;
  std::vector<double> sa, sb;
  for (int ref = 0; ref < n; ++ref) {
    sa.clear();
    sb.clear();
    for (int j = 0; j < n; ++j) {
      if (j == ref) continue;
      sa.push_back(a.score(corpus[ref], corpus[j]));
      sb.push_back(b.score(corpus[ref], corpus[j]));
    }
    stats.intersections.push_back(TopkIntersection(
        {sa, a.higher_is_better}, {sb, b.higher_is_better}, k));
  }
  double sum = 0.0;
  for (int x : stats.intersections) sum += x;
  stats.mean = sum / n;
  double var = 0.0;
  for (int x : stats.intersections) var += (x - stats.mean) * (x - stats.mean);
  stats.stddev = std::sqrt(var / n);
  return stats;
}

Image ExposureMatch(const Image& pred, const Image& gt,
                    const BinaryMask& known) {
  if (!pred.SameSize(gt) || !known.SameSize(pred)) {
    throw Error("exposure match: dimensions differ");
  }
  double sum_pred = 0.0;
  double sum_gt = 0.0;
  std::size_t count = 0;
  for (int v = 0; v < pred.height(); ++v)
    for (int u = 0; u < pred.width(); ++u)
      if (known.at(u, v)) {
        for (int c = 0; c < 3; ++c) {
          sum_pred += pred.at(u, v, c);
          sum_gt += gt.at(u, v, c);
        }
        ++count;
      }
  if (count == 0) throw Error("exposure match: empty known region");
  if (!(sum_pred > 0.0)) {
    throw Error("exposure match: prediction has zero mean on the known region");
  }
  const double scale = sum_gt / sum_pred;
  Image out = pred;
  for (double& x : out.values()) x *= scale;
  return out;
}

Image OverlayKnown(const Image& pred, const Image& gt,
                   const BinaryMask& known) {
  if (!pred.SameSize(gt) || !known.SameSize(pred)) {
    throw Error("overlay: dimensions differ");
  }
  Image out = pred;
  for (int v = 0; v < pred.height(); ++v)
    for (int u = 0; u < pred.width(); ++u)
      if (known.at(u, v))
        for (int c = 0; c < 3; ++c) out.at(u, v, c) = gt.at(u, v, c);
  return out;
}

}  // namespace envbench
