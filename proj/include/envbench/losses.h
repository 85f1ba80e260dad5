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

#ifndef ENVBENCH_LOSSES_H_
#define ENVBENCH_LOSSES_H_

#include <vector>

#include "envbench/image.h"
#include "envbench/masks.h"

namespace envbench {

// Mask convention for this header: `known` is set on pixels that were part of
// the network input. The image losses are meant for log-encoded maps and the
// weight map is normally SolidAngleWeights(width, height).

struct LossWeights {
  double w1 = 0.5;   // masked L1 on the known region
  double w2 = 0.01;  // multi-scale L2 on the full map
};

// Probability clamp applied before every logarithm.
constexpr double kProbabilityEpsilon = 1e-7;

// Length-K probability vector (one-hot for labels).
struct ClusterDistribution {
  std::vector<double> probs;

  void Validate() const;  // non-negative, sums to 1 within 1e-6
  bool IsOneHot() const;
  static ClusterDistribution OneHot(int k, int label);
};

struct DiscriminatorOutputs {
  double d_real = 0.5;  // D on the ground-truth sample
  double d_fake = 0.5;  // D on the generated sample
};

// Weighted mean absolute difference over the known pixels and all channels:
// sum(w * m * |i - g|) / (3 * sum(w * m)). Throws when nothing is known.
double MaskedL1(const Image& i, const Image& g, const BinaryMask& known,
                const WeightMap& w);

// Mean over scales {1, 1/2, 1/4} of the weighted mean squared error. Coarser
// scales 2x2-average-pool both images and the weights. Dimensions must be
// divisible by 4.
double MultiscaleL2(const Image& i, const Image& g, const WeightMap& w);

// Mean over masks of |s_k(i) - s_k(g)| with s_k(x) = sum over pixels and
// channels of w * P_k * x. With steradian weights each s_k is a solid-angle
// integral, so the value does not depend on resolution.
double ProjectionLoss(const Image& i, const Image& g,
                      const ProjectionMaskSet& masks, const WeightMap& w);

struct ImageLossTerms {
  double masked_l1 = 0.0;
  double multiscale_l2 = 0.0;
  double projection = 0.0;
  double total = 0.0;
};

ImageLossTerms ImageLoss(const Image& i, const Image& g,
                         const BinaryMask& known,
                         const ProjectionMaskSet& masks, const WeightMap& w,
                         const LossWeights& weights = {});

// Subgradients with respect to the prediction `i` (same layout as `i`). The
// L1-type terms use sign(0) = 0 at kinks.
Image MaskedL1Gradient(const Image& i, const Image& g, const BinaryMask& known,
                       const WeightMap& w);
Image MultiscaleL2Gradient(const Image& i, const Image& g, const WeightMap& w);
Image ProjectionLossGradient(const Image& i, const Image& g,
                             const ProjectionMaskSet& masks,
                             const WeightMap& w);

// -sum_k y_k log(p_k); y must be one-hot.
double ClusterCrossEntropy(const ClusterDistribution& y,
                           const ClusterDistribution& p);

struct GanLosses {
  double fakereal = 0.0;     // discriminator: -[log D(G) + log(1 - D(I))]
  double adversarial = 0.0;  // generator: -log D(I)
};

GanLosses ComputeGanLosses(const DiscriminatorOutputs& d);

struct TotalLosses {
  double envmapnet = 0.0;
  double discriminator = 0.0;
};

TotalLosses CombineLosses(double image_loss, double adversarial,
                          double cluster, double fakereal);

}  // namespace envbench

#endif  // ENVBENCH_LOSSES_H_
