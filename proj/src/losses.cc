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

#include "envbench/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace envbench {

namespace {

void CheckPair(const Image& i, const Image& g, const WeightMap& w) {
  if (!i.SameSize(g)) throw Error("prediction and target dimensions differ");
  if (w.width() != i.width() || w.height() != i.height()) {
    throw Error("weight map dimensions differ from the images");
  }
}

double Sign(double x) { return (x > 0.0) - (x < 0.0); }

Image Pool2x2(const Image& img) {
  Image out(img.width() / 2, img.height() / 2, img.domain());
  for (int v = 0; v < out.height(); ++v)
    for (int u = 0; u < out.width(); ++u)
      for (int c = 0; c < 3; ++c)
        out.at(u, v, c) =
            (img.at(2 * u, 2 * v, c) + img.at(2 * u + 1, 2 * v, c) +
             img.at(2 * u, 2 * v + 1, c) + img.at(2 * u + 1, 2 * v + 1, c)) /
            4.0;
  return out;
}

WeightMap Pool2x2(const WeightMap& w) {
  WeightMap out(w.width() / 2, w.height() / 2);
  for (int v = 0; v < out.height(); ++v)
    for (int u = 0; u < out.width(); ++u)
      out.at(u, v) = (w.at(2 * u, 2 * v) + w.at(2 * u + 1, 2 * v) +
                      w.at(2 * u, 2 * v + 1) + w.at(2 * u + 1, 2 * v + 1)) /
                     4.0;
  return out;
}

constexpr int kScales = 3;

void CheckMultiscaleDims(const Image& i) {
  if (i.width() % 4 != 0 || i.height() % 4 != 0) {
    throw Error("multi-scale L2 needs dimensions divisible by 4, got " +
                std::to_string(i.width()) + "x" + std::to_string(i.height()));
  }
}

void CheckMasks(const ProjectionMaskSet& masks, const Image& i) {
  if (masks.size() == 0) throw Error("empty projection mask set");
  for (const auto& m : masks.masks) {
    if (!m.SameSize(i)) throw Error("projection mask dimensions differ");
  }
}

// s_k(x) for every mask.
std::vector<double> Projections(const Image& x, const ProjectionMaskSet& masks,
                                const WeightMap& w) {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& m : masks.masks) {
    double s = 0.0;
    for (int v = 0; v < x.height(); ++v)
      for (int u = 0; u < x.width(); ++u)
        if (m.at(u, v))
          s += w.at(u, v) * (x.at(u, v, 0) + x.at(u, v, 1) + x.at(u, v, 2));
    out.push_back(s);
  }
  return out;
}

}  // namespace

void ClusterDistribution::Validate() const {
  if (probs.empty()) throw Error("empty cluster distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error("cluster probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error("cluster probabilities must sum to 1");
  }
}

bool ClusterDistribution::IsOneHot() const {
  int ones = 0;
  for (double p : probs) {
    if (p == 1.0) {
      ++ones;
    } else if (p != 0.0) {
      return false;
    }
  }
  return ones == 1;
}

ClusterDistribution ClusterDistribution::OneHot(int k, int label) {
  if (label < 0 || label >= k) throw Error("label outside [0, K)");
  ClusterDistribution d;
  d.probs.assign(k, 0.0);
  d.probs[label] = 1.0;
  return d;
}

double MaskedL1(const Image& i, const Image& g, const BinaryMask& known,
                const WeightMap& w) {
  CheckPair(i, g, w);
  if (!known.SameSize(i)) throw Error("mask dimensions differ");
  double num = 0.0;
  double den = 0.0;
  for (int v = 0; v < i.height(); ++v) {
    for (int u = 0; u < i.width(); ++u) {
      if (!known.at(u, v)) continue;
      double diff = 0.0;
      for (int c = 0; c < 3; ++c) diff += std::abs(i.at(u, v, c) - g.at(u, v, c));
      num += w.at(u, v) * diff;
      den += w.at(u, v);
    }
  }
  if (!(den > 0.0)) throw Error("masked L1: no known pixels");
  return num / (3.0 * den);
}

Image MaskedL1Gradient(const Image& i, const Image& g, const BinaryMask& known,
                       const WeightMap& w) {
  CheckPair(i, g, w);
  if (!known.SameSize(i)) throw Error("mask dimensions differ");
  double den = 0.0;
  for (int v = 0; v < i.height(); ++v)
    for (int u = 0; u < i.width(); ++u)
      if (known.at(u, v)) den += w.at(u, v);
  if (!(den > 0.0)) throw Error("masked L1: no known pixels");
  Image grad(i.width(), i.height(), i.domain());
  for (int v = 0; v < i.height(); ++v)
    for (int u = 0; u < i.width(); ++u)
      if (known.at(u, v))
        for (int c = 0; c < 3; ++c)
          grad.at(u, v, c) =
              w.at(u, v) * Sign(i.at(u, v, c) - g.at(u, v, c)) / (3.0 * den);
  return grad;
}

double MultiscaleL2(const Image& i, const Image& g, const WeightMap& w) {
  CheckPair(i, g, w);
  CheckMultiscaleDims(i);
  Image a = i;
  Image b = g;
  WeightMap ws = w;
  double total = 0.0;
  for (int s = 0; s < kScales; ++s) {
    if (s > 0) {
      a = Pool2x2(a);
      b = Pool2x2(b);
      ws = Pool2x2(ws);
    }
    double num = 0.0;
    for (int v = 0; v < a.height(); ++v) {
      for (int u = 0; u < a.width(); ++u) {
        double sq = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = a.at(u, v, c) - b.at(u, v, c);
          sq += d * d;
        }
        num += ws.at(u, v) * sq;
      }
    }
    total += num / (3.0 * ws.Sum());
  }
  return total / kScales;
}

Image MultiscaleL2Gradient(const Image& i, const Image& g, const WeightMap& w) {
  CheckPair(i, g, w);
  CheckMultiscaleDims(i);
  Image grad(i.width(), i.height(), i.domain());
  Image a = i;
  Image b = g;
  WeightMap ws = w;
  for (int s = 0; s < kScales; ++s) {
    if (s > 0) {
      a = Pool2x2(a);
      b = Pool2x2(b);
      ws = Pool2x2(ws);
    }
    const int block = 1 << s;
    const double scale =
        2.0 / (3.0 * ws.Sum() * block * block * kScales);
    for (int v = 0; v < i.height(); ++v) {
      for (int u = 0; u < i.width(); ++u) {
        const int cu = u / block;
        const int cv = v / block;
        for (int c = 0; c < 3; ++c) {
          grad.at(u, v, c) += scale * ws.at(cu, cv) *
                              (a.at(cu, cv, c) - b.at(cu, cv, c));
        }
      }
    }
  }
  return grad;
}

double ProjectionLoss(const Image& i, const Image& g,
                      const ProjectionMaskSet& masks, const WeightMap& w) {
  CheckPair(i, g, w);
  CheckMasks(masks, i);
  const auto si = Projections(i, masks, w);
  const auto sg = Projections(g, masks, w);
  double sum = 0.0;
  for (std::size_t k = 0; k < si.size(); ++k) sum += std::abs(si[k] - sg[k]);
  return sum / static_cast<double>(masks.size());
}

Image ProjectionLossGradient(const Image& i, const Image& g,
                             const ProjectionMaskSet& masks,
                             const WeightMap& w) {
  CheckPair(i, g, w);
  CheckMasks(masks, i);
  const auto si = Projections(i, masks, w);
  const auto sg = Projections(g, masks, w);
  Image grad(i.width(), i.height(), i.domain());
  const double inv_count = 1.0 / static_cast<double>(masks.size());
  for (std::size_t k = 0; k < masks.size(); ++k) {
    const double sign = Sign(si[k] - sg[k]);
    if (sign == 0.0) continue;
    const auto& m = masks.masks[k];
    for (int v = 0; v < i.height(); ++v)
      for (int u = 0; u < i.width(); ++u)
        if (m.at(u, v))
          for (int c = 0; c < 3; ++c)
            grad.at(u, v, c) += sign * w.at(u, v) * inv_count;
  }
  return grad;
}

ImageLossTerms ImageLoss(const Image& i, const Image& g,
                         const BinaryMask& known,
                         const ProjectionMaskSet& masks, const WeightMap& w,
                         const LossWeights& weights) {
  if (weights.w1 < 0.0 || weights.w2 < 0.0) {
    throw Error("loss weights must be non-negative");
  }
  ImageLossTerms t;
  t.masked_l1 = MaskedL1(i, g, known, w);
  t.multiscale_l2 = MultiscaleL2(i, g, w);
  t.projection = ProjectionLoss(i, g, masks, w);
  t.total = weights.w1 * t.masked_l1 + weights.w2 * t.multiscale_l2 +
            t.projection;
  return t;
}

double ClusterCrossEntropy(const ClusterDistribution& y,
                           const ClusterDistribution& p) {
  if (!y.IsOneHot()) throw Error("cluster label must be one-hot");
  p.Validate();
  if (y.probs.size() != p.probs.size()) {
    throw Error("cluster label and prediction lengths differ");
  }
  double loss = 0.0;
  for (std::size_t k = 0; k < y.probs.size(); ++k) {
    if (y.probs[k] == 0.0) continue;
    const double pk = std::clamp(p.probs[k], kProbabilityEpsilon,
                                 1.0 - kProbabilityEpsilon);
    loss -= y.probs[k] * std::log(pk);
  }
  return loss;
}

GanLosses ComputeGanLosses(const DiscriminatorOutputs& d) {
  const double real =
      std::clamp(d.d_real, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const double fake =
      std::clamp(d.d_fake, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  GanLosses out;
  out.fakereal = -(std::log(real) + std::log(1.0 - fake));
  out.adversarial = -std::log(fake);
  return out;
}

TotalLosses CombineLosses(double image_loss, double adversarial,
                          double cluster, double fakereal) {
  for (double x : {image_loss, adversarial, cluster, fakereal}) {
    if (!std::isfinite(x)) throw Error("loss terms must be finite");
  }
  return {image_loss + adversarial + cluster, fakereal + cluster};
}

}  // namespace envbench
