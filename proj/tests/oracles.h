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

#ifndef ENVBENCH_TESTS_ORACLES_H_
#define ENVBENCH_TESTS_ORACLES_H_

#include <functional>
#include <span>
#include <vector>

#include "envbench/image.h"
#include "envbench/lights.h"
#include "envbench/masks.h"
#include "envbench/metrics.h"
#include "envbench/random.h"

// Direct-summation reference implementations used to check the library.
namespace envbench::testing {

// |mu_a - mu_b|^2 + tr(Sa + Sb - 2 (Sa^1/2 Sb Sa^1/2)^1/2) in extended
// precision, using the symmetric form of the cross term.
double FrechetOracle(const GaussianSummary& a, const GaussianSummary& b);

// A A^T + 0.1 I with a standard normal A.
Eigen::MatrixXd RandomPsd(int d, Rng& rng);

double MaskedL1Oracle(const Image& i, const Image& g, const BinaryMask& known,
                      const WeightMap& w);
// Block means over f x f tiles for f = 1, 2, 4, computed straight from the
// full-resolution arrays.
double MultiscaleL2Oracle(const Image& i, const Image& g, const WeightMap& w);
double ProjectionLossOracle(const Image& i, const Image& g,
                            const std::vector<BinaryMask>& masks,
                            const WeightMap& w);

struct GradientCheck {
  double max_relative_error = 0.0;
  int checked = 0;
  int skipped = 0;
};

// Central differences with step `h` on every coordinate of `x`; coordinates
// for which `skip(index)` is true are not compared. The error of a coordinate
// is |a - n| / max(|a|, |n|), or the absolute error when both are below
// `zero_floor`.
GradientCheck CheckGradient(const std::function<double(const Image&)>& f,
                            const Image& analytic, const Image& x, double h,
                            const std::function<bool(std::size_t)>& skip,
                            double zero_floor = 1e-10);

// Smallest area over a coarse grid of enclosing ellipses (centers, axes,
// angles) that contain every point, refined by local search. Returns +inf
// when the grid holds no enclosing ellipse.
double BruteForceEnclosingArea(std::span<const Point2> points);

}  // namespace envbench::testing

#endif  // ENVBENCH_TESTS_ORACLES_H_
