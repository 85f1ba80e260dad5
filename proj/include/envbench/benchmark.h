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

#ifndef ENVBENCH_BENCHMARK_H_
#define ENVBENCH_BENCHMARK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "envbench/image.h"
#include "envbench/lights.h"

namespace envbench {

constexpr int kReportVersion = 1;

enum class MaskPolicy {
  kCenterCrop,  // known region = 90 degree crop at yaw 0, pitch 0
  kProvided,    // <mask_dir>/<id>.png, white = known
  kGenerated,   // random occlusion mask seeded per pair
};

const char* MaskPolicyName(MaskPolicy policy);

struct MetricToggles {
  bool angular_error = true;
  bool projection_loss = true;
  bool ssim = true;
  bool mse = true;
  bool fid = true;
};

struct BenchmarkJob {
  std::string pred_dir;
  std::string gt_dir;
  // Optional; lines of "<pred file> <gt file>" relative to the directories.
  std::string manifest;
  MaskPolicy mask_policy = MaskPolicy::kCenterCrop;
  std::string mask_dir;
  MetricToggles metrics;
  int projection_mask_count = 50;
  ExtractionOptions extraction;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_path;
};

struct ImagePair {
  std::string id;
  std::string pred_path;
  std::string gt_path;
};

struct PairList {
  std::vector<ImagePair> pairs;      // sorted by id
  std::vector<std::string> unpaired; // "pred/<file>" or "gt/<file>"
};

// Stem pairing of the supported image files in the two directories, or the
// manifest when one is given.
PairList PairFiles(const BenchmarkJob& job);

struct PairResult {
  std::string id;
  std::string pred_file;
  std::string gt_file;
  std::optional<std::string> error;
  std::optional<double> angular_error;
  int gt_lights = 0;
  int pred_lights = 0;
  std::optional<double> projection_loss;
  std::optional<double> ssim;
  std::optional<double> mse;
};

struct MetricReport {
  int report_version = kReportVersion;
  std::uint64_t seed = 0;
  MaskPolicy mask_policy = MaskPolicy::kCenterCrop;
  int projection_mask_count = 0;
  MetricToggles metrics;
  std::vector<PairResult> pairs;
  std::vector<std::string> unpaired;
  int failed = 0;
  std::optional<double> angular_error_mean;
  std::optional<double> angular_error_std;  // population
  std::optional<double> projection_loss_mean;
  std::optional<double> ssim_mean;
  std::optional<double> mse_mean;
  std::optional<double> fid;
  std::string fid_extractor;
};

// In-memory pair for the pipeline; `known` is used with kProvided.
struct LoadedPair {
  std::string id;
  Image pred;
  Image gt;
  std::optional<BinaryMask> known;
};

// Known region for the default policy: the 90 degree center crop projected
// back onto a width x height grid.
BinaryMask CenterCropKnownMask(int width, int height);

// Runs the per-pair pipeline, fills the metrics of `result` and returns the
// composite (exposure-matched prediction with the known pixels overlaid).
Image EvaluatePair(const LoadedPair& pair, const BenchmarkJob& job,
                   PairResult& result);

// Throws Error when no pair is left. Results are ordered by pair id and do
// not depend on `job.threads`.
MetricReport RunBenchmark(const BenchmarkJob& job);

std::string ReportToJson(const MetricReport& report);
std::string ReportToCsv(const MetricReport& report);
std::string ReportToText(const MetricReport& report);

}  // namespace envbench

#endif  // ENVBENCH_BENCHMARK_H_
