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

#include "envbench/benchmark.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "envbench/io.h"
#include "test_support.h"

namespace envbench {
namespace {

namespace fs = std::filesystem;
using testing::PlantedLight;
using testing::TempDir;

void WriteText(const std::string& path, const std::string& text) {
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  WriteFileBytes(path, bytes);
}

void WriteSelfCorpus(const std::string& dir, int n) {
  fs::create_directories(dir);
  for (int i = 0; i < n; ++i) {
    const std::vector<PlantedLight> lights = {{-150.0 + 70 * i, 10.0 * (i % 3), 3, 6.0}};
    WriteImage(dir + "/m" + std::to_string(i) + ".pfm",
               testing::RenderPlantedLights(128, 64, lights, 0.3 + 0.1 * i));
  }
}

BenchmarkJob Job(const std::string& pred, const std::string& gt) {
  BenchmarkJob job;
  job.pred_dir = pred;
  job.gt_dir = gt;
  job.projection_mask_count = 10;
  job.seed = 11;
  return job;
}

TEST(RunBenchmark, SelfComparison) {
  TempDir dir("bench-self");
  WriteSelfCorpus(dir.File("maps"), 4);
  const MetricReport r = RunBenchmark(Job(dir.File("maps"), dir.File("maps")));
  ASSERT_EQ(r.pairs.size(), 4u);
  EXPECT_EQ(r.failed, 0);
  for (const auto& p : r.pairs) {
    ASSERT_FALSE(p.error) << *p.error;
    EXPECT_EQ(*p.angular_error, 0.0);
    EXPECT_NEAR(*p.ssim, 1.0, 1e-12);
    EXPECT_EQ(*p.mse, 0.0);
    EXPECT_EQ(*p.projection_loss, 0.0);
  }
  EXPECT_EQ(*r.angular_error_mean, 0.0);
  EXPECT_EQ(*r.angular_error_std, 0.0);
  ASSERT_TRUE(r.fid);
  EXPECT_NEAR(*r.fid, 0.0, 1e-9);
}

TEST(RunBenchmark, ShiftedLightsGiveTheShiftAngle) {
  TempDir dir("bench-shift");
  testing::WriteShiftedLightCorpus(dir.File("pred"), dir.File("gt"), 10, 15.0, 5);
  BenchmarkJob job = Job(dir.File("pred"), dir.File("gt"));
  job.metrics.fid = false;
  const MetricReport r = RunBenchmark(job);
  ASSERT_EQ(r.pairs.size(), 10u);
  EXPECT_EQ(r.failed, 0);
  for (const auto& p : r.pairs) {
    ASSERT_FALSE(p.error) << *p.error;
    EXPECT_EQ(p.gt_lights, p.pred_lights) << p.id;
    EXPECT_NEAR(*p.angular_error, 15.0, 1.5) << p.id;
  }
  EXPECT_NEAR(*r.angular_error_mean, 15.0, 0.5);
  RecordProperty("angular_error_mean", std::to_string(*r.angular_error_mean));
}

TEST(RunBenchmark, ReportsIdenticalAcrossThreadCounts) {
  TempDir dir("bench-threads");
  testing::WriteShiftedLightCorpus(dir.File("pred"), dir.File("gt"), 6, 20.0, 9, 128);
  for (MaskPolicy policy : {MaskPolicy::kCenterCrop, MaskPolicy::kGenerated}) {
    BenchmarkJob job = Job(dir.File("pred"), dir.File("gt"));
    job.mask_policy = policy;
    job.threads = 1;
    const MetricReport one = RunBenchmark(job);
    job.threads = 8;
    const MetricReport eight = RunBenchmark(job);
    EXPECT_EQ(ReportToJson(one), ReportToJson(eight));
    EXPECT_EQ(ReportToCsv(one), ReportToCsv(eight));
    EXPECT_EQ(ReportToText(one), ReportToText(eight));
  }
}

TEST(RunBenchmark, SeedChangesGeneratedMasks) {
  TempDir dir("bench-seed");
  testing::WriteShiftedLightCorpus(dir.File("pred"), dir.File("gt"), 2, 20.0, 9, 128);
  BenchmarkJob job = Job(dir.File("pred"), dir.File("gt"));
  job.mask_policy = MaskPolicy::kGenerated;
  const std::string a = ReportToJson(RunBenchmark(job));
  EXPECT_EQ(a, ReportToJson(RunBenchmark(job)));
  job.seed = 12;
  EXPECT_NE(a, ReportToJson(RunBenchmark(job)));
}

TEST(RunBenchmark, UnpairedAndFailedPairs) {
  TempDir dir("bench-unpaired");
  WriteSelfCorpus(dir.File("pred"), 3);
  WriteSelfCorpus(dir.File("gt"), 2);
  WriteText(dir.File("gt") + "/m1.pfm", "PF\n");
  WriteImage(dir.File("gt") + "/extra.pfm", Image(8, 4, Domain::kLinearHDR, 1.0));
  const MetricReport r = RunBenchmark(Job(dir.File("pred"), dir.File("gt")));
  ASSERT_EQ(r.pairs.size(), 2u);
  EXPECT_EQ(r.pairs[0].id, "m0");
  EXPECT_FALSE(r.pairs[0].error);
  ASSERT_TRUE(r.pairs[1].error);
  EXPECT_NE(r.pairs[1].error->find("byte"), std::string::npos);
  EXPECT_EQ(r.failed, 1);
  EXPECT_EQ(r.unpaired, (std::vector<std::string>{"pred/m2.pfm", "gt/extra.pfm"}));
  EXPECT_FALSE(r.fid);  // one successful pair
}

TEST(RunBenchmark, NothingPairedIsAnError) {
  TempDir dir("bench-empty");
  WriteSelfCorpus(dir.File("pred"), 1);
  fs::create_directories(dir.File("gt"));
  WriteImage(dir.File("gt") + "/other.pfm", Image(8, 4, Domain::kLinearHDR, 1.0));
  EXPECT_THROW(RunBenchmark(Job(dir.File("pred"), dir.File("gt"))), Error);
}

TEST(PairFiles, ManifestOverridesStems) {
  TempDir dir("bench-manifest");
  WriteSelfCorpus(dir.File("pred"), 2);
  WriteSelfCorpus(dir.File("gt"), 2);
  WriteText(dir.File("pairs.txt"), "# swapped\nm0.pfm m1.pfm\n");
  BenchmarkJob job = Job(dir.File("pred"), dir.File("gt"));
  job.manifest = dir.File("pairs.txt");
  const PairList list = PairFiles(job);
  ASSERT_EQ(list.pairs.size(), 1u);
  EXPECT_EQ(fs::path(list.pairs[0].gt_path).filename(), "m1.pfm");
}

TEST(EvaluatePair, ProvidedMaskPolicy) {
  const Image gt = testing::RenderPlantedLights(64, 32, {{120, 0, 3, 5.0}}, 0.5);
  LoadedPair pair{"x", gt, gt, std::nullopt};
  BenchmarkJob job;
  job.mask_policy = MaskPolicy::kProvided;
  job.projection_mask_count = 4;
  PairResult result;
  EXPECT_THROW(EvaluatePair(pair, job, result), Error);
  pair.known = BinaryMask(64, 32, true);
  const Image composite = EvaluatePair(pair, job, result);
  EXPECT_EQ(composite.values()[0], gt.values()[0]);
  EXPECT_EQ(*result.angular_error, 0.0);
  pair.known = BinaryMask(32, 16, true);
  EXPECT_THROW(EvaluatePair(pair, job, result), Error);
}

TEST(CenterCropKnownMask, ForwardRegionOnly) {
  const BinaryMask m = CenterCropKnownMask(256, 128);
  EXPECT_TRUE(m.at(128, 64));
  EXPECT_FALSE(m.at(0, 64));
  EXPECT_FALSE(m.at(128, 0));
  // A 90 degree square crop covers about a sixth of the sphere.
  const double fraction = m.CountSet() / (256.0 * 128.0);
  EXPECT_GT(fraction, 0.08);
  EXPECT_LT(fraction, 0.2);
}

}  // namespace
}  // namespace envbench
