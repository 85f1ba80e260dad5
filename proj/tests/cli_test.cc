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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "envbench/io.h"
#include "test_support.h"

namespace envbench {
namespace {

using testing::TempDir;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  RunResult Run(const std::string& args) {
    const std::string out = dir_.File("stdout.txt");
    const std::string err = dir_.File("stderr.txt");
    const std::string cmd = std::string(ENVBENCH_CLI_PATH) + " " + args + " > " +
                            out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  std::string File(const std::string& name) const { return dir_.File(name); }

  TempDir dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(Run("--help").exit_code, 0);
  EXPECT_EQ(Run("").exit_code, 2);
  EXPECT_EQ(Run("--bogus-flag archspec envmapnet").exit_code, 2);
  EXPECT_EQ(Run("archspec notanetwork").exit_code, 2);
  EXPECT_EQ(Run("--threads 0 archspec envmapnet").exit_code, 2);
  EXPECT_EQ(Run("--format yaml archspec envmapnet").exit_code, 2);
  EXPECT_EQ(Run("tonemap decode a.pfm b.pfm").exit_code, 2);  // --alpha required
}

TEST_F(CliTest, ProcessingFailuresExitOne) {
  const RunResult missing = Run("extract-lights " + File("nope.pfm"));
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.err.find("error:"), std::string::npos);
  std::ofstream(File("bad.pfm")) << "PF\n2 2\n-1\n";
  const RunResult bad = Run("extract-lights " + File("bad.pfm"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.err.find("byte"), std::string::npos);
}

TEST_F(CliTest, ExtractLightsJson) {
  WriteImage(File("map.pfm"), testing::RenderPlantedLights(128, 64, {{40, 20, 3, 2.0}}));
  const RunResult r = Run("extract-lights " + File("map.pfm") + " --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_NEAR(doc[0]["azimuth_deg"].get<double>(), 40.0, 3.0);
}

TEST_F(CliTest, SeedReproducibility) {
  Rng rng(1);
  WriteImage(File("a.pfm"), testing::RandomImage(64, 32, rng, 0.0, 1.0));
  WriteImage(File("b.pfm"), testing::RandomImage(64, 32, rng, 0.0, 1.0));
  const std::string args = "projection-loss " + File("a.pfm") + " " + File("b.pfm") +
                           " --masks 7";
  const RunResult one = Run("--seed 5 --format json " + args);
  ASSERT_EQ(one.exit_code, 0) << one.err;
  EXPECT_EQ(one.out, Run("--seed 5 --format json " + args).out);
  EXPECT_NE(one.out, Run("--seed 6 --format json " + args).out);

  const RunResult p1 = Run("--seed 3 prepare-input " + File("a.pfm") + " --out " + File("p1.pfm"));
  const RunResult p2 = Run("--seed 3 prepare-input " + File("a.pfm") + " --out " + File("p2.pfm"));
  ASSERT_EQ(p1.exit_code, 0) << p1.err;
  ASSERT_EQ(p2.exit_code, 0);
  EXPECT_EQ(Slurp(File("p1.pfm")), Slurp(File("p2.pfm")));
}

TEST_F(CliTest, TonemapRoundTrip) {
  WriteImage(File("hdr.pfm"), testing::BandLimitedMap(32, 16, 4));
  const RunResult enc = Run("--format json tonemap encode " + File("hdr.pfm") + " " + File("log.pfm"));
  ASSERT_EQ(enc.exit_code, 0) << enc.err;
  const double alpha = nlohmann::json::parse(enc.out)["alpha"].get<double>();
  std::ostringstream a;
  a.precision(17);
  a << alpha;
  const RunResult dec = Run("tonemap decode " + File("log.pfm") + " " + File("back.pfm") +
                            " --alpha " + a.str());
  ASSERT_EQ(dec.exit_code, 0) << dec.err;
  const Image orig = ReadImage(File("hdr.pfm"));
  const Image back = ReadImage(File("back.pfm"));
  for (std::size_t i = 0; i < orig.values().size(); ++i)
    EXPECT_NEAR(back.values()[i], orig.values()[i], 1e-4 * (1 + orig.values()[i]));
}

TEST_F(CliTest, ArchspecReportsBottleneckAndWarning) {
  const RunResult r = Run("--format json archspec envmapnet");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& l : doc["layers"])
    if (l["layer"] == "b15.conv1x1.conv1x1") {
      found = true;
      EXPECT_EQ(l["h"], 1);
      EXPECT_EQ(l["w"], 2);
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(doc["warnings"].size(), 1u);
  EXPECT_NE(r.err.find("warning:"), std::string::npos);
}

TEST_F(CliTest, ClusterFitAndAssign) {
  const std::string maps = File("maps");
  std::filesystem::create_directories(maps);
  for (int i = 0; i < 6; ++i)
    WriteImage(maps + "/m" + std::to_string(i) + ".pfm", testing::BandLimitedMap(64, 32, i % 2));
  const RunResult fit = Run("--format json cluster fit " + maps + " --k 2 --out " + File("model.bin"));
  ASSERT_EQ(fit.exit_code, 0) << fit.err;
  const auto fitted = nlohmann::json::parse(fit.out);
  EXPECT_EQ(fitted[0]["cluster"], fitted[2]["cluster"]);
  EXPECT_NE(fitted[0]["cluster"], fitted[1]["cluster"]);
  const RunResult assign =
      Run("--format json cluster assign " + File("model.bin") + " " + maps + "/m3.pfm");
  ASSERT_EQ(assign.exit_code, 0) << assign.err;
  EXPECT_EQ(nlohmann::json::parse(assign.out)[0]["cluster"], fitted[1]["cluster"]);
}

TEST_F(CliTest, BenchmarkThreadsAndFailures) {
  testing::WriteShiftedLightCorpus(File("pred"), File("gt"), 4, 10.0, 3, 128);
  const std::string base = "benchmark --pred " + File("pred") + " --gt " + File("gt") +
                           " --projection-masks 8 --mask-policy generated --out ";
  const RunResult one = Run("--seed 9 --threads 1 " + base + File("r1.json"));
  ASSERT_EQ(one.exit_code, 0) << one.err;
  ASSERT_EQ(Run("--seed 9 --threads 8 " + base + File("r8.json")).exit_code, 0);
  EXPECT_EQ(Slurp(File("r1.json")), Slurp(File("r8.json")));
  const auto doc = nlohmann::json::parse(Slurp(File("r1.json")));
  EXPECT_EQ(doc["report_version"], 1);
  EXPECT_EQ(doc["aggregate"]["pairs"], 4);

  ASSERT_EQ(Run("--seed 9 " + base + File("r.csv")).exit_code, 0);
  EXPECT_EQ(Slurp(File("r.csv")).rfind("id,pred,gt,", 0), 0u);

  std::ofstream(File("gt") + "/pair_01.pfm", std::ios::trunc) << "garbage";
  const RunResult failed = Run(base + File("r2.json"));
  EXPECT_EQ(failed.exit_code, 1);
  EXPECT_EQ(nlohmann::json::parse(Slurp(File("r2.json")))["aggregate"]["failed"], 1);

  std::filesystem::create_directories(File("empty"));
  EXPECT_EQ(Run("benchmark --pred " + File("pred") + " --gt " + File("empty") + " --out " +
                File("r3.json"))
                .exit_code,
            1);
}

}  // namespace
}  // namespace envbench
