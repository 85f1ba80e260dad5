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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "envbench/geometry.h"
#include "envbench/io.h"
#include "envbench/losses.h"
#include "envbench/masks.h"
#include "envbench/metrics.h"
#include "envbench/random.h"
#include "envbench/tonemap.h"

namespace envbench {

namespace fs = std::filesystem;

namespace {

constexpr double kCenterCropFovDeg = 90.0;
constexpr int kGeneratedMaskRegions = 2;

bool SupportedImage(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".pfm" || ext == ".hdr" || ext == ".png";
}

std::map<std::string, std::string> ListByStem(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !SupportedImage(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    const std::string name = entry.path().filename().string();
    auto [it, inserted] = out.emplace(stem, name);
    if (!inserted) {
      // Keep the listing independent of directory order.
      throw Error("ambiguous files for id '" + stem + "' in " + dir + ": " +
                  std::min(it->second, name) + ", " +
                  std::max(it->second, name));
    }
  }
  return out;
}

std::string Join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

std::optional<double> Mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string OptNum(const std::optional<double>& x) {
  return x ? Num(*x) : std::string();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json OptJson(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

const char* MaskPolicyName(MaskPolicy policy) {
  switch (policy) {
    case MaskPolicy::kCenterCrop:
      return "center_crop";
    case MaskPolicy::kProvided:
      return "provided";
    case MaskPolicy::kGenerated:
      return "generated";
  }
  return "unknown";
}

PairList PairFiles(const BenchmarkJob& job) {
  PairList list;
  if (!job.manifest.empty()) {
    std::ifstream in(job.manifest);
    if (!in) throw Error("cannot open manifest " + job.manifest);
    std::string line;
    int line_no = 0;
    std::map<std::string, ImagePair> by_id;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ls(line);
      std::string pred, gt, extra;
      if (!(ls >> pred) || pred[0] == '#') continue;
      if (!(ls >> gt) || (ls >> extra)) {
        throw Error(job.manifest + ":" + std::to_string(line_no) +
                    ": expected '<pred file> <gt file>'");
      }
      const std::string id = fs::path(pred).stem().string();
      ImagePair p{id, Join(job.pred_dir, pred), Join(job.gt_dir, gt)};
      if (!by_id.emplace(id, p).second) {
        throw Error(job.manifest + ":" + std::to_string(line_no) +
                    ": duplicate id '" + id + "'");
      }
    }
    for (auto& [id, p] : by_id) list.pairs.push_back(p);
    return list;
  }
  const auto pred = ListByStem(job.pred_dir);
  const auto gt = ListByStem(job.gt_dir);
  for (const auto& [stem, name] : pred) {
    auto it = gt.find(stem);
    if (it == gt.end()) {
      list.unpaired.push_back("pred/" + name);
    } else {
      list.pairs.push_back(
          {stem, Join(job.pred_dir, name), Join(job.gt_dir, it->second)});
    }
  }
  for (const auto& [stem, name] : gt) {
    if (!pred.count(stem)) list.unpaired.push_back("gt/" + name);
  }
  return list;
}

BinaryMask CenterCropKnownMask(int width, int height) {
  const int side = std::max(2, width / 4);
  const CameraPose pose{0.0, 0.0, kCenterCropFovDeg};
  const Image ones(side, side, Domain::kLinearHDR, 1.0);
  return ProjectCropToEnvmap(ones, pose, width, height).known;
}

Image EvaluatePair(const LoadedPair& pair, const BenchmarkJob& job,
                   PairResult& result) {
  const Image& gt = pair.gt;
  if (!pair.pred.SameSize(gt)) {
    throw Error("prediction is " + std::to_string(pair.pred.width()) + "x" +
                std::to_string(pair.pred.height()) + ", ground truth is " +
                std::to_string(gt.width()) + "x" +
                std::to_string(gt.height()));
  }
  if (!gt.IsCanonical()) throw Error("maps must be equirectangular (W = 2H)");
  gt.Validate();
  pair.pred.Validate();
  const int w = gt.width();
  const int h = gt.height();

  BinaryMask known;
  switch (job.mask_policy) {
    case MaskPolicy::kCenterCrop:
      known = CenterCropKnownMask(w, h);
      break;
    case MaskPolicy::kProvided:
      if (!pair.known) throw Error("no mask provided");
      if (!pair.known->SameSize(gt)) throw Error("mask dimensions differ");
      known = *pair.known;
      break;
    case MaskPolicy::kGenerated:
      known = GenOcclusionMask(w, h, DeriveSeed(job.seed, "mask/" + pair.id),
                               kGeneratedMaskRegions)
                  .unknown.Inverted();
      break;
  }

  const Image scaled = ExposureMatch(pair.pred, gt, known);
  const Image composite = OverlayKnown(scaled, gt, known);

  if (job.metrics.angular_error) {
    const LightSet gt_lights = ExtractLights(gt, job.extraction);
    const LightSet pred_lights = ExtractLights(composite, job.extraction);
    result.gt_lights = static_cast<int>(gt_lights.lights.size());
    result.pred_lights = static_cast<int>(pred_lights.lights.size());
    result.angular_error = AngularError(gt_lights, pred_lights);
  }
  if (job.metrics.projection_loss || job.metrics.ssim || job.metrics.mse) {
    const LogEncoded gt_log = LogEncode(gt);
    if (gt_log.degenerate) throw Error("ground truth has no radiance");
    const Image comp_log = LogEncodeWithAlpha(composite, gt_log.alpha);
    if (job.metrics.projection_loss) {
      // Same seed for every pair: one mask set shared across the benchmark.
      const ProjectionMaskSet masks =
          GenProjectionMasks(w, h, job.projection_mask_count,
                             DeriveSeed(job.seed, "projection-masks"));
      result.projection_loss = ProjectionLoss(comp_log, gt_log.map, masks,
                                              SolidAngleWeights(w, h));
    }
    if (job.metrics.ssim) result.ssim = Ssim(comp_log, gt_log.map, kLogDataRange);
    if (job.metrics.mse) result.mse = Mse(comp_log, gt_log.map);
  }
  return composite;
}

MetricReport RunBenchmark(const BenchmarkJob& job) {
  if (job.threads < 1) throw Error("thread count must be >= 1");
  if (job.projection_mask_count < 1) {
    throw Error("projection mask count must be >= 1");
  }
  PairList list = PairFiles(job);
  if (list.pairs.empty()) {
    std::string msg = "no matched image pairs";
    if (!list.unpaired.empty()) msg += " (" + std::to_string(list.unpaired.size()) + " unpaired files)";
    throw Error(msg);
  }

  const std::size_t n = list.pairs.size();
  std::vector<PairResult> results(n);
  std::vector<Eigen::VectorXd> gt_features(n);
  std::vector<Eigen::VectorXd> comp_features(n);
  const PatchStatsExtractor extractor;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      const ImagePair& p = list.pairs[i];
      PairResult& r = results[i];
      r.id = p.id;
      r.pred_file = fs::path(p.pred_path).filename().string();
      r.gt_file = fs::path(p.gt_path).filename().string();
      try {
        LoadedPair loaded{p.id, ReadImage(p.pred_path), ReadImage(p.gt_path),
                          std::nullopt};
        loaded.pred.set_domain(Domain::kLinearHDR);
        loaded.gt.set_domain(Domain::kLinearHDR);
        if (job.mask_policy == MaskPolicy::kProvided) {
          loaded.known = ReadMask(Join(job.mask_dir, p.id + ".png"));
        }
        const Image composite = EvaluatePair(loaded, job, r);
        if (job.metrics.fid) {
          comp_features[i] = extractor.Extract(composite);
          gt_features[i] = extractor.Extract(loaded.gt);
        }
      } catch (const std::exception& e) {
        PairResult failed;
        failed.id = r.id;
        failed.pred_file = r.pred_file;
        failed.gt_file = r.gt_file;
        failed.error = e.what();
        r = std::move(failed);
      }
    }
  };
  const int threads = std::min<int>(job.threads, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  MetricReport report;
  report.seed = job.seed;
  report.mask_policy = job.mask_policy;
  report.projection_mask_count = job.projection_mask_count;
  report.metrics = job.metrics;
  report.unpaired = std::move(list.unpaired);
  std::vector<double> ang, proj, ssim, mse;
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < n; ++i) {
    const PairResult& r = results[i];
    if (r.error) {
      ++report.failed;
      continue;
    }
    ok.push_back(i);
    if (r.angular_error) ang.push_back(*r.angular_error);
    if (r.projection_loss) proj.push_back(*r.projection_loss);
    if (r.ssim) ssim.push_back(*r.ssim);
    if (r.mse) mse.push_back(*r.mse);
  }
  report.angular_error_mean = Mean(ang);
  if (report.angular_error_mean) {
    double var = 0.0;
    for (double x : ang) var += std::pow(x - *report.angular_error_mean, 2);
    report.angular_error_std = std::sqrt(var / static_cast<double>(ang.size()));
  }
  report.projection_loss_mean = Mean(proj);
  report.ssim_mean = Mean(ssim);
  report.mse_mean = Mean(mse);
  if (job.metrics.fid) {
    report.fid_extractor = extractor.name();
    if (ok.size() >= 2) {
      FeatureSet a, b;
      a.features.resize(static_cast<Eigen::Index>(ok.size()), extractor.dimension());
      b.features.resizeLike(a.features);
      for (std::size_t j = 0; j < ok.size(); ++j) {
        a.features.row(static_cast<Eigen::Index>(j)) = gt_features[ok[j]].transpose();
        b.features.row(static_cast<Eigen::Index>(j)) = comp_features[ok[j]].transpose();
      }
      report.fid = FidFromFeatures(a, b);
    }
  }
  report.pairs = std::move(results);
  return report;
}

std::string ReportToJson(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["report_version"] = report.report_version;
  j["seed"] = report.seed;
  j["mask_policy"] = MaskPolicyName(report.mask_policy);
  j["projection_mask_count"] = report.projection_mask_count;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const PairResult& r : report.pairs) {
    nlohmann::ordered_json p;
    p["id"] = r.id;
    p["pred"] = r.pred_file;
    p["gt"] = r.gt_file;
    if (r.error) {
      p["error"] = *r.error;
    } else {
      if (report.metrics.angular_error) {
        p["angular_error"] = OptJson(r.angular_error);
        p["gt_lights"] = r.gt_lights;
        p["pred_lights"] = r.pred_lights;
      }
      if (report.metrics.projection_loss) {
        p["projection_loss"] = OptJson(r.projection_loss);
      }
      if (report.metrics.ssim) p["ssim"] = OptJson(r.ssim);
      if (report.metrics.mse) p["mse"] = OptJson(r.mse);
    }
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);
  j["unpaired"] = report.unpaired;
  nlohmann::ordered_json agg;
  agg["pairs"] = report.pairs.size();
  agg["failed"] = report.failed;
  agg["angular_error_mean"] = OptJson(report.angular_error_mean);
  agg["angular_error_std"] = OptJson(report.angular_error_std);
  agg["projection_loss_mean"] = OptJson(report.projection_loss_mean);
  agg["ssim_mean"] = OptJson(report.ssim_mean);
  agg["mse_mean"] = OptJson(report.mse_mean);
  agg["fid"] = OptJson(report.fid);
  agg["fid_extractor"] = report.fid_extractor;
  j["aggregate"] = std::move(agg);
  return j.dump(2) + "\n";
}

std::string ReportToCsv(const MetricReport& report) {
  std::ostringstream out;
  out << "id,pred,gt,angular_error,gt_lights,pred_lights,projection_loss,ssim,"
         "mse,error\n";
  for (const PairResult& r : report.pairs) {
    out << CsvField(r.id) << ',' << CsvField(r.pred_file) << ','
        << CsvField(r.gt_file) << ',' << OptNum(r.angular_error) << ',';
    if (r.angular_error) {
      out << r.gt_lights << ',' << r.pred_lights;
    } else {
      out << ',';
    }
    out << ',' << OptNum(r.projection_loss) << ',' << OptNum(r.ssim) << ','
        << OptNum(r.mse) << ',' << CsvField(r.error.value_or("")) << '\n';
  }
  return out.str();
}

std::string ReportToText(const MetricReport& report) {
  std::ostringstream out;
  char line[256];
  for (const PairResult& r : report.pairs) {
    if (r.error) {
      out << r.id << ": error: " << *r.error << '\n';
      continue;
    }
    out << r.id << ':';
    if (r.angular_error) {
      std::snprintf(line, sizeof(line), " angular %.4f deg (%d/%d lights)",
                    *r.angular_error, r.gt_lights, r.pred_lights);
      out << line;
    }
    if (r.projection_loss) {
      std::snprintf(line, sizeof(line), " projection %.6g", *r.projection_loss);
      out << line;
    }
    if (r.ssim) {
      std::snprintf(line, sizeof(line), " ssim %.6f", *r.ssim);
      out << line;
    }
    if (r.mse) {
      std::snprintf(line, sizeof(line), " mse %.6g", *r.mse);
      out << line;
    }
    out << '\n';
  }
  for (const auto& u : report.unpaired) out << "unpaired: " << u << '\n';
  out << "pairs: " << report.pairs.size() << " (failed " << report.failed
      << ")\n";
  if (report.angular_error_mean) {
    std::snprintf(line, sizeof(line), "angular error: %.4f +- %.4f deg\n",
                  *report.angular_error_mean, *report.angular_error_std);
    out << line;
  }
  if (report.fid) {
    std::snprintf(line, sizeof(line), "fid (%s): %.6g\n",
                  report.fid_extractor.c_str(), *report.fid);
    out << line;
  }
  return out.str();
}

}  // namespace envbench
