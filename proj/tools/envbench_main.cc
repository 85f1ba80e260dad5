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

// envbench command-line front end.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "envbench/archspec.h"
#include "envbench/benchmark.h"
#include "envbench/clusters.h"
#include "envbench/geometry.h"
#include "envbench/io.h"
#include "envbench/lights.h"
#include "envbench/losses.h"
#include "envbench/masks.h"
#include "envbench/metrics.h"
#include "envbench/tonemap.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace envbench {
namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kPrepareMaskRegions = 2;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "text";
};

double Deg(double rad) { return rad * 180.0 / std::numbers::pi; }

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string CellText(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return Num(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

// Prints a list of flat records in the selected format.
void Emit(const std::vector<json>& records, const std::string& format,
          bool as_list) {
  if (format == "json") {
    if (!as_list && records.size() == 1) {
      std::cout << records[0].dump(2) << "\n";
    } else {
      std::cout << json(records).dump(2) << "\n";
    }
    return;
  }
  if (format == "csv") {
    if (records.empty()) return;
    bool first = true;
    for (const auto& [k, v] : records[0].items()) {
      std::cout << (first ? "" : ",") << k;
      first = false;
    }
    std::cout << "\n";
    for (const json& r : records) {
      first = true;
      for (const auto& [k, v] : r.items()) {
        std::cout << (first ? "" : ",") << CellText(v);
        first = false;
      }
      std::cout << "\n";
    }
    return;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) std::cout << "\n";
    for (const auto& [k, v] : records[i].items()) {
      std::cout << k << ": " << CellText(v) << "\n";
    }
  }
}

json LightRecord(int index, const ParametricLight& l) {
  json r;
  r["index"] = index;
  r["azimuth_deg"] = Deg(l.direction.Azimuth());
  r["elevation_deg"] = Deg(l.direction.Elevation());
  r["peak"] = l.peak_intensity;
  r["pixels"] = l.region_pixel_count;
  r["solid_angle_sr"] = l.solid_angle;
  r["center_u"] = l.ellipse.center_u;
  r["center_v"] = l.ellipse.center_v;
  r["axis_a"] = l.ellipse.a;
  r["axis_b"] = l.ellipse.b;
  r["angle"] = l.ellipse.angle;
  r["degenerate"] = l.degenerate;
  return r;
}

std::vector<std::string> ListImages(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pfm" || ext == ".hdr" || ext == ".png") {
      out.push_back(e.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Image> LoadAll(const std::vector<std::string>& paths) {
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(ReadImage(p));
  return images;
}

int Run(int argc, char** argv) {
  CLI::App app{"Environment map benchmarking and loss toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Global random seed");
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::Range(1, 1024));
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  // extract-lights
  auto* extract = app.add_subcommand("extract-lights",
                                     "Fit parametric lights to an HDR map");
  std::string extract_map;
  ExtractionOptions extract_opts;
  bool extract_json = false;
  extract->add_option("map", extract_map)->required();
  extract->add_option("--max", extract_opts.max_lights, "Maximum lights")
      ->check(CLI::Range(0, 1000));
  extract->add_option("--region-fraction", extract_opts.region_fraction,
                      "Region growing threshold relative to the seed peak");
  extract->add_option("--stop-fraction", extract_opts.stop_fraction,
                      "Stop when a peak is below this fraction of the largest");
  extract->add_flag("--json", extract_json, "Same as --format json");

  // angular-error
  auto* angular = app.add_subcommand("angular-error",
                                     "Angular error between two maps' lights");
  std::string ang_gt, ang_pred;
  ExtractionOptions ang_opts;
  angular->add_option("gt", ang_gt)->required();
  angular->add_option("pred", ang_pred)->required();
  angular->add_option("--max", ang_opts.max_lights)->check(CLI::Range(1, 1000));
  angular->add_option("--stop-fraction", ang_opts.stop_fraction);

  // projection-loss
  auto* proj = app.add_subcommand("projection-loss",
                                  "Masked-integral L1 between two maps");
  std::string proj_a, proj_b;
  int proj_masks = kDefaultProjectionMaskCount;
  bool proj_log = false;
  proj->add_option("a", proj_a)->required();
  proj->add_option("b", proj_b)->required();
  proj->add_option("--masks", proj_masks, "Number of random masks")
      ->check(CLI::Range(1, 100000));
  proj->add_flag("--log", proj_log,
                 "Log-encode both maps with the second map's alpha first");

  // prepare-input
  auto* prep = app.add_subcommand("prepare-input",
                                  "Build the 4-channel network input");
  std::string prep_map, prep_mask, prep_out, prep_mask_out;
  prep->add_option("map", prep_map)->required();
  prep->add_option("--mask", prep_mask, "Known-region PNG (white = known)");
  prep->add_option("--out", prep_out, "Output PFM with the RGB channels")
      ->required();
  prep->add_option("--mask-out", prep_mask_out,
                   "Output PNG of the known region");

  // tonemap
  auto* tonemap = app.add_subcommand("tonemap", "Log encoding");
  tonemap->require_subcommand(1);
  auto* encode = tonemap->add_subcommand("encode", "Linear HDR to log domain");
  std::string enc_in, enc_out;
  double enc_alpha = 0.0;
  encode->add_option("input", enc_in)->required();
  encode->add_option("output", enc_out)->required();
  encode->add_option("--alpha", enc_alpha, "Fixed alpha instead of 0.2 x mean");
  auto* decode = tonemap->add_subcommand("decode", "Log domain to linear HDR");
  std::string dec_in, dec_out;
  double dec_alpha = 0.0;
  decode->add_option("input", dec_in)->required();
  decode->add_option("output", dec_out)->required();
  decode->add_option("--alpha", dec_alpha)->required();

  // crop
  auto* crop = app.add_subcommand("crop", "Perspective crop of a panorama");
  std::string crop_map, crop_out;
  CameraPose pose;
  int crop_w = 256;
  int crop_h = 256;
  crop->add_option("map", crop_map)->required();
  crop->add_option("--yaw", pose.yaw_deg, "Degrees");
  crop->add_option("--pitch", pose.pitch_deg, "Degrees");
  crop->add_option("--fov", pose.fov_h_deg, "Horizontal field of view");
  crop->add_option("--width", crop_w)->check(CLI::Range(1, kMaxImageDimension));
  crop->add_option("--height", crop_h)->check(CLI::Range(1, kMaxImageDimension));
  crop->add_option("--out", crop_out)->required();

  // fid
  auto* fid = app.add_subcommand("fid", "FID between two image directories");
  std::string fid_a, fid_b;
  fid->add_option("dir_a", fid_a)->required();
  fid->add_option("dir_b", fid_b)->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Appearance clusters");
  cluster->require_subcommand(1);
  auto* fit = cluster->add_subcommand("fit", "K-means over a directory");
  std::string fit_dir, fit_out;
  int fit_k = kDefaultClusterCount;
  int fit_iter = 100;
  fit->add_option("dir", fit_dir)->required();
  fit->add_option("--k", fit_k)->check(CLI::Range(1, 100000));
  fit->add_option("--max-iter", fit_iter)->check(CLI::Range(1, 1000000));
  fit->add_option("--out", fit_out)->required();
  auto* assign = cluster->add_subcommand("assign", "Nearest cluster per image");
  std::string assign_model;
  std::vector<std::string> assign_images;
  assign->add_option("model", assign_model)->required();
  assign->add_option("images", assign_images)->required();

  // archspec
  auto* arch = app.add_subcommand("archspec", "Shape and parameter audit");
  std::string arch_net;
  int arch_clusters = kDefaultClusterCount;
  arch->add_option("network", arch_net)
      ->required()
      ->check(CLI::IsMember({"envmapnet", "discriminator"}));
  arch->add_option("--clusters", arch_clusters)->check(CLI::Range(1, 100000));

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Score predictions");
  BenchmarkJob job;
  std::string policy = "center";
  bool no_fid = false, no_angular = false, no_proj = false, no_ssim = false,
       no_mse = false;
  bench->add_option("--pred", job.pred_dir, "Directory of predicted maps")->required();
  bench->add_option("--gt", job.gt_dir, "Directory of ground-truth maps")->required();
  bench->add_option("--out", job.output_path, "Report path (.json or .csv)")
      ->required();
  bench->add_option("--manifest", job.manifest, "Explicit pairing file");
  bench->add_option("--mask-policy", policy)
      ->check(CLI::IsMember({"center", "provided", "generated"}));
  bench->add_option("--mask-dir", job.mask_dir, "Masks named <id>.png");
  bench->add_option("--projection-masks", job.projection_mask_count)
      ->check(CLI::Range(1, 100000));
  bench->add_option("--stop-fraction", job.extraction.stop_fraction,
                    "Light extraction stop fraction");
  bench->add_flag("--no-fid", no_fid, "Skip FID");
  bench->add_flag("--no-angular", no_angular, "Skip angular error");
  bench->add_flag("--no-projection", no_proj, "Skip projection loss");
  bench->add_flag("--no-ssim", no_ssim, "Skip SSIM");
  bench->add_flag("--no-mse", no_mse, "Skip MSE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*extract) {
      const std::string format = extract_json ? "json" : g.format;
      const LightSet set = ExtractLights(ReadImage(extract_map), extract_opts);
      std::vector<json> records;
      for (std::size_t i = 0; i < set.lights.size(); ++i) {
        records.push_back(LightRecord(static_cast<int>(i), set.lights[i]));
      }
      Emit(records, format, true);
    } else if (*angular) {
      const LightSet a = ExtractLights(ReadImage(ang_gt), ang_opts);
      const LightSet b = ExtractLights(ReadImage(ang_pred), ang_opts);
      json r;
      r["angular_error_deg"] = AngularError(a, b);
      r["gt_lights"] = a.lights.size();
      r["pred_lights"] = b.lights.size();
      Emit({r}, g.format, false);
    } else if (*proj) {
      Image a = ReadImage(proj_a);
      Image b = ReadImage(proj_b);
      if (!a.SameSize(b)) throw Error("image dimensions differ");
      if (proj_log) {
        const LogEncoded gb = LogEncode(b);
        if (gb.degenerate) throw Error("second map has no radiance");
        a = LogEncodeWithAlpha(a, gb.alpha);
        b = gb.map;
      }
      const auto masks =
          GenProjectionMasks(a.width(), a.height(), proj_masks, g.seed);
      json r;
      r["projection_loss"] = ProjectionLoss(
          a, b, masks, SolidAngleWeights(a.width(), a.height()));
      r["masks"] = proj_masks;
      r["seed"] = g.seed;
      Emit({r}, g.format, false);
    } else if (*prep) {
      const Image map = ReadImage(prep_map);
      const BinaryMask known =
          prep_mask.empty()
              ? GenOcclusionMask(map.width(), map.height(), g.seed,
                                 kPrepareMaskRegions)
                    .unknown.Inverted()
              : ReadMask(prep_mask);
      if (!known.SameSize(map)) throw Error("mask dimensions differ");
      Image partial = map;
      for (int v = 0; v < map.height(); ++v)
        for (int u = 0; u < map.width(); ++u)
          if (!known.at(u, v))
            for (int c = 0; c < 3; ++c) partial.at(u, v, c) = 0.0;
      const NetworkInput input = PrepareNetworkInput(partial, known, g.seed);
      WriteImage(prep_out, input.Rgb());
      if (!prep_mask_out.empty()) WriteMask(prep_mask_out, input.Known());
      json r;
      r["width"] = map.width();
      r["height"] = map.height();
      r["known_pixels"] = known.CountSet();
      r["seed"] = g.seed;
      Emit({r}, g.format, false);
    } else if (*encode) {
      const Image in = ReadImage(enc_in);
      json r;
      if (enc_alpha > 0.0) {
        WriteImage(enc_out, LogEncodeWithAlpha(in, enc_alpha));
        r["alpha"] = enc_alpha;
      } else {
        const LogEncoded e = LogEncode(in);
        WriteImage(enc_out, e.map);
        r["alpha"] = e.alpha;
        r["degenerate"] = e.degenerate;
      }
      Emit({r}, g.format, false);
    } else if (*decode) {
      WriteImage(dec_out, LogDecode(ReadImage(dec_in, Domain::kLog), dec_alpha));
    } else if (*crop) {
      pose.Validate();
      WriteImage(crop_out, CropFov(ReadImage(crop_map), pose, crop_w, crop_h));
    } else if (*fid) {
      const auto a = LoadAll(ListImages(fid_a));
      const auto b = LoadAll(ListImages(fid_b));
      const PatchStatsExtractor extractor;
      json r;
      r["fid"] = Fid(a, b, extractor);
      r["extractor"] = extractor.name();
      r["n_a"] = a.size();
      r["n_b"] = b.size();
      Emit({r}, g.format, false);
    } else if (*fit) {
      const auto paths = ListImages(fit_dir);
      if (paths.empty()) throw Error("no images in " + fit_dir);
      const FeatureConfig config;
      Eigen::MatrixXd features(static_cast<Eigen::Index>(paths.size()),
                               config.Dimension());
      for (std::size_t i = 0; i < paths.size(); ++i) {
        features.row(static_cast<Eigen::Index>(i)) =
            ImageFeature(ReadImage(paths[i]), config).transpose();
      }
      const KMeansResult res =
          KMeansFit(features, fit_k, g.seed, fit_iter, config);
      SaveClusterModel(fit_out, res.model);
      std::vector<json> records;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        json r;
        r["image"] = fs::path(paths[i]).filename().string();
        r["cluster"] = res.assignments[i];
        records.push_back(r);
      }
      if (g.format != "csv") {
        std::cerr << "k-means: " << res.iterations << " iterations, "
                  << (res.converged ? "converged" : "not converged")
                  << ", inertia " << Num(res.inertia_history.back()) << "\n";
      }
      Emit(records, g.format, true);
    } else if (*assign) {
      const ClusterModel model = LoadClusterModel(assign_model);
      std::vector<json> records;
      for (const auto& p : assign_images) {
        json r;
        r["image"] = p;
        r["cluster"] = AssignCluster(ReadImage(p), model, FeatureConfig{});
        records.push_back(r);
      }
      Emit(records, g.format, true);
    } else if (*arch) {
      const BuiltinNetworks nets = BuiltinConfigs(arch_clusters);
      const NetworkConfig& net =
          arch_net == "envmapnet" ? nets.envmapnet : nets.discriminator;
      const ShapeTrace trace = Propagate(net);
      for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
      if (g.format == "text") {
        std::cout << FormatTraceTable(trace);
      } else {
        std::vector<json> records;
        for (const auto& l : trace.layers) {
          json r;
          r["layer"] = l.name;
          r["h"] = l.output.h;
          r["w"] = l.output.w;
          r["c"] = l.output.c;
          r["params"] = l.params;
          records.push_back(r);
        }
        if (g.format == "json") {
          json doc;
          doc["network"] = net.name;
          doc["layers"] = records;
          doc["output"] = {trace.output.h, trace.output.w, trace.output.c};
          doc["total_params"] = trace.total_params;
          doc["warnings"] = trace.warnings;
          std::cout << doc.dump(2) << "\n";
        } else {
          Emit(records, g.format, true);
        }
      }
    } else if (*bench) {
      job.seed = g.seed;
      job.threads = g.threads;
      job.mask_policy = policy == "center"      ? MaskPolicy::kCenterCrop
                        : policy == "provided" ? MaskPolicy::kProvided
                                               : MaskPolicy::kGenerated;
      if (job.mask_policy == MaskPolicy::kProvided && job.mask_dir.empty()) {
        throw Error("--mask-policy provided needs --mask-dir");
      }
      job.metrics = {!no_angular, !no_proj, !no_ssim, !no_mse, !no_fid};
      const MetricReport report = RunBenchmark(job);
      for (const auto& u : report.unpaired) {
        std::cerr << "skipped unpaired file: " << u << "\n";
      }
      std::string ext = fs::path(job.output_path).extension().string();
      const std::string body =
          ext == ".csv" ? ReportToCsv(report) : ReportToJson(report);
      std::ofstream out(job.output_path, std::ios::binary);
      if (!out) throw Error("cannot write " + job.output_path);
      out << body;
      if (!out) throw Error("failed writing " + job.output_path);
      if (g.format == "json") {
        std::cout << ReportToJson(report);
      } else if (g.format == "csv") {
        std::cout << ReportToCsv(report);
      } else {
        std::cout << ReportToText(report);
      }
      if (report.failed > 0) {
        std::cerr << "error: " << report.failed << " pair(s) failed\n";
        return kExitFailure;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}

}  // namespace
}  // namespace envbench

int main(int argc, char** argv) { return envbench::Run(argc, argv); }
