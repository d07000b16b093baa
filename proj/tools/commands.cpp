// Copyright 2026 The natstego Authors
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

#include "commands.hpp"

#include <glob.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "natstego/errors.hpp"
#include "natstego/noise_model.hpp"
#include "natstego/pipeline.hpp"
#include "natstego/prob_io.hpp"
#include "natstego/raster.hpp"
#include "natstego/stats.hpp"
#include "natstego/stego.hpp"

namespace natstego::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> expand(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& p : patterns) {
    if (p.find_first_of("*?[") == std::string::npos) {
      out.push_back(p);
      continue;
    }
    glob_t g{};
    const int rc = ::glob(p.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0) throw IoError("no file matches '" + p + "'");
  }
  return out;
}

std::vector<Raster16> read_all(const std::vector<std::string>& paths) {
  std::vector<Raster16> out;
  for (const std::string& p : paths) out.push_back(read_raster(p));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

DevelopPlan resolve_plan(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return load_plan(arg);
  return parse_plan(arg);
}

StegoParams resolve_params(const std::string& path, bool wet_dark) {
  StegoParams p = load_stego_params(path);
  if (wet_dark) p.wet_dark = true;
  return p;
}

bool needs_seed(const DevelopPlan& plan) {
  const Route r = route_plan(plan).route;
  return r == Route::Tent || r == Route::Color;
}

json params_json(const StegoParams& p) {
  return {{"a_dd", p.a_dd},
          {"b_dd", p.b_dd},
          {"bit_depth", p.bit_depth_in},
          {"perturbation", p.perturbation},
          {"wet_dark", p.wet_dark}};
}

json opt_seed(const std::optional<std::uint64_t>& s) { return s ? json(*s) : json(nullptr); }

Raster16 round_latent(const ImageD& latent, const StegoParams& p) {
  Raster16 r(latent.width, latent.height, latent.channels, p.bit_depth_in);
  const double top = p.input_max();
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    r.samples[i] = static_cast<std::uint16_t>(std::clamp(std::nearbyint(latent.samples[i]), 0.0, top));
  }
  return r;
}

}  // namespace

json run_estimate(const EstimateOpts& o, bool print_only) {
  const std::vector<std::string> files = expand(o.stack);
  json cfg = {{"command", "estimate-noise"}, {"stack", files}, {"delta", o.delta}, {"iso", o.iso}, {"out", o.out}};
  if (print_only) return cfg;
  const std::vector<BinStats> bins = bin_photosites(read_all(files), o.delta);
  const NoiseModel m = fit_noise_model(bins, o.iso);
  save_noise_model(m, o.out);
  std::cout << format_noise_model(m) << "bins=" << bins.size() << '\n';
  return {};
}

json run_diff(const DiffOpts& o, bool print_only) {
  json cfg = {{"command", "diff-model"}, {"model1", o.model1}, {"model2", o.model2}, {"bit_depth", o.bit_depth},
              {"out", o.out}};
  if (print_only) return cfg;
  const StegoParams p = diff_model(load_noise_model(o.model1), load_noise_model(o.model2), o.bit_depth);
  save_stego_params(p, o.out);
  std::cout << format_stego_params(p);
  return {};
}

json run_perturb(const PerturbOpts& o, bool print_only) {
  json cfg = {{"command", "perturb-params"}, {"a", o.a}, {"bit_depth", o.bit_depth}, {"out", o.out}};
  if (print_only) return cfg;
  const StegoParams p = perturbation_params(o.a, o.bit_depth);
  save_stego_params(p, o.out);
  std::cout << format_stego_params(p);
  return {};
}

json run_embed(const EmbedOpts& o, bool print_only) {
  const StegoParams p = resolve_params(o.params, o.wet_dark);
  const DevelopPlan plan = resolve_plan(o.plan);
  json cfg = {{"command", "embed"},         {"cover", o.cover},         {"params", params_json(p)},
              {"plan", plan.to_recipe()},  {"seed", opt_seed(o.seed)}, {"K", o.K},
              {"out", o.out},              {"out_probs", o.out_probs}, {"out_costs", o.out_costs},
              {"out_raw", o.out_raw}};
  if (print_only) return cfg;
  if (!o.seed) throw UsageError("embed requires --seed");
  const EmbedResult r = run_embedding(read_raster(o.cover), p, plan, *o.seed, o.K);
  write_raster(r.stego, o.out);
  if (!o.out_probs.empty()) save_prob_map(r.probs, o.out_probs);
  if (!o.out_costs.empty()) save_cost_map(probs_to_costs(r.probs), o.out_costs);
  if (!o.out_raw.empty()) write_raster(round_latent(r.latent, p), o.out_raw);
  std::cout << "route=" << to_string(r.route) << '\n'
            << "width=" << r.stego.width << '\n'
            << "height=" << r.stego.height << '\n'
            << "payload_bits=" << r.payload.bits << '\n'
            << "bpp=" << r.payload.bpp << '\n'
            << "support=" << r.probs.support() << '\n'
            << "fallbacks=" << r.fallbacks << '\n';
  return {};
}

json run_payload(const PayloadOpts& o, bool print_only) {
  const StegoParams p = resolve_params(o.params, o.wet_dark);
  const DevelopPlan plan = resolve_plan(o.plan);
  json cfg = {{"command", "payload"}, {"cover", o.cover}, {"params", params_json(p)}, {"plan", plan.to_recipe()},
              {"seed", opt_seed(o.seed)}, {"K", o.K}, {"out", o.out}, {"json", o.json}};
  if (print_only) return cfg;
  if (needs_seed(plan) && !o.seed) throw UsageError("this plan draws random values; pass --seed");
  const std::vector<PayloadReport> reports =
      payload_sweep({read_raster(o.cover)}, p, {plan}, o.seed.value_or(0), o.K);
  const std::string text = to_text(reports.front());
  std::cout << text;
  if (!o.out.empty()) write_text(o.out, text);
  if (!o.json.empty()) write_text(o.json, to_json(reports));
  return {};
}

json run_tile(const TileOpts& o, bool print_only) {
  json cfg = {{"command", "tile"}, {"input", o.input}, {"tile_w", o.tile_w}, {"tile_h", o.tile_h},
              {"cols", o.cols},    {"rows", o.rows},   {"out_dir", o.out_dir}, {"prefix", o.prefix}};
  if (print_only) return cfg;
  const Raster16 src = read_raster(o.input);
  if (o.tile_w <= 0 || o.tile_h <= 0) throw UsageError("tile size must be positive");
  TileSpec spec{o.tile_w, o.tile_h, o.cols > 0 ? o.cols : src.width / o.tile_w,
                o.rows > 0 ? o.rows : src.height / o.tile_h};
  const std::vector<Raster16> tiles = tile(src, spec);
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create " + o.out_dir);
  const char* ext = src.channels == 3 ? "ppm" : "pgm";
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04zu.%s", o.prefix.c_str(), i, ext);
    write_raster(tiles[i], fs::path(o.out_dir) / name);
  }
  std::cout << "tiles=" << tiles.size() << '\n';
  return {};
}

json run_mimicry(const MimicryOpts& o, bool print_only) {
  const std::vector<std::string> cover = expand(o.cover_stack);
  const std::vector<std::string> stego = expand(o.stego_stack);
  json cfg = {{"command", "mimicry"}, {"cover_stack", cover}, {"stego_stack", stego}, {"target", o.target},
              {"tol_a", o.tol_a},     {"tol_b", o.tol_b},     {"delta", o.delta},    {"json", o.json}};
  if (print_only) return cfg;
  const MimicryReport r =
      mimicry_check(read_all(cover), read_all(stego), load_noise_model(o.target), o.tol_a, o.tol_b, o.delta);
  std::cout << to_text(r);
  if (!o.json.empty()) write_text(o.json, to_json(r));
  if (!r.pass) throw VerificationError("recovered model is outside the tolerance of the target");
  return {};
}

json run_sweep(const SweepOpts& o, bool print_only) {
  const std::vector<std::string> covers = expand(o.covers);
  const StegoParams p = resolve_params(o.params, o.wet_dark);
  std::vector<DevelopPlan> plans;
  json recipes = json::array();
  for (const std::string& s : o.plans) {
    plans.push_back(resolve_plan(s));
    recipes.push_back(plans.back().to_recipe());
  }
  json cfg = {{"command", "sweep"}, {"covers", covers}, {"params", params_json(p)}, {"plans", recipes},
              {"seed", opt_seed(o.seed)}, {"K", o.K}, {"out", o.out}, {"json", o.json}};
  if (print_only) return cfg;
  for (const DevelopPlan& plan : plans) {
    if (needs_seed(plan) && !o.seed) throw UsageError("a plan draws random values; pass --seed");
  }
  const std::vector<PayloadReport> reports = payload_sweep(read_all(covers), p, plans, o.seed.value_or(0), o.K);
  std::string text;
  for (const PayloadReport& r : reports) text += to_text(r) + "\n";
  std::cout << text;
  if (!o.out.empty()) write_text(o.out, text);
  if (!o.json.empty()) write_text(o.json, to_json(reports));
  return {};
}

}  // namespace natstego::cli
