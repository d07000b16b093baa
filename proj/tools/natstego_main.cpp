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

// natstego command-line front end.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "natstego/errors.hpp"
#include "natstego/parallel.hpp"

namespace {

int exit_code(natstego::ErrorCategory c) {
  switch (c) {
    case natstego::ErrorCategory::Usage: return 2;
    case natstego::ErrorCategory::Io: return 3;
    case natstego::ErrorCategory::Model: return 4;
    case natstego::ErrorCategory::Verification: return 5;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace natstego::cli;

  CLI::App app{"Natural steganography: sensor-noise estimation and cover-source switching embedding"};
  app.require_subcommand(1);
  int threads = 0;
  bool print_config = false;
  app.add_option("--threads", threads, "Worker threads (default: NATSTEGO_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--print-config", print_config, "Print the resolved configuration as JSON and exit");

  EstimateOpts est;
  auto* c_est = app.add_subcommand("estimate-noise", "Fit sigma^2 = a mu + b from a stack of flat frames");
  c_est->add_option("--stack", est.stack, "Frames (files or glob patterns)")->required();
  c_est->add_option("--delta", est.delta, "Bin width on the normalized scale");
  c_est->add_option("--iso", est.iso, "Label stored with the model");
  c_est->add_option("--out", est.out, "Output model file")->required();

  DiffOpts dif;
  auto* c_dif = app.add_subcommand("diff-model", "Stego parameters switching model1 to model2");
  c_dif->add_option("--model1", dif.model1, "Cover-source model")->required();
  c_dif->add_option("--model2", dif.model2, "Target-source model")->required();
  c_dif->add_option("--bit-depth", dif.bit_depth, "Input bit depth")->check(CLI::IsMember({8, 16}));
  c_dif->add_option("--out", dif.out, "Output parameter file")->required();

  PerturbOpts per;
  auto* c_per = app.add_subcommand("perturb-params", "Cover-source perturbation parameters (b'' = 0)");
  c_per->add_option("--a", per.a, "Normalized slope")->required();
  c_per->add_option("--bit-depth", per.bit_depth, "Input bit depth")->check(CLI::IsMember({8, 16}));
  c_per->add_option("--out", per.out, "Output parameter file")->required();

  EmbedOpts emb;
  auto* c_emb = app.add_subcommand("embed", "Simulate embedding into a cover through a developing plan");
  c_emb->add_option("--cover", emb.cover, "16-bit cover (PGM) or Bayer mosaic")->required();
  c_emb->add_option("--params", emb.params, "Stego parameter file")->required();
  c_emb->add_option("--plan", emb.plan, "Recipe file or inline stages separated by ';'");
  c_emb->add_option("--seed", emb.seed, "Embedding seed")->required();
  c_emb->add_option("--K", emb.K, "Support cap (0: automatic)")->check(CLI::NonNegativeNumber);
  c_emb->add_flag("--wet-dark", emb.wet_dark, "Also wet pixels at the darkest code");
  c_emb->add_option("--out", emb.out, "8-bit stego output")->required();
  c_emb->add_option("--out-probs", emb.out_probs, "Probability map container");
  c_emb->add_option("--out-costs", emb.out_costs, "Cost map container");
  c_emb->add_option("--out-raw", emb.out_raw, "Continuous stego rounded to the input bit depth");

  PayloadOpts pay;
  auto* c_pay = app.add_subcommand("payload", "Entropy payload of a cover through a developing plan");
  c_pay->add_option("--cover", pay.cover, "Cover image")->required();
  c_pay->add_option("--params", pay.params, "Stego parameter file")->required();
  c_pay->add_option("--plan", pay.plan, "Recipe file or inline stages separated by ';'");
  c_pay->add_option("--seed", pay.seed, "Seed (required by tent and colour plans)");
  c_pay->add_option("--K", pay.K, "Support cap (0: automatic)")->check(CLI::NonNegativeNumber);
  c_pay->add_flag("--wet-dark", pay.wet_dark, "Also wet pixels at the darkest code");
  c_pay->add_option("--out", pay.out, "Key-value report file");
  c_pay->add_option("--json", pay.json, "JSON summary file");

  TileOpts til;
  auto* c_til = app.add_subcommand("tile", "Cut a capture into a grid of tiles from the top-left corner");
  c_til->add_option("--input", til.input, "Source image")->required();
  c_til->add_option("--tile-w", til.tile_w, "Tile width");
  c_til->add_option("--tile-h", til.tile_h, "Tile height");
  c_til->add_option("--cols", til.cols, "Grid columns (0: as many as fit)");
  c_til->add_option("--rows", til.rows, "Grid rows (0: as many as fit)");
  c_til->add_option("--out-dir", til.out_dir, "Output directory")->required();
  c_til->add_option("--prefix", til.prefix, "File name prefix");

  MimicryOpts mim;
  auto* c_mim = app.add_subcommand("mimicry", "Re-estimate the noise model on stego frames and compare");
  c_mim->add_option("--cover-stack", mim.cover_stack, "Cover frames")->required();
  c_mim->add_option("--stego-stack", mim.stego_stack, "Raw-domain stego frames")->required();
  c_mim->add_option("--target", mim.target, "Target model file")->required();
  c_mim->add_option("--tol-a", mim.tol_a, "Relative tolerance on a");
  c_mim->add_option("--tol-b", mim.tol_b, "Relative tolerance on b");
  c_mim->add_option("--delta", mim.delta, "Bin width on the normalized scale");
  c_mim->add_option("--json", mim.json, "JSON summary file");

  SweepOpts swp;
  auto* c_swp = app.add_subcommand("sweep", "Payload reports for several plans over several covers");
  c_swp->add_option("--cover", swp.covers, "Cover images (files or glob patterns)")->required();
  c_swp->add_option("--params", swp.params, "Stego parameter file")->required();
  c_swp->add_option("--plan", swp.plans, "Plans (recipe files or inline)")->required();
  c_swp->add_option("--seed", swp.seed, "Seed (required by tent and colour plans)");
  c_swp->add_option("--K", swp.K, "Support cap (0: automatic)")->check(CLI::NonNegativeNumber);
  c_swp->add_flag("--wet-dark", swp.wet_dark, "Also wet pixels at the darkest code");
  c_swp->add_option("--out", swp.out, "Key-value report file");
  c_swp->add_option("--json", swp.json, "JSON summary file");

  // --print-config must not require the run-only options.
  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_flag("--print-config", print_config, "Print the resolved configuration as JSON and exit");
  }
  bool want_config = false;
  for (int i = 1; i < argc; ++i) want_config |= std::string(argv[i]) == "--print-config";
  if (want_config) {
    for (CLI::App* sub : app.get_subcommands({})) {
      for (CLI::Option* opt : sub->get_options()) opt->required(false);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    natstego::set_thread_count(threads);
    nlohmann::json cfg;
    if (c_est->parsed()) cfg = run_estimate(est, print_config);
    if (c_dif->parsed()) cfg = run_diff(dif, print_config);
    if (c_per->parsed()) cfg = run_perturb(per, print_config);
    if (c_emb->parsed()) cfg = run_embed(emb, print_config);
    if (c_pay->parsed()) cfg = run_payload(pay, print_config);
    if (c_til->parsed()) cfg = run_tile(til, print_config);
    if (c_mim->parsed()) cfg = run_mimicry(mim, print_config);
    if (c_swp->parsed()) cfg = run_sweep(swp, print_config);
    if (print_config) {
      cfg["threads"] = natstego::thread_count();
      std::cout << cfg.dump(2) << '\n';
    }
  } catch (const natstego::Error& e) {
    std::cerr << "error: " << natstego::to_string(e.category()) << ": " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
