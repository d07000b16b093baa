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

#include <algorithm>
#include <cmath>

#include "natstego/develop.hpp"
#include "natstego/errors.hpp"

namespace natstego {

double gamma_forward(double x, double gamma, double y_max) {
  const double t = std::clamp(x / y_max, 0.0, 1.0);
  return y_max * std::pow(t, 1.0 / gamma);
}

double gamma_slope(double x, double gamma, double y_max) {
  const double t = std::clamp(x / y_max, 0.0, 1.0);
  return std::pow(t, 1.0 / gamma - 1.0) / gamma;
}

ChangeProbMap gamma_probs(const Raster16& cover, const StegoParams& p, double gamma, int K) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw UsageError("gamma must be positive");
  if (gamma == 1.0) return change_probs(cover, p, K);
  if (cover.channels != 1) throw UsageError("gamma_probs expects a single-channel cover");
  if (cover.bit_depth != p.bit_depth_in) throw UsageError("cover bit depth does not match the stego parameters");
  const double y_max = p.input_max();
  const Quantizer q{p.quant_step()};
  return assemble_prob_map(cover.width, cover.height, p.quant_step(), K, p.wet_dark, p.perturbation,
                           [&](std::size_t i) {
                             const double x = cover.samples[i];
                             const double g = gamma_forward(x, gamma, y_max);
                             const double alpha = gamma_slope(x, gamma, y_max);
                             CellModel c{q.code(g), g, 0.0, false};
                             const double s = alpha * std::sqrt(stego_sigma2(x, p));
                             // The slope diverges at x = 0 for gamma > 1.
                             if (std::isfinite(s)) {
                               c.sigma = s;
                             } else {
                               c.wet = true;
                             }
                             return c;
                           });
}

}  // namespace natstego
