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

#include "natstego/stego.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "natstego/errors.hpp"
#include "natstego/gaussian.hpp"
#include "natstego/kernels.hpp"
#include "natstego/parallel.hpp"
#include "natstego/rng.hpp"

namespace natstego {

void StegoParams::validate() const {
  if (bit_depth_in != 8 && bit_depth_in != 16) throw ModelError("input bit depth must be 8 or 16");
  if (!std::isfinite(a_dd) || !std::isfinite(b_dd)) throw ModelError("stego parameters must be finite");
  if (b_dd < 0.0) throw ModelError("stego intercept must be non-negative");
  if (!(a_dd > 0.0)) throw ModelError("stego slope must be positive");
  if (perturbation && b_dd != 0.0) throw ModelError("perturbation mode requires a zero intercept");
}

std::string format_stego_params(const StegoParams& p) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "a_dd=%.17g\nb_dd=%.17g\nbit_depth=%d\nperturbation=%d\nwet_dark=%d\n", p.a_dd,
                p.b_dd, p.bit_depth_in, p.perturbation ? 1 : 0, p.wet_dark ? 1 : 0);
  return buf;
}

StegoParams parse_stego_params(const std::string& text) {
  StegoParams p;
  bool has_a = false, has_b = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed params line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "a_dd") {
        p.a_dd = std::stod(value);
        has_a = true;
      } else if (key == "b_dd") {
        p.b_dd = std::stod(value);
        has_b = true;
      } else if (key == "bit_depth") {
        p.bit_depth_in = std::stoi(value);
      } else if (key == "perturbation") {
        p.perturbation = std::stoi(value) != 0;
      } else if (key == "wet_dark") {
        p.wet_dark = std::stoi(value) != 0;
      } else {
        throw IoError("unknown params key: " + key);
      }
    } catch (const std::logic_error&) {
      throw IoError("malformed number in params: " + line);
    }
  }
  if (!has_a || !has_b) throw IoError("params file needs both a_dd= and b_dd=");
  if (p.bit_depth_in != 8 && p.bit_depth_in != 16) throw IoError("params bit_depth must be 8 or 16");
  return p;
}

StegoParams load_stego_params(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_stego_params(ss.str());
}

void save_stego_params(const StegoParams& p, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << format_stego_params(p);
  if (!f) throw IoError("write failure on " + path.string());
}

StegoParams diff_model(const NoiseModel& from, const NoiseModel& to, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw UsageError("bit depth must be 8 or 16");
  from.validate();
  to.validate();
  if (to.a < from.a || to.b < from.b) throw ModelError("target source must be noisier than the cover source");
  const double da = to.a - from.a;
  const double db = to.b - from.b;
  if (!(da > 0.0)) throw ModelError("non-positive difference variance on [0,1]");
  const double scale = std::ldexp(1.0, bit_depth) - 1.0;
  StegoParams p;
  p.a_dd = da * scale;
  p.b_dd = db * scale * scale;
  p.bit_depth_in = bit_depth;
  return p;
}

StegoParams perturbation_params(double a_norm, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw UsageError("bit depth must be 8 or 16");
  if (!(a_norm > 0.0)) throw ModelError("perturbation slope must be positive");
  StegoParams p;
  p.a_dd = a_norm * (std::ldexp(1.0, bit_depth) - 1.0);
  p.b_dd = 0.0;
  p.bit_depth_in = bit_depth;
  p.perturbation = true;
  return p;
}

double stego_sigma2(double x, const StegoParams& p) {
  if (x < 0.0 || x > p.input_max()) throw UsageError("sample outside the input range");
  const double v = p.a_dd * x + p.b_dd;
  if (v < 0.0) throw ModelError("negative stego variance");
  return v;
}

// ---------------------------------------------------------------------------
// ChangeProbMap

ChangeProbMap::ChangeProbMap(int width, int height, int quant_step)
    : width_(width), height_(height), step_(quant_step) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  flags_.assign(n, 0);
  center_.assign(n, 0);
  mean_.assign(n, 0.0);
  sigma_.assign(n, 0.0);
  k_lo_.assign(n, 0);
  offsets_.assign(n + 1, 0);
  pending_.resize(n);
}

double ChangeProbMap::prob(std::size_t i, int k) const {
  const int idx = k - k_lo_[i];
  const auto p = probs(i);
  if (idx < 0 || idx >= static_cast<int>(p.size())) return 0.0;
  return p[static_cast<std::size_t>(idx)];
}

double ChangeProbMap::entropy(std::size_t i) const {
  const auto p = probs(i);
  return entropy_bits(p.data(), p.size());
}

void ChangeProbMap::set(std::size_t i, std::uint8_t flags, int center, double mean, double sigma, int k_lo,
                        std::vector<double> probs) {
  flags_[i] = flags;
  center_[i] = static_cast<std::int16_t>(center);
  mean_[i] = mean;
  sigma_[i] = sigma;
  k_lo_[i] = static_cast<std::int16_t>(k_lo);
  pending_[i] = std::move(probs);
}

void ChangeProbMap::finish() {
  const std::size_t n = flags_.size();
  offsets_.assign(n + 1, 0);
  support_ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending_[i].empty()) pending_[i] = {1.0};
    offsets_[i + 1] = offsets_[i] + pending_[i].size();
    const int hi = k_lo_[i] + static_cast<int>(pending_[i].size()) - 1;
    support_ = std::max({support_, std::abs(static_cast<int>(k_lo_[i])), std::abs(hi)});
  }
  probs_.resize(offsets_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(pending_[i].begin(), pending_[i].end(), probs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]));
  }
  pending_.clear();
  pending_.shrink_to_fit();
}

ChangeProbMap ChangeProbMap::from_parts(int width, int height, int quant_step, std::vector<std::uint8_t> flags,
                                        std::vector<std::int16_t> center, std::vector<double> mean,
                                        std::vector<double> sigma, std::vector<std::int16_t> k_lo,
                                        std::vector<std::uint64_t> offsets, std::vector<double> probs) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (flags.size() != n || center.size() != n || mean.size() != n || sigma.size() != n || k_lo.size() != n ||
      offsets.size() != n + 1 || offsets.back() != probs.size()) {
    throw IoError("inconsistent probability map parts");
  }
  ChangeProbMap m;
  m.width_ = width;
  m.height_ = height;
  m.step_ = quant_step;
  m.flags_ = std::move(flags);
  m.center_ = std::move(center);
  m.mean_ = std::move(mean);
  m.sigma_ = std::move(sigma);
  m.k_lo_ = std::move(k_lo);
  m.offsets_ = std::move(offsets);
  m.probs_ = std::move(probs);
  for (std::size_t i = 0; i < n; ++i) {
    if (m.offsets_[i + 1] <= m.offsets_[i]) throw IoError("empty pixel law in probability map");
    const int hi = m.k_lo_[i] + static_cast<int>(m.offsets_[i + 1] - m.offsets_[i]) - 1;
    m.support_ = std::max({m.support_, std::abs(static_cast<int>(m.k_lo_[i])), std::abs(hi)});
  }
  return m;
}

// ---------------------------------------------------------------------------

CellLaw cell_law(int center, double mean, double sigma, const Quantizer& q, int kcap) {
  CellLaw law;
  const int cap_lo = kcap > 0 ? std::max(0, center - kcap) : 0;
  const int cap_hi = kcap > 0 ? std::min(Quantizer::kMaxCode, center + kcap) : Quantizer::kMaxCode;
  if (!(sigma > 0.0)) {
    const int c = std::clamp(q.code(mean), cap_lo, cap_hi);
    law.k_lo = c - center;
    law.probs = {1.0};
    return law;
  }
  int lo = std::max(0, q.code(mean - 6.0 * sigma) - 1);
  int hi = std::min(Quantizer::kMaxCode, q.code(mean + 6.0 * sigma) + 1);
  lo = std::clamp(lo, cap_lo, cap_hi);
  hi = std::clamp(hi, cap_lo, cap_hi);
  law.k_lo = lo - center;
  law.probs.resize(static_cast<std::size_t>(hi - lo + 1));
  const double inf = std::numeric_limits<double>::infinity();
  for (int c = lo; c <= hi; ++c) {
    const double a = c == lo ? -inf : q.lower(c);
    const double b = c == hi ? inf : q.upper(c);
    law.probs[static_cast<std::size_t>(c - lo)] = interval_prob(a, b, mean, sigma);
  }
  return law;
}

ChangeProbMap assemble_prob_map(int width, int height, int quant_step, int K, bool wet_dark, bool perturbation,
                                const std::function<CellModel(std::size_t)>& model) {
  if (K < 0) throw UsageError("support K must be non-negative (0 selects it automatically)");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<CellModel> models(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) models[i] = model(i);
  });

  int min_code = Quantizer::kMaxCode;
  for (const CellModel& c : models) min_code = std::min(min_code, c.center);
  double sigma_max = 0.0;
  for (CellModel& c : models) {
    if (c.center <= 0 || c.center >= Quantizer::kMaxCode) c.wet = true;
    if (wet_dark && c.center == min_code) c.wet = true;
    if (!c.wet && !(c.sigma > 0.0)) {
      if (perturbation) throw ModelError("zero stego variance at a non-wet pixel in perturbation mode");
      c.wet = true;
    }
    if (!c.wet) sigma_max = std::max(sigma_max, c.sigma);
  }
  const int kcap = K > 0 ? K : static_cast<int>(std::ceil(6.0 * sigma_max / quant_step)) + 1;

  ChangeProbMap m(width, height, quant_step);
  const Quantizer q{quant_step};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CellModel& c = models[i];
      if (c.wet) {
        m.set(i, kWet, c.center, c.mean, c.sigma, 0, {1.0});
      } else {
        CellLaw law = cell_law(c.center, c.mean, c.sigma, q, kcap);
        m.set(i, 0, c.center, c.mean, c.sigma, law.k_lo, std::move(law.probs));
      }
    }
  });
  m.finish();
  return m;
}

ChangeProbMap change_probs(const Raster16& cover, const StegoParams& p, int K) {
  if (cover.channels != 1) throw UsageError("change_probs expects a single-channel cover");
  if (cover.bit_depth != p.bit_depth_in) throw UsageError("cover bit depth does not match the stego parameters");
  if (p.a_dd < 0.0 || p.b_dd < 0.0) throw ModelError("stego parameters must be non-negative");
  const std::size_t n = cover.samples.size();
  std::vector<double> x(n), var(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = cover.samples[i];
  const auto& kern = simd::kernels();
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    kern.affine(x.data() + begin, end - begin, p.a_dd, p.b_dd, 1.0, var.data() + begin);
  });
  const Quantizer q{p.quant_step()};
  return assemble_prob_map(cover.width, cover.height, p.quant_step(), K, p.wet_dark, p.perturbation,
                           [&](std::size_t i) {
                             return CellModel{q.code(x[i]), x[i], std::sqrt(var[i]), false};
                           });
}

Payload payload_entropy(const ChangeProbMap& m) {
  Payload out;
  out.pixels = m.size();
  const int h = m.height();
  const std::size_t w = static_cast<std::size_t>(m.width());
  std::vector<double> rows(static_cast<std::size_t>(h), 0.0);
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y) {
      double s = 0.0;
      for (std::size_t x = 0; x < w; ++x) s += m.entropy(y * w + x);
      rows[y] = s;
    }
  });
  for (double r : rows) out.bits += r;
  out.bpp = out.pixels > 0 ? out.bits / static_cast<double>(out.pixels) : 0.0;
  return out;
}

double flip_cost(double change_prob) {
  const double p = std::clamp(change_prob, 0.0, 1.0);
  const double pt = std::max(p, 1.0 - p);
  if (pt >= 1.0) return CostMap::kWetCost;
  return std::log(pt / (1.0 - pt));
}

CostMap probs_to_costs(const ChangeProbMap& m) {
  CostMap c;
  c.width = m.width();
  c.height = m.height();
  c.rho.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.wet(i) || m.non_carrier(i)) {
      c.rho[i] = CostMap::kWetCost;
    } else {
      c.rho[i] = flip_cost(1.0 - m.prob(i, 0));
    }
  }
  return c;
}

int draw_change(std::span<const double> probs, int k_lo, double u) {
  double cum = 0.0;
  int last = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    last = static_cast<int>(j);
    cum += probs[j];
    if (u < cum) return k_lo + last;
  }
  return k_lo + last;
}

Simulation simulate_embedding(const ChangeProbMap& m, std::uint64_t seed) {
  Simulation sim;
  const std::size_t n = m.size();
  sim.stego = Raster16(m.width(), m.height(), 1, 8);
  sim.k.assign(n, 0);
  sim.latent = ImageD(m.width(), m.height(), 1);
  std::vector<std::uint8_t> fell_back(n, 0);
  const Quantizer q{m.quant_step()};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      int k = 0;
      if (!m.wet(i) && !m.non_carrier(i)) {
        Substream pick(seed, i, Stage::Embed);
        k = draw_change(m.probs(i), m.k_lo(i), pick.uniform());
      }
      const int code = m.center(i) + k;
      sim.k[i] = static_cast<std::int16_t>(k);
      sim.stego.samples[i] = static_cast<std::uint16_t>(code);
      if (m.wet(i) || m.non_carrier(i)) {
        // Wet and non-carrier pixels keep the cover value.
        sim.latent.samples[i] = m.mean(i);
        continue;
      }
      Substream latent(seed, i, Stage::Latent);
      const TruncatedDraw d =
          sample_truncated_normal(latent, m.mean(i), m.sigma(i), q.lower(code), q.upper(code));
      sim.latent.samples[i] = d.value;
      fell_back[i] = d.fallback ? 1 : 0;
    }
  });
  for (std::uint8_t f : fell_back) sim.fallbacks += f;
  return sim;
}

Simulation simulate_embedding(const Raster16& cover, const ChangeProbMap& m, std::uint64_t seed) {
  if (cover.width != m.width() || cover.height != m.height()) {
    throw UsageError("probability map does not match the cover dimensions");
  }
  return simulate_embedding(m, seed);
}

}  // namespace natstego
