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

#include "natstego/noise_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "natstego/errors.hpp"
#include "natstego/kernels.hpp"
#include "natstego/parallel.hpp"

namespace natstego {

void NoiseModel::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ModelError("noise model slope must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw ModelError("noise model intercept must be non-negative");
}

namespace {

struct BinAccumulator {
  std::uint64_t sites = 0;
  unsigned __int128 sample_sum = 0;
  // Sum over sites of N * sum(y^2) - (sum y)^2, i.e. N times the within-site
  // sum of squared deviations. Exact in integers.
  unsigned __int128 scaled_ss = 0;
};

}  // namespace

std::vector<BinStats> bin_photosites(const std::vector<Raster16>& stack, double delta) {
  if (!(delta > 0.0) || delta >= 1.0) throw UsageError("bin width must lie in (0, 1)");
  if (stack.size() < 2) throw UsageError("noise estimation needs at least two frames");
  const Raster16& first = stack.front();
  for (const Raster16& f : stack) {
    if (f.width != first.width || f.height != first.height || f.channels != first.channels ||
        f.bit_depth != first.bit_depth) {
      throw UsageError("stack frames differ in dimensions or bit depth");
    }
    if (f.channels != 1) throw UsageError("noise estimation expects single-channel frames");
  }
  const std::size_t n = first.samples.size();
  const std::uint64_t frames = stack.size();
  const double white = first.bit_depth == 16 ? kWhiteLevel : 255.0;

  std::vector<std::uint64_t> sum(n, 0), sumsq(n, 0);
  std::vector<std::uint8_t> saturated(n, 0);
  const auto& k = simd::kernels();
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (const Raster16& f : stack) {
      k.accumulate_frame(f.samples.data() + begin, end - begin, sum.data() + begin,
                         sumsq.data() + begin, saturated.data() + begin);
    }
  });
  if (first.bit_depth == 8) {
    for (std::size_t i = 0; i < n; ++i) {
      // The kernel flags 16-bit saturation; redo it for 8-bit content.
      saturated[i] = 0;
    }
    for (const Raster16& f : stack) {
      for (std::size_t i = 0; i < n; ++i) saturated[i] |= (f.samples[i] == 0 || f.samples[i] == 255);
    }
  }

  // Integer accumulators make the reduction independent of visiting order.
  std::map<long, BinAccumulator> bins;
  const double scale = 1.0 / (static_cast<double>(frames) * white * delta);
  for (std::size_t i = 0; i < n; ++i) {
    if (saturated[i]) continue;
    const long idx = std::lround(static_cast<double>(sum[i]) * scale);
    auto& acc = bins[idx];
    acc.sites += 1;
    acc.sample_sum += sum[i];
    acc.scaled_ss += static_cast<unsigned __int128>(frames) * sumsq[i] -
                     static_cast<unsigned __int128>(sum[i]) * sum[i];
  }

  std::vector<BinStats> out;
  out.reserve(bins.size());
  for (const auto& [idx, acc] : bins) {
    BinStats s;
    s.bin_index = idx;
    s.sites = acc.sites;
    s.population = acc.sites * frames;
    s.mean = static_cast<double>(acc.sample_sum) / (static_cast<double>(s.population) * white);
    const double dof = static_cast<double>(acc.sites) * static_cast<double>(frames - 1);
    s.variance = static_cast<double>(acc.scaled_ss) / static_cast<double>(frames) / dof / (white * white);
    out.push_back(s);
  }
  return out;
}

NoiseModel fit_noise_model(const std::vector<BinStats>& bins, const std::string& iso_label) {
  double w = 0.0, mx = 0.0, my = 0.0;
  std::size_t usable = 0;
  for (const BinStats& b : bins) {
    if (b.population < 2) continue;
    ++usable;
    const double wi = static_cast<double>(b.population);
    w += wi;
    mx += wi * b.mean;
    my += wi * b.variance;
  }
  if (usable < 2) throw ModelError("noise fit needs at least two populated bins");
  mx /= w;
  my /= w;
  double sxx = 0.0, sxy = 0.0;
  for (const BinStats& b : bins) {
    if (b.population < 2) continue;
    const double wi = static_cast<double>(b.population);
    sxx += wi * (b.mean - mx) * (b.mean - mx);
    sxy += wi * (b.mean - mx) * (b.variance - my);
  }
  if (!(sxx > 1e-300) || sxx <= 1e-24 * w * (mx * mx + 1e-300)) {
    throw ModelError("noise fit is rank deficient: all bin means are equal");
  }
  NoiseModel m;
  m.a = sxy / sxx;
  m.b = my - m.a * mx;
  m.iso_label = iso_label;
  if (!(m.a > 0.0)) throw ModelError("fitted noise slope is not positive");
  if (m.b < 0.0) throw ModelError("fitted noise intercept is negative");
  return m;
}

double weighted_mean_residual(const std::vector<BinStats>& bins, const NoiseModel& m) {
  double w = 0.0, r = 0.0;
  for (const BinStats& b : bins) {
    if (b.population < 2) continue;
    const double wi = static_cast<double>(b.population);
    w += wi;
    r += wi * (b.variance - m.variance(b.mean));
  }
  return w > 0.0 ? r / w : 0.0;
}

std::string format_noise_model(const NoiseModel& m) {
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf, "a=%.17g\n", m.a);
  out += buf;
  std::snprintf(buf, sizeof buf, "b=%.17g\n", m.b);
  out += buf;
  out += "iso=" + m.iso_label + "\n";
  return out;
}

NoiseModel parse_noise_model(const std::string& text) {
  NoiseModel m;
  bool has_a = false, has_b = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed noise model line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "a") {
        m.a = std::stod(value);
        has_a = true;
      } else if (key == "b") {
        m.b = std::stod(value);
        has_b = true;
      } else if (key == "iso") {
        m.iso_label = value;
      } else {
        throw IoError("unknown noise model key: " + key);
      }
    } catch (const std::logic_error&) {
      throw IoError("malformed number in noise model: " + line);
    }
  }
  if (!has_a || !has_b) throw IoError("noise model file needs both a= and b=");
  return m;
}

NoiseModel load_noise_model(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_noise_model(ss.str());
}

void save_noise_model(const NoiseModel& m, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << format_noise_model(m);
  if (!f) throw IoError("write failure on " + path.string());
}

}  // namespace natstego
