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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "natstego/develop.hpp"
#include "natstego/errors.hpp"

namespace natstego {

std::string_view to_string(CfaPattern p) {
  switch (p) {
    case CfaPattern::RGGB: return "RGGB";
    case CfaPattern::BGGR: return "BGGR";
    case CfaPattern::GRBG: return "GRBG";
    case CfaPattern::GBRG: return "GBRG";
  }
  return "?";
}

CfaPattern parse_cfa(std::string_view s) {
  if (s == "RGGB") return CfaPattern::RGGB;
  if (s == "BGGR") return CfaPattern::BGGR;
  if (s == "GRBG") return CfaPattern::GRBG;
  if (s == "GBRG") return CfaPattern::GBRG;
  throw UsageError("unknown CFA pattern '" + std::string(s) + "'");
}

namespace {

double parse_real(const std::string& tok, const std::string& stage) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw UsageError("plan: bad number '" + tok + "' in " + stage);
  }
  return v;
}

int parse_factor(const std::string& tok, const std::string& stage) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw UsageError("plan: bad factor '" + tok + "' in " + stage);
  }
  return v;
}

void expect_args(const std::vector<std::string>& t, std::size_t n, const std::string& usage) {
  if (t.size() != n + 1) throw UsageError("plan: expected '" + usage + "'");
}

StageSpec parse_stage(const std::vector<std::string>& t) {
  const std::string& kw = t.front();
  if (kw == "gamma") {
    expect_args(t, 1, "gamma <value>");
    return GammaStage{parse_real(t[1], kw)};
  }
  if (kw == "demosaic") {
    if (t.size() == 2) return DemosaicStage{parse_cfa(t[1])};
    expect_args(t, 2, "demosaic bilinear <RGGB|BGGR|GRBG|GBRG>");
    if (t[1] != "bilinear") throw UsageError("plan: only bilinear demosaicing is supported");
    return DemosaicStage{parse_cfa(t[2])};
  }
  if (kw == "colormatrix") {
    expect_args(t, 9, "colormatrix c11 c12 c13 c21 c22 c23 c31 c32 c33");
    ColorMatrixStage s;
    for (int i = 0; i < 9; ++i) s.c[static_cast<std::size_t>(i)] = parse_real(t[static_cast<std::size_t>(i) + 1], kw);
    return s;
  }
  if (kw == "downsample") {
    expect_args(t, 2, "downsample <sub|box|tent> <factor>");
    DownsampleStage s;
    if (t[1] == "sub") {
      s.kind = DownsampleKind::Sub;
    } else if (t[1] == "box") {
      s.kind = DownsampleKind::Box;
    } else if (t[1] == "tent") {
      s.kind = DownsampleKind::Tent;
    } else {
      throw UsageError("plan: unknown downsampling kernel '" + t[1] + "'");
    }
    s.factor = parse_factor(t[2], kw);
    return s;
  }
  if (kw == "upsample") {
    expect_args(t, 1, "upsample <factor>");
    return UpsampleStage{parse_factor(t[1], kw)};
  }
  if (kw == "quantize8") {
    expect_args(t, 0, "quantize8");
    return Quantize8Stage{};
  }
  throw UsageError("plan: unknown stage '" + kw + "'");
}

std::string_view kind_name(DownsampleKind k) {
  switch (k) {
    case DownsampleKind::Sub: return "sub";
    case DownsampleKind::Box: return "box";
    case DownsampleKind::Tent: return "tent";
  }
  return "?";
}

std::string fmt_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void DevelopPlan::validate() const {
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const StageSpec& s = stages[i];
    if (std::holds_alternative<Quantize8Stage>(s) && i + 1 != stages.size()) {
      throw UsageError("plan: quantize8 must be the last stage and may appear once");
    }
    if (const auto* g = std::get_if<GammaStage>(&s); g && !(g->gamma > 0.0)) {
      throw UsageError("plan: gamma must be positive");
    }
    if (const auto* d = std::get_if<DownsampleStage>(&s); d && d->factor < 1) {
      throw UsageError("plan: downsampling factor must be at least 1");
    }
    if (const auto* u = std::get_if<UpsampleStage>(&s); u && u->factor < 1) {
      throw UsageError("plan: upsampling factor must be at least 1");
    }
    if (const auto* c = std::get_if<ColorMatrixStage>(&s)) {
      for (double v : c->c) {
        if (!std::isfinite(v)) throw UsageError("plan: colour matrix entries must be finite");
      }
    }
  }
}

std::string DevelopPlan::to_recipe() const {
  std::ostringstream out;
  for (const StageSpec& s : stages) {
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, GammaStage>) {
            out << "gamma " << fmt_real(st.gamma);
          } else if constexpr (std::is_same_v<T, DemosaicStage>) {
            out << "demosaic bilinear " << to_string(st.cfa);
          } else if constexpr (std::is_same_v<T, ColorMatrixStage>) {
            out << "colormatrix";
            for (double v : st.c) out << ' ' << fmt_real(v);
          } else if constexpr (std::is_same_v<T, DownsampleStage>) {
            out << "downsample " << kind_name(st.kind) << ' ' << st.factor;
          } else if constexpr (std::is_same_v<T, UpsampleStage>) {
            out << "upsample " << st.factor;
          } else {
            out << "quantize8";
          }
        },
        s);
    out << '\n';
  }
  return out.str();
}

DevelopPlan parse_plan(std::string_view text) {
  DevelopPlan plan;
  std::string line;
  auto flush = [&] {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (!tokens.empty()) plan.stages.push_back(parse_stage(tokens));
    line.clear();
  };
  bool in_comment = false;
  for (char ch : text) {
    if (ch == '\n') {
      in_comment = false;
      flush();
    } else if (ch == ';' && !in_comment) {
      flush();
    } else {
      if (ch == '#') in_comment = true;
      line.push_back(ch);
    }
  }
  flush();
  if (plan.stages.empty() || !std::holds_alternative<Quantize8Stage>(plan.stages.back())) {
    plan.stages.push_back(Quantize8Stage{});
  }
  plan.validate();
  return plan;
}

DevelopPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read plan file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

}  // namespace natstego
