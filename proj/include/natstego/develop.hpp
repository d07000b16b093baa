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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "natstego/raster.hpp"
#include "natstego/stego.hpp"

namespace natstego {

// ---------------------------------------------------------------------------
// Developing plan

enum class CfaPattern { RGGB, BGGR, GRBG, GBRG };

std::string_view to_string(CfaPattern p);
CfaPattern parse_cfa(std::string_view s);

// Row-major 3x3 matrix applied to camera RGB column vectors.
using Matrix3 = std::array<double, 9>;
inline constexpr Matrix3 kIdentity3{1, 0, 0, 0, 1, 0, 0, 0, 1};

enum class DownsampleKind { Sub, Box, Tent };

struct GammaStage {
  double gamma = 1.0;
};
struct DemosaicStage {
  CfaPattern cfa = CfaPattern::RGGB;
};
struct ColorMatrixStage {
  Matrix3 c = kIdentity3;
};
struct DownsampleStage {
  DownsampleKind kind = DownsampleKind::Box;
  int factor = 1;
};
struct UpsampleStage {
  int factor = 1;
};
struct Quantize8Stage {};

using StageSpec =
    std::variant<GammaStage, DemosaicStage, ColorMatrixStage, DownsampleStage, UpsampleStage, Quantize8Stage>;

struct DevelopPlan {
  std::vector<StageSpec> stages;

  // At most one quantize8 stage and only in last position; positive gamma
  // and factors; finite matrix entries.
  void validate() const;
  // Canonical line-oriented recipe, one stage per line.
  std::string to_recipe() const;
};

// Accepts the recipe grammar with stages separated by newlines or ';'.
// '#' starts a comment. A plan without quantize8 gets one appended.
DevelopPlan parse_plan(std::string_view text);
DevelopPlan load_plan(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Gamma correction: y = y_max (x / y_max)^(1/gamma)

double gamma_forward(double x, double gamma, double y_max);
// First-order slope of gamma_forward at x.
double gamma_slope(double x, double gamma, double y_max);

// Change probabilities after gamma correction using the linearized stego
// signal N(0, slope^2 sigma_S^2) centred on the gamma-corrected cover.
// gamma == 1 returns change_probs() unchanged.
ChangeProbMap gamma_probs(const Raster16& cover, const StegoParams& p, double gamma, int K = 0);

// ---------------------------------------------------------------------------
// Bayer demosaicing

enum Channel : int { kRed = 0, kGreen = 1, kBlue = 2 };
Channel cfa_channel(CfaPattern p, int x, int y);

// Bilinear demosaicing from same-channel neighbours, mirrored borders.
// Recorded photo-site values are passed through unchanged.
ImageD demosaic_bilinear(const ImageD& mosaic, CfaPattern cfa);
Raster16 demosaic_bilinear(const Raster16& mosaic, CfaPattern cfa);

ImageD apply_color_matrix(const ImageD& rgb, const Matrix3& c);

struct ColorEmbedding {
  Raster16 stego;                // 3-channel 8-bit developed stego
  ChangeProbMap probs;           // mosaic grid; green photo-sites carry the payload
  std::vector<std::int16_t> k;   // drawn change per photo-site (0 off-carrier)
  ImageD developed_cover;        // C * demosaic(cover)
  ImageD developed_stego;        // continuous developed stego before quantization
  int carrier_channel = kGreen;  // output channel read by the decoder
  Payload payload;
  std::size_t carriers = 0;
  std::size_t fallbacks = 0;
};

// Embedding through bilinear demosaicing and a 3x3 colour transform. Red and
// blue photo-sites receive message-free stego noise; each green photo-site
// carries one symbol in the output channel with the largest |c_i2|, and the
// other two channels follow from the same latent green draw.
ColorEmbedding embed_color_mosaic(const Raster16& mosaic, CfaPattern cfa, const StegoParams& p, const Matrix3& c,
                                  std::uint64_t seed, int K = 0);

// Reads the carried symbols back: code of the carrier channel at green
// photo-sites minus the cover code stored in the map.
std::vector<std::int16_t> decode_color_changes(const Raster16& stego, const ChangeProbMap& m, CfaPattern cfa,
                                               int carrier_channel);

// ---------------------------------------------------------------------------
// Resampling

// Keeps samples at multiples of c along both axes.
Raster16 downsample_sub(const Raster16& cover, int c);
// Means of disjoint c x c blocks.
ImageD downsample_box(const Raster16& cover, int c);
// Box-developed change probabilities, stego variance (a'' xbar + b'') / c^2.
ChangeProbMap downsample_box_probs(const Raster16& cover, const StegoParams& p, int c, int K = 0);

struct Upsampled {
  Raster16 stego;
  ChangeProbMap probs;  // duplicated positions flagged kNonCarrier
  int factor = 1;
};

// Nearest-neighbour integer upsampling; the message lives only on the
// original lattice (multiples of c).
Upsampled upsample(const Raster16& stego, const ChangeProbMap& m, int c);
// Changes read back on the original lattice (one per source pixel).
std::vector<std::int16_t> decode_upsampled(const Upsampled& up);

// ---------------------------------------------------------------------------
// Tent down-sampling

// (2c - 1)-tap triangle, normalized to unit sum; c = 2 gives [1, 2, 1] / 4.
std::vector<double> tent_taps(int c);
// Developed pixel (I, J) is centred on photo-site (c I + c/2, c J + c/2).
inline int tent_center(int index, int c) { return c * index + c / 2; }
// Separable tent filter with mirrored borders on the developed grid.
ImageD tent_filter(const Raster16& cover, int c);

struct TentEmbedding {
  Raster16 stego;                    // 8-bit developed stego
  ChangeProbMap probs;               // realized conditional law per developed pixel
  std::vector<std::uint8_t> lattice;  // 1..4 per developed pixel
  std::array<double, 4> lattice_bits{};
  std::array<std::size_t, 4> lattice_pixels{};
  std::vector<std::int16_t> k;
  ImageD photo_stego;       // latent stego signal per photo-site
  ImageD developed_cover;   // tent-filtered cover
  ImageD developed_signal;  // continuous developed stego signal
  Payload payload;
  std::size_t fallbacks = 0;
  std::size_t border_pixels = 0;
};

// Sequential four-lattice embedding. Lattice 1 (even, even) pixels have
// disjoint footprints; lattices 2 (even, odd), 3 (odd, even) and 4 (odd, odd)
// are embedded conditionally on the photo-site stego values already drawn.
// After each developed decision the free photo-sites of its footprint are
// drawn from the Gaussian conditioned on the selected cell. Developed pixels
// whose footprint leaves the image are wet.
TentEmbedding downsample_tent_embed(const Raster16& cover, const StegoParams& p, int c, std::uint64_t seed,
                                    int K = 0);

}  // namespace natstego
