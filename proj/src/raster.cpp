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

#include "natstego/raster.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string>

#include "natstego/errors.hpp"

namespace natstego {

Raster16::Raster16(int w, int h, int ch, int depth)
    : width(w), height(h), channels(ch), bit_depth(depth) {
  if (w < 0 || h < 0 || (ch != 1 && ch != 3) || (depth != 8 && depth != 16)) {
    throw UsageError("invalid raster geometry");
  }
  samples.assign(static_cast<std::size_t>(w) * h * ch, 0);
}

void Raster16::validate() const {
  if (width < 0 || height < 0) throw UsageError("negative raster dimensions");
  if (channels != 1 && channels != 3) throw UsageError("raster must have 1 or 3 channels");
  if (bit_depth != 8 && bit_depth != 16) throw UsageError("raster bit depth must be 8 or 16");
  if (samples.size() != static_cast<std::size_t>(width) * height * channels) {
    throw UsageError("raster sample count does not match its dimensions");
  }
  const std::uint16_t maxv = max_value();
  for (std::uint16_t s : samples) {
    if (s > maxv) throw UsageError("raster sample exceeds its bit depth");
  }
}

ImageD to_real(const Raster16& r) {
  ImageD out(r.width, r.height, r.channels);
  for (std::size_t i = 0; i < r.samples.size(); ++i) out.samples[i] = r.samples[i];
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw IoError(std::string("PNM ") + what + " out of range");
      ++pos_;
    }
    if (pos_ == start) {
      throw IoError(std::string("malformed PNM header: missing ") + what);
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t size() const { return bytes_.size(); }
  std::uint8_t byte(std::size_t i) const { return bytes_[i]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Raster16 decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw IoError("malformed PNM header: bad magic");
  const char kind = static_cast<char>(bytes[1]);
  int channels = 0;
  bool binary = false;
  switch (kind) {
    case '2': channels = 1; binary = false; break;
    case '3': channels = 3; binary = false; break;
    case '5': channels = 1; binary = true; break;
    case '6': channels = 3; binary = true; break;
    default: throw IoError("malformed PNM header: unsupported magic");
  }
  HeaderReader in(bytes);
  in.advance(2);
  const unsigned long w = in.read_uint("width");
  const unsigned long h = in.read_uint("height");
  const unsigned long maxval = in.read_uint("maxval");
  if (w == 0 || h == 0 || w > (1ul << 20) || h > (1ul << 20)) {
    throw IoError("malformed PNM header: unsupported dimensions");
  }
  if (maxval != 255 && maxval != 65535) throw IoError("maxval unsupported");

  Raster16 r(static_cast<int>(w), static_cast<int>(h), channels, maxval == 255 ? 8 : 16);
  const std::size_t count = r.samples.size();

  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.pos() >= in.size() || !std::isspace(in.byte(in.pos()))) {
      throw IoError("malformed PNM header: missing separator");
    }
    in.advance(1);
    const std::size_t bytes_per_sample = maxval == 255 ? 1 : 2;
    if (in.size() - in.pos() < count * bytes_per_sample) throw IoError("truncated PNM payload");
    const std::size_t base = in.pos();
    if (bytes_per_sample == 1) {
      for (std::size_t i = 0; i < count; ++i) r.samples[i] = in.byte(base + i);
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        r.samples[i] = static_cast<std::uint16_t>((in.byte(base + 2 * i) << 8) | in.byte(base + 2 * i + 1));
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_space_and_comments();
      if (in.pos() >= in.size()) throw IoError("truncated PNM payload");
      const unsigned long v = in.read_uint("sample");
      if (v > maxval) throw IoError("PNM sample out of declared range");
      r.samples[i] = static_cast<std::uint16_t>(v);
    }
  }
  return r;
}

std::vector<std::uint8_t> encode_pnm(const Raster16& r) {
  r.validate();
  const std::string header = std::string(r.channels == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(r.width) + " " + std::to_string(r.height) + "\n" +
                             (r.bit_depth == 8 ? "255" : "65535") + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (r.bit_depth == 8) {
    out.reserve(out.size() + r.samples.size());
    for (std::uint16_t s : r.samples) out.push_back(static_cast<std::uint8_t>(s));
  } else {
    out.reserve(out.size() + 2 * r.samples.size());
    for (std::uint16_t s : r.samples) {
      out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
  }
  return out;
}

Raster16 read_raster(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failure on " + path.string());
  return decode_pnm(bytes);
}

void write_raster(const Raster16& r, const std::filesystem::path& path) {
  const auto bytes = encode_pnm(r);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failure on " + path.string());
}

std::vector<Raster16> tile(const Raster16& r, const TileSpec& spec) {
  if (spec.tile_w <= 0 || spec.tile_h <= 0 || spec.grid_cols <= 0 || spec.grid_rows <= 0) {
    throw UsageError("tile spec must be positive");
  }
  if (static_cast<long>(spec.grid_cols) * spec.tile_w > r.width ||
      static_cast<long>(spec.grid_rows) * spec.tile_h > r.height) {
    throw UsageError("tile spec exceeds image bounds");
  }
  std::vector<Raster16> tiles;
  tiles.reserve(static_cast<std::size_t>(spec.grid_cols) * spec.grid_rows);
  const std::size_t row_len = static_cast<std::size_t>(spec.tile_w) * r.channels;
  for (int gy = 0; gy < spec.grid_rows; ++gy) {
    for (int gx = 0; gx < spec.grid_cols; ++gx) {
      Raster16 t(spec.tile_w, spec.tile_h, r.channels, r.bit_depth);
      for (int y = 0; y < spec.tile_h; ++y) {
        const auto src = r.samples.begin() +
                         ((static_cast<std::ptrdiff_t>(gy) * spec.tile_h + y) * r.width +
                          static_cast<std::ptrdiff_t>(gx) * spec.tile_w) * r.channels;
        std::copy(src, src + static_cast<std::ptrdiff_t>(row_len),
                  t.samples.begin() + static_cast<std::ptrdiff_t>(y * row_len));
      }
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

Raster16 crop(const Raster16& r, int width, int height) {
  if (width > r.width || height > r.height || width < 0 || height < 0) {
    throw UsageError("crop exceeds image bounds");
  }
  return tile(r, TileSpec{width, height, 1, 1}).front();
}

}  // namespace natstego
