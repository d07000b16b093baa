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

#include "natstego/prob_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "natstego/errors.hpp"

namespace natstego {

namespace {

class Writer {
 public:
  void bytes(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw IoError("truncated map container");
  }
  std::string magic() {
    need(4);
    std::string m(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + 4));
    pos_ += 4;
    return m;
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(b_[pos_] | (b_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  bool done() const { return pos_ == b_.size(); }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void spill(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failure on " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_prob_map(const ChangeProbMap& m) {
  Writer w;
  w.bytes("NSPM", 4);
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(m.width()));
  w.u32(static_cast<std::uint32_t>(m.height()));
  const int K = m.support();
  w.u32(static_cast<std::uint32_t>(K));
  w.u32(static_cast<std::uint32_t>(m.quant_step()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int k = -K; k <= K; ++k) w.f64(m.prob(i, k));
  }
  for (std::size_t i = 0; i < m.size(); ++i) w.u8(m.flags(i));
  for (std::size_t i = 0; i < m.size(); ++i) w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(m.center(i))));
  for (std::size_t i = 0; i < m.size(); ++i) w.f64(m.mean(i));
  for (std::size_t i = 0; i < m.size(); ++i) w.f64(m.sigma(i));
  return w.take();
}

ChangeProbMap decode_prob_map(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.magic() != "NSPM") throw IoError("not a probability map container");
  if (r.u32() != 1) throw IoError("unsupported probability map version");
  const std::uint32_t w = r.u32();
  const std::uint32_t h = r.u32();
  const std::uint32_t K = r.u32();
  const std::uint32_t step = r.u32();
  if (K > 255 || (step != 1 && step != 256)) throw IoError("invalid probability map header");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::size_t span = 2 * static_cast<std::size_t>(K) + 1;
  r.need(n * span * 8);
  std::vector<double> probs(n * span);
  std::vector<std::uint64_t> offsets(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] = offsets[i] + span;
    for (std::size_t j = 0; j < span; ++j) probs[i * span + j] = r.f64();
  }
  std::vector<std::uint8_t> flags(n);
  std::vector<std::int16_t> center(n), k_lo(n, static_cast<std::int16_t>(-static_cast<int>(K)));
  std::vector<double> mean(n), sigma(n);
  for (auto& f : flags) f = r.u8();
  for (auto& c : center) c = static_cast<std::int16_t>(r.u16());
  for (auto& v : mean) v = r.f64();
  for (auto& v : sigma) v = r.f64();
  if (!r.done()) throw IoError("trailing bytes in probability map container");
  return ChangeProbMap::from_parts(static_cast<int>(w), static_cast<int>(h), static_cast<int>(step), std::move(flags),
                                   std::move(center), std::move(mean), std::move(sigma), std::move(k_lo),
                                   std::move(offsets), std::move(probs));
}

std::vector<std::uint8_t> encode_cost_map(const CostMap& c) {
  Writer w;
  w.bytes("NSCM", 4);
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(c.width));
  w.u32(static_cast<std::uint32_t>(c.height));
  for (double v : c.rho) w.f64(v);
  return w.take();
}

CostMap decode_cost_map(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.magic() != "NSCM") throw IoError("not a cost map container");
  if (r.u32() != 1) throw IoError("unsupported cost map version");
  CostMap c;
  c.width = static_cast<int>(r.u32());
  c.height = static_cast<int>(r.u32());
  const std::size_t n = static_cast<std::size_t>(c.width) * c.height;
  r.need(n * 8);
  c.rho.resize(n);
  for (auto& v : c.rho) v = r.f64();
  if (!r.done()) throw IoError("trailing bytes in cost map container");
  return c;
}

void save_prob_map(const ChangeProbMap& m, const std::filesystem::path& path) { spill(encode_prob_map(m), path); }
ChangeProbMap load_prob_map(const std::filesystem::path& path) { return decode_prob_map(slurp(path)); }
void save_cost_map(const CostMap& c, const std::filesystem::path& path) { spill(encode_cost_map(c), path); }
CostMap load_cost_map(const std::filesystem::path& path) { return decode_cost_map(slurp(path)); }

}  // namespace natstego
