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

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "natstego/stats.hpp"

namespace natstego {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json model_json(const NoiseModel& m) { return {{"a", m.a}, {"b", m.b}, {"iso", m.iso_label}}; }

}  // namespace

std::string to_text(const MimicryReport& r) {
  std::ostringstream out;
  out << "cover_a=" << num(r.cover_model.a) << '\n'
      << "cover_b=" << num(r.cover_model.b) << '\n'
      << "recovered_a=" << num(r.recovered_model.a) << '\n'
      << "recovered_b=" << num(r.recovered_model.b) << '\n'
      << "target_a=" << num(r.target_model.a) << '\n'
      << "target_b=" << num(r.target_model.b) << '\n'
      << "rel_error_a=" << num(r.rel_error_a) << '\n'
      << "rel_error_b=" << num(r.rel_error_b) << '\n'
      << "tol_a=" << num(r.tol_a) << '\n'
      << "tol_b=" << num(r.tol_b) << '\n'
      << "bins_used=" << r.bins_used << '\n'
      << "verdict=" << (r.pass ? "pass" : "fail") << '\n';
  return out.str();
}

std::string to_text(const PayloadReport& r) {
  std::ostringstream out;
  out << "plan=" << r.plan << '\n' << "images=" << r.rates.size() << '\n';
  for (std::size_t i = 0; i < r.rates.size(); ++i) out << "rate." << i << '=' << num(r.rates[i]) << '\n';
  out << "mean_bpp=" << num(r.mean) << '\n' << "min_bpp=" << num(r.min) << '\n' << "max_bpp=" << num(r.max) << '\n';
  out << "histogram_bin_width=" << num(r.bin_width) << '\n' << "histogram=";
  for (std::size_t j = 0; j < r.histogram.size(); ++j) out << (j ? "," : "") << r.histogram[j];
  out << '\n';
  return out.str();
}

std::string to_json(const MimicryReport& r) {
  nlohmann::json j = {
      {"cover_model", model_json(r.cover_model)},
      {"recovered_model", model_json(r.recovered_model)},
      {"target_model", model_json(r.target_model)},
      {"relative_errors", {{"a", r.rel_error_a}, {"b", r.rel_error_b}}},
      {"tolerances", {{"a", r.tol_a}, {"b", r.tol_b}}},
      {"bins_used", r.bins_used},
      {"verdict", r.pass ? "pass" : "fail"},
  };
  return j.dump(2) + "\n";
}

std::string to_json(const std::vector<PayloadReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PayloadReport& r : reports) {
    arr.push_back({{"plan", r.plan},
                   {"rates_bpp", r.rates},
                   {"mean_bpp", r.mean},
                   {"min_bpp", r.min},
                   {"max_bpp", r.max},
                   {"histogram_bin_width", r.bin_width},
                   {"histogram", r.histogram}});
  }
  return nlohmann::json{{"payload_reports", arr}}.dump(2) + "\n";
}

}  // namespace natstego
