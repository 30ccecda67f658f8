// Copyright 2026 The qtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qtraj/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtraj/errors.hpp"

namespace qtraj {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw DimensionError("CsvTable: row has the wrong width");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ',';
    out += columns_[i];
  }
  out += '\n';
  return out + body_;
}

std::string spectrum_csv(const SpectrumResult& s) {
  CsvTable t({"mu", "S_el_curve_or_0", "S_inel", "S_total", "se_inel"});
  for (std::size_t k = 0; k < s.mu.size(); ++k) {
    const double el = s.elastic_curve.empty() ? 0.0 : s.elastic_curve[k];
    const double se = s.inelastic_se.empty() ? 0.0 : s.inelastic_se[k];
    t.add_row({s.mu[k], el, s.inelastic[k], el + s.inelastic[k], se});
  }
  return t.str();
}

nlohmann::json spectrum_json(const SpectrumResult& s) {
  nlohmann::json j;
  j["estimator"] = to_string(s.estimator);
  j["T"] = std::isfinite(s.horizon) ? nlohmann::json(s.horizon) : nlohmann::json("inf");
  j["theta"] = s.theta;
  j["mu"] = s.mu;
  j["S_inel"] = s.inelastic;
  if (!s.elastic_curve.empty()) j["S_el_curve"] = s.elastic_curve;
  if (!s.inelastic_se.empty()) j["se_inel"] = s.inelastic_se;
  j["delta_atoms"] = nlohmann::json::array();
  for (const auto& a : s.delta_atoms) {
    j["delta_atoms"].push_back({{"location", a.location}, {"coefficient", a.coefficient}});
  }
  return j;
}

nlohmann::json bounds_json(const BoundsReport& r) {
  return {{"theta", r.theta},
          {"mu", r.mu},
          {"product", r.product},
          {"arithmetic_mean", r.arithmetic_mean},
          {"min_product_margin", r.min_product_margin},
          {"min_mean_margin", r.min_mean_margin},
          {"theta_sample", r.theta_sample},
          {"theta_mean_spread", r.theta_mean_spread}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

void prepare_output_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".qtraj_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qtraj
