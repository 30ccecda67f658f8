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


#ifndef QTRAJ_IO_HPP
#define QTRAJ_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qtraj/spectrum.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

/// %.17g, round-trip safe.
std::string format_double(double x);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string body_;
};

/// Columns mu, S_el_curve_or_0, S_inel, S_total, se_inel.
std::string spectrum_csv(const SpectrumResult& s);
nlohmann::json spectrum_json(const SpectrumResult& s);

nlohmann::json bounds_json(const BoundsReport& r);

/// Writes `content` to `path`; throws IoError on failure.
void write_file(const std::string& path, const std::string& content);

/// Creates `dir` (and parents) and checks that a file can be created in it.
void prepare_output_dir(const std::string& dir);

std::string read_file(const std::string& path);

}  // namespace qtraj

#endif  // QTRAJ_IO_HPP
