// Copyright 2026 The vdmesim Authors
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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "vdme/qpca.hpp"

namespace vdme {

// flat key=value configuration ('#' comments and blank lines ignored);
// command-line flags overlay file values
struct Config {
  std::map<std::string, std::string> kv;

  static Config from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  long get_long(const std::string& key, long def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
};

struct IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// scientific notation, 17 significant digits
std::string format_sci(double v);

// versioned CSV ("# vdmesim csv v1" first line, then optional comment
// metadata lines, a header row, and data rows)
inline constexpr const char* kCsvVersionLine = "# vdmesim csv v1";

void write_csv(const std::string& path,
               const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct CsvFile {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
// rejects files whose version line is missing or unknown
CsvFile read_csv(const std::string& path);

// exit codes: 0 success, 2 validation error, 3 infeasible design, 4 I/O
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitIo = 4;

int cmd_dme_sweep(const Config& cfg);
int cmd_mc_estimate(const Config& cfg);
int cmd_filter_design(const Config& cfg);
int cmd_qpca_compare(const Config& cfg);
int cmd_pure_dme_check(const Config& cfg);

// maps exceptions of a command body onto the exit-code contract
int run_command(int (*cmd)(const Config&), const Config& cfg);

}  // namespace vdme
