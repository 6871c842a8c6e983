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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vdme/cli.hpp"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
  std::string value;
  CLI::Option* opt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual density matrix exponentiation simulator"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  CLI::Option* config_opt =
      app.add_option("--config", config_path, "key=value config file");

  std::vector<FlagSpec> flags = {
      {"--seed", "seed", "base seed for all randomness"},
      {"--out", "out", "output csv path"},
      {"--workers", "workers", "worker thread count"},
      {"--T", "T", "total evolution time"},
      {"--r", "r", "segment count (0 picks the default)"},
      {"--dim", "dim", "system dimension"},
      {"--eps-min", "eps_min", "smallest accuracy on the sweep grid"},
      {"--eps-max", "eps_max", "largest accuracy on the sweep grid"},
      {"--points", "points", "grid point count"},
      {"--lambda", "lambda", "noise weight"},
      {"--eta", "eta", "spectral gap parameter"},
      {"--eps1", "eps1", "pass band tolerance"},
      {"--eps2", "eps2", "stop band tolerance"},
      {"--shots", "shots", "monte carlo shot count"},
  };
  for (auto& f : flags) f.opt = app.add_option(f.flag, f.value, f.help);

  CLI::App* sweep = app.add_subcommand(
      "dme-sweep", "accuracy sweep of copy counts and channel error");
  CLI::App* mc = app.add_subcommand(
      "mc-estimate", "monte carlo expectation value estimate");
  CLI::App* filt = app.add_subcommand(
      "filter-design", "minimax cosine filter design");
  CLI::App* qpca = app.add_subcommand(
      "qpca-compare", "copy complexity comparison of spectral filters");
  CLI::App* pure = app.add_subcommand(
      "pure-dme-check", "exactness check of the pure state protocol");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? vdme::kExitOk : vdme::kExitValidation;
  }

  vdme::Config cfg;
  if (config_opt->count() > 0) {
    try {
      cfg = vdme::Config::from_file(config_path);
    } catch (const vdme::IoError& e) {
      std::cerr << "i/o error: " << e.what() << "\n";
      return vdme::kExitIo;
    } catch (const std::exception& e) {
      std::cerr << "validation error: " << e.what() << "\n";
      return vdme::kExitValidation;
    }
  }
  for (const auto& f : flags)
    if (f.opt->count() > 0) cfg.set(f.key, f.value);

  if (sweep->parsed()) return vdme::run_command(vdme::cmd_dme_sweep, cfg);
  if (mc->parsed()) return vdme::run_command(vdme::cmd_mc_estimate, cfg);
  if (filt->parsed()) return vdme::run_command(vdme::cmd_filter_design, cfg);
  if (qpca->parsed()) return vdme::run_command(vdme::cmd_qpca_compare, cfg);
  if (pure->parsed()) return vdme::run_command(vdme::cmd_pure_dme_check, cfg);

  std::cout << app.help();
  return vdme::kExitValidation;
}
