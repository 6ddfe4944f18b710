// Copyright 2026 The Minimax Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MINIMAX_TOOLS_CLI_H_
#define MINIMAX_TOOLS_CLI_H_

#include <cstdint>
#include <string>
#include <vector>

namespace minimax::cli {

// Everything a run depends on; echoed into every output file.
struct RunConfig {
  std::string problem = "gsm";  // gsm | gsm-k | regression
  int d = 10;
  int n = 0;                    // regression sample size; 0 means 2d
  int k = 0;                    // gsm-k loss coordinates
  std::string radius_spec = "sqrt_d";
  double radius = 0.0;          // resolved from radius_spec
  int iters = 500;
  double eta = 0.0;             // 0 selects the theorem rate
  double grid_width = 0.0;      // 0 selects 0.05 B
  int n1 = 1000;
  int n2 = 1000;
  double eval_grid_width = 0.0;
  int eval_mc = 10000;
  std::uint64_t seed = 1;
  bool fast_fb = false;
  unsigned threads = 0;
  std::string out_dir = ".";
};

// "sqrt_d", "<c>_sqrt_d" or a plain number. Throws ConfigError.
double parse_radius(const std::string& spec, int d);

// Fills derived fields and checks problem-specific preconditions.
void resolve(RunConfig& cfg);

int cmd_solve(const RunConfig& cfg);
int cmd_eval_baseline(const RunConfig& cfg, const std::string& baseline,
                      double lambda);
int cmd_eval_report(const std::string& report_path, const RunConfig& overrides,
                    bool have_eval_overrides);
struct ContourGrid {
  double x1_max = 0.0;    // 0 selects 2 B
  int x1_steps = 41;
  double rest_max = 0.0;  // 0 selects 2 (B + sqrt(d))
  int rest_steps = 41;
};
int cmd_contour(const std::string& report_path, const ContourGrid& grid,
                const std::string& out_dir);

// Full command line; returns the process exit code (0, 2 or 3).
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace minimax::cli

#endif  // MINIMAX_TOOLS_CLI_H_
