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

#include <cmath>

#include "minimax/error.h"
#include "minimax/rng.h"

namespace minimax {

double exponential_from_uniform(double rate, double u) {
  if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
  return -std::log(u) / rate;
}

double sample_exponential(double rate, CounterRng& stream) {
  return exponential_from_uniform(rate, stream.uniform_open0());
}

}  // namespace minimax
