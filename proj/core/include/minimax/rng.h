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

#ifndef MINIMAX_RNG_H_
#define MINIMAX_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace minimax {

// Purpose tags for keyed substreams. Values are part of the reproducibility
// contract: changing one changes every result drawn from that stream.
enum class StreamTag : std::uint64_t {
  kPerturbation = 0x1,
  kRisk = 0x2,
  kEvalRisk = 0x3,
  kBayesRisk = 0x4,
  kTest = 0xF,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream keyed by (seed, tag, a, b). Draw i of a stream is a
// pure function of the key and i, so streams can be created anywhere (any
// thread, any order) and always reproduce the same sequence.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
             std::uint64_t b = 0)
      : key_(derive_key(seed, tag, a, b)) {}

  std::uint64_t next_u64() { return splitmix64(key_ + kGolden * (++counter_)); }

  // Uniform on (0, 1]; never returns 0.
  double uniform_open0() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double phi = 2.0 * std::numbers::pi * uniform_open0();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t derive_key(std::uint64_t seed, StreamTag tag,
                                  std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    h = splitmix64(h ^ a);
    return splitmix64(h ^ (b * 0xD6E8FEB86659FD93ULL));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Inverse-CDF draw -ln(u)/rate with u in (0, 1].
double sample_exponential(double rate, CounterRng& stream);

// The transform behind sample_exponential, exposed for exact checks.
double exponential_from_uniform(double rate, double u);

}  // namespace minimax

#endif  // MINIMAX_RNG_H_
