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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vdme {

// Counter-based generator built on the SplitMix64 finalizer.
// key    = mix(seed ^ mix(stream * GAMMA + GAMMA))
// out(i) = mix(key + i * GAMMA),  i = 1, 2, ...   (GAMMA = 0x9E3779B97F4A7C15)
// The counter form makes streams independent of call history, so (seed,
// stream) pairs give reproducible sequences across platforms and thread
// schedules. The same construction is easy to port to other languages.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  Rng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream * kGamma + kGamma))), counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1]; safe as a log() argument
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; second value of each pair is cached
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  // index drawn according to `probs` (non-negative, summing to ~1)
  int categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    if (probs.empty()) throw std::invalid_argument("categorical: empty probs");
    return static_cast<int>(probs.size()) - 1;
  }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be positive");
    return next_u64() % n;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// stable sub-seed derivation for per-shot / per-point streams
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return Rng::mix(seed ^ Rng::mix(index * Rng::kGamma + 0x632BE59BD9B4E019ULL));
}

}  // namespace vdme
