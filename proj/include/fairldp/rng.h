// Copyright 2026 The FairLDP Authors
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

#ifndef FAIRLDP_RNG_H_
#define FAIRLDP_RNG_H_

#include <cstdint>
#include <limits>

namespace fairldp {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small counter-based generator. Streams are derived as
// Stream(seed, counter) so that record i of a perturbation, or trial t of an
// evaluation, draws the same numbers regardless of scheduling. All sampling
// helpers are implemented here rather than through <random> distributions
// so that outputs are identical across standard libraries.
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t state) : state_(state) {}

  static SplitMix64 Stream(uint64_t seed, uint64_t counter) {
    return SplitMix64(Mix64(seed ^ counter));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double NextUnit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., bound - 1}; bound must be positive.
  uint64_t NextBelow(uint64_t bound) {
    const uint64_t limit = max() - max() % bound;
    uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  bool Bernoulli(double p) { return NextUnit() < p; }

  // Standard normal via Box-Muller (one value per call).
  double NextGaussian();

 private:
  uint64_t state_;
};

}  // namespace fairldp

#endif  // FAIRLDP_RNG_H_
