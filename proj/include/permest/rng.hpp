/*
 * Copyright 2026 The permest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace permest {

// SplitMix64 step; advances the state and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with explicit stream splitting. Worker w of a run seeded with
// `seed` draws from RngStream(seed, w); streams are decorrelated through the
// SplitMix64 seeding chain, so a run is a pure function of (seed, workers)
// regardless of thread scheduling. The Gaussian sampler is pinned here
// (Box-Muller) instead of relying on std::normal_distribution, whose output
// sequence is implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform sign in {-1, +1}.
  int next_sign() { return (next_u64() >> 63) ? -1 : 1; }

  // Independent standard normal pair.
  void next_gaussian_pair(double& z0, double& z1) {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = mean_square_modulus
  // (real and imaginary parts of variance mean_square_modulus / 2). A zero
  // variance returns exactly 0 without consuming any draws.
  std::complex<double> next_complex_gaussian(double mean_square_modulus) {
    if (!(mean_square_modulus > 0.0)) return {0.0, 0.0};
    double z0 = 0.0;
    double z1 = 0.0;
    next_gaussian_pair(z0, z1);
    const double scale = std::sqrt(0.5 * mean_square_modulus);
    return {scale * z0, scale * z1};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace permest
