// Copyright 2026 The nfvscale Authors.
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

// Seedable, splittable random stream. Child streams are keyed by a tuple of
// integers, so results do not depend on the order streams are consumed in.

#ifndef NFV_RNG_HPP_
#define NFV_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nfv {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream for the given keys.
  Rng split(std::initializer_list<std::uint64_t> keys) const {
    std::uint64_t s = mix(seed_ ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t k : keys) s = mix(s ^ mix(k + 0x9e3779b97f4a7c15ULL));
    return Rng(s);
  }

  // Uniform on [0, 1) with 53 random bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() { return engine_; }

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace nfv

#endif  // NFV_RNG_HPP_
