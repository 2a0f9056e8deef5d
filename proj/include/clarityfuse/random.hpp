/*
 * Copyright 2026 The clarityfuse authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLARITYFUSE_RANDOM_HPP_
#define CLARITYFUSE_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace clarityfuse {

// Draws are built directly on mt19937_64 (whose stream the standard pins
// down) instead of the <random> distribution classes, whose output differs
// across standard libraries. Seeded runs therefore reproduce everywhere.

/// Uniform double in [0, 1) with 53 random bits.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be >= 1.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t r = rng();
  while (r >= limit) {
    r = rng();
  }
  return r % bound;
}

/// Standard normal draws via Box-Muller, one spare cached.
class GaussianSampler {
 public:
  double next(std::mt19937_64& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = unit_double(rng);
    while (u1 == 0.0) {
      u1 = unit_double(rng);
    }
    const double u2 = unit_double(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace clarityfuse

#endif  // CLARITYFUSE_RANDOM_HPP_
