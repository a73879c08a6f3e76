/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace slotlab::rng {

// Name recorded in every transcript/manifest so runs stay replayable even if
// the default engine ever changes. The engine state sequence of mt19937_64 is
// fully specified by the C++ standard; the u53 conversion below avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline constexpr std::string_view kPrngName = "mt19937_64-u53/v1";

// How per-trial seeds are derived from (master_seed, condition, replication).
inline constexpr std::string_view kSeedAlgoName = "splitmix64-fnv1a64/v1";

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One splitmix64 step used as a stateless scrambler.
constexpr std::uint64_t mix(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64_next(s);
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Top 53 bits -> [0, 1). Bit-stable across platforms.
constexpr double to_unit_interval(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_unit() { return to_unit_interval(engine_()); }

  // Uniform integer in [lo, hi] via rejection-free scaling (bias negligible
  // for the small ranges used here, and fully deterministic).
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const double u = next_unit();
    return lo + static_cast<std::int64_t>(u * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace slotlab::rng
