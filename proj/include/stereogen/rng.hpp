// Copyright 2026 The stereogen authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace stereogen {

/// splitmix64 step. Used for seed derivation and as the engine behind Rng so
/// that streams are reproducible across platforms and standard libraries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic uniform generator. Identical output for identical seeds on
/// every platform; no dependency on implementation-defined distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1) with 53 bits of randomness.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi). Returns lo exactly when lo == hi.
    double next_uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

/// Derives an independent per-sample seed from a global seed and a sample
/// index, so shards can be generated independently and reproducibly.
inline std::uint64_t per_sample_seed(std::uint64_t global_seed, std::uint64_t sample_index) {
    std::uint64_t s = global_seed;
    const std::uint64_t a = splitmix64(s);
    s = sample_index ^ 0xA0761D6478BD642FULL;
    const std::uint64_t b = splitmix64(s);
    s = a ^ b;
    return splitmix64(s);
}

} // namespace stereogen
