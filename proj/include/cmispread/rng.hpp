// Copyright 2026 The cmispread Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace cmispread {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of item `index` under `root`. Counter based, so
/// the result does not depend on the order items are processed in.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, std::uint64_t stream = 0) {
    return splitmix64(splitmix64(splitmix64(root) ^ index) ^ (stream * 0xd1b54a32d192ed03ull));
}

inline Rng make_rng(std::uint64_t root, std::uint64_t index, std::uint64_t stream = 0) {
    return Rng(derive_seed(root, index, stream));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng &rng, double p) { return uniform01(rng) < p; }

inline bool coin(Rng &rng) { return rng() >> 63; }

}  // namespace cmispread
