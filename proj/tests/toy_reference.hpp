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

// Mean Renyi-2 CMI of the four-qubit toy circuit, 64 seeds under root 2024,
// p = 0, 0.1, ..., 1.0. Recorded from toy_sweep; std::normal_distribution is
// implementation defined, so these hold for libstdc++.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace cmispread::testing {

inline constexpr std::uint64_t kToyRoot = 2024;
inline constexpr std::size_t kToySeeds = 64;

inline constexpr std::array<double, 11> kToyDepolarizing = {
    0.0,            0.032337849694, 0.061633711227, 0.083564777546, 0.093794885596, 0.089869514125,
    0.073058510850, 0.048652105976, 0.024125829897, 0.006407956101, 0.0};

inline constexpr std::array<double, 11> kToyHeralded = {
    0.0,            0.022711587526, 0.029575247734, 0.032080775103, 0.042646464533, 0.045933140544,
    0.050538025957, 0.049703820711, 0.036764927940, 0.013639496004, 0.0};

}  // namespace cmispread::testing
