// Copyright 2026 The hhqec Authors
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

#ifndef HHQEC_RNG_H
#define HHQEC_RNG_H

#include <cstdint>
#include <random>

namespace hhqec {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Keyed seed for (master seed, stream, counter). Equal keys give equal streams on any thread.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t counter = 0) {
    return splitmix64(seed ^ splitmix64(stream ^ splitmix64(counter + 0x632BE59BD9B4E019ULL)));
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed, uint64_t stream, uint64_t counter = 0) {
    return Rng(derive_seed(seed, stream, counter));
}

}  // namespace hhqec

#endif
