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

#ifndef HHQEC_BLOSSOM_H
#define HHQEC_BLOSSOM_H

#include <cstdint>
#include <tuple>
#include <vector>

namespace hhqec {

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with dual variables,
/// O(n^3)). Edges are (i, j, weight). With max_cardinality set, only maximum-cardinality
/// matchings are considered. Returns mate[v], or -1 for unmatched vertices.
std::vector<int> max_weight_matching(const std::vector<std::tuple<int, int, int64_t>> &edges,
                                     bool max_cardinality = false);

}  // namespace hhqec

#endif
