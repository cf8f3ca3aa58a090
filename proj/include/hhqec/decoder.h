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

#ifndef HHQEC_DECODER_H
#define HHQEC_DECODER_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hhqec/dem.h"
#include "hhqec/sim.h"

namespace hhqec {

/// Shortest-path metric restricted to a set of detection events. Paths between two events never
/// pass through the boundary node; the boundary option is kept separately.
struct EventMetric {
    std::vector<int> events;
    std::vector<double> dist;        // k*k, +inf when unreachable
    std::vector<uint64_t> obs;       // k*k observable flips along the path
    std::vector<double> boundary;    // k
    std::vector<uint64_t> boundary_obs;

    size_t size() const { return events.size(); }
    double d(size_t i, size_t j) const { return dist[i * events.size() + j]; }
    uint64_t o(size_t i, size_t j) const { return obs[i * events.size() + j]; }
};

/// Dijkstra from each event. Throws std::runtime_error for an event that reaches neither
/// the boundary nor any other event.
EventMetric all_pairs_paths(const DemGraph &g, const std::vector<int> &events);

struct Matching {
    static constexpr int kBoundary = -1;
    /// Pairs of event indices (into EventMetric::events); second is kBoundary for boundary matches.
    std::vector<std::pair<int, int>> pairs;
    double weight = 0;
    uint64_t observables = 0;
};

/// Exact minimum-weight perfect matching with one boundary copy per event.
Matching match(const EventMetric &m);
/// Splits events into independent clusters and solves each exactly. Same optimum as match().
Matching match_clustered(const EventMetric &m);
/// Exhaustive optimum by dynamic programming over subsets. At most 20 events.
Matching brute_force_match(const EventMetric &m);

/// Decoder with all shortest paths precomputed for one graph. Immutable after construction.
class Decoder {
   public:
    explicit Decoder(const DemGraph &g);
    EventMetric metric(const std::vector<int> &events) const;
    Matching decode(const std::vector<int> &events) const;
    const DemGraph &graph() const { return g_; }

   private:
    DemGraph g_;
    int n_;
    std::vector<double> dist_;      // from detector (row) to any node, boundary excluded as a via
    std::vector<uint64_t> obs_;
};

/// Predicted observable flips for each shot. `detectors` holds at least num_detectors rows
/// (extra observable rows are ignored). Output: one row per observable.
FrameBatch decode_batch(const DemGraph &g, const FrameBatch &detectors, int workers = 0);

struct DecodeSummary {
    size_t shots = 0;
    size_t failures = 0;
    double rate = 0;
    double stderr_ = 0;
};

/// Compares predictions with actual observable rows (row `num_detectors + o` of `detectors`).
DecodeSummary summarize(const FrameBatch &predictions, const FrameBatch &detectors, int num_detectors,
                        int observable = 0);
void write_summary_csv(const std::vector<DecodeSummary> &rows, const std::string &path);

}  // namespace hhqec

#endif
